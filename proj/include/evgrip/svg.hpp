#pragma once

#include <filesystem>

namespace evgrip {

// Renders each non-time CSV column as one polyline against the first
// column. No plotting dependency; enough to eyeball a run.
void export_svg(const std::filesystem::path& csv_path,
                const std::filesystem::path& svg_path);

}  // namespace evgrip

#include "evgrip/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "evgrip/csvio.hpp"
#include "evgrip/errors.hpp"

namespace evgrip {

void export_svg(const std::filesystem::path& csv_path,
                const std::filesystem::path& svg_path) {
  const CsvTable table = read_csv(csv_path);
  if (table.columns.size() < 2)
    fail(Err::IoFailure, "need a time column plus at least one series");

  constexpr double kW = 860, kH = 420;
  constexpr double kLeft = 70, kRight = 20, kTop = 30, kBottom = 40;
  const double plot_w = kW - kLeft - kRight;
  const double plot_h = kH - kTop - kBottom;

  double tmin = 0, tmax = 1, vmin = 0, vmax = 1;
  if (!table.rows.empty()) {
    tmin = tmax = table.rows.front()[0];
    vmin = vmax = table.rows.front()[1];
    for (const auto& r : table.rows) {
      tmin = std::min(tmin, r[0]);
      tmax = std::max(tmax, r[0]);
      for (std::size_t c = 1; c < r.size(); ++c) {
        vmin = std::min(vmin, r[c]);
        vmax = std::max(vmax, r[c]);
      }
    }
  }
  if (tmax == tmin) tmax = tmin + 1;
  if (vmax == vmin) vmax = vmin + 1;

  const auto sx = [&](double t) {
    return kLeft + (t - tmin) / (tmax - tmin) * plot_w;
  };
  const auto sy = [&](double v) {
    return kTop + (1.0 - (v - vmin) / (vmax - vmin)) * plot_h;
  };

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#ff7f0e", "#9467bd", "#8c564b"};

  std::ofstream out(svg_path, std::ios::trunc);
  if (!out) fail(Err::IoFailure, "cannot open " + svg_path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
      << kLeft + plot_w << "\" y2=\"" << kTop + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";

  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\">%g</text>\n",
                kLeft - 60, kTop + 10, vmax);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\">%g</text>\n",
                kLeft - 60, kTop + plot_h, vmin);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\">%g</text>\n",
                kLeft, kH - 12, tmin);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\">%g (%s)</text>\n",
                kLeft + plot_w - 80, kH - 12, tmax, table.columns[0].c_str());
  out << buf;

  for (std::size_t c = 1; c < table.columns.size(); ++c) {
    const char* color = kColors[(c - 1) % 6];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.2\" points=\"";
    for (const auto& r : table.rows)
      out << sx(r[0]) << ',' << sy(r[c]) << ' ';
    out << "\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" "
                  "fill=\"%s\">%s</text>\n",
                  kLeft + 10 + 130.0 * (c - 1), kTop - 10, color,
                  table.columns[c].c_str());
    out << buf;
  }
  out << "</svg>\n";
  if (!out) fail(Err::IoFailure, "write failed: " + svg_path.string());
}

}  // namespace evgrip

// evgrip command line: closed-loop grasp runs, offline replay of recorded
// event streams, gain sweeps and SVG trace export.

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evgrip/config.hpp"
#include "evgrip/errors.hpp"
#include "evgrip/experiment.hpp"
#include "evgrip/svg.hpp"

namespace {

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty()) out.push_back(std::stod(cell));
  }
  return out;
}

void print_report(const evgrip::RunReport& r) {
  std::printf("slip_events=%u\n", r.slip_events);
  std::printf("total_slip_mm=%.6f\n", r.total_slip_mm);
  std::printf("final_position_pct=%.6f\n", r.final_position_pct);
  std::printf("min_adc=%d\nmax_adc=%d\n", r.min_adc, r.max_adc);
  std::printf("ticks=%llu\n", static_cast<unsigned long long>(r.ticks));
  std::printf("dropped=%d\n", r.dropped ? 1 : 0);
  std::printf("hold_start_ms=%lld\n",
              static_cast<long long>(r.hold_start_ms));
  std::printf("first_detect_ms=%lld\n",
              static_cast<long long>(r.first_detect_ms));
  std::printf("arrest_ms=%lld\n", static_cast<long long>(r.arrest_ms));
  if (r.p99_tick_us > 0) std::printf("p99_tick_us=%.1f\n", r.p99_tick_us);
  std::printf("wall_s=%.3f\n", r.wall_s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"event-driven slip detection and grasp control testbench"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::string events_path, mask_path, hotpixels_path;
  std::string csv_path, svg_path;
  std::string kp_csv = "0.08", ki_csv = "0,4";
  int sockets_port = -1;

  auto* run = app.add_subcommand("run", "run one closed-loop grasp cycle");
  run->add_option("--config", config_path, "run configuration file")
      ->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--sockets", sockets_port,
                  "use the socket link on this port (0 = ephemeral)")
      ->expected(0, 1)
      ->default_str("7402");

  auto* rep = app.add_subcommand("replay",
                                 "offline detector pass over a recording");
  rep->add_option("--events", events_path, "EVS1 event file")->required();
  rep->add_option("--config", config_path, "run configuration file")
      ->required();
  rep->add_option("--mask", mask_path, "recorded contact mask CSV");
  rep->add_option("--hotpixels", hotpixels_path, "recorded hot pixel list");
  rep->add_option("--out", out_dir, "output directory");

  auto* sweep = app.add_subcommand("sweep", "grid of controller gains");
  sweep->add_option("--config", config_path, "run configuration file")
      ->required();
  sweep->add_option("--kp", kp_csv, "comma separated kp values");
  sweep->add_option("--ki", ki_csv, "comma separated ki values");
  sweep->add_option("--out", out_dir, "output directory");

  auto* svg = app.add_subcommand("export-svg", "plot a trace CSV");
  svg->add_option("--csv", csv_path, "input CSV")->required();
  svg->add_option("--svg", svg_path, "output SVG (default: csv + .svg)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      evgrip::RunConfig cfg = evgrip::parse_config_file(config_path);
      if (run->count("--sockets")) {
        cfg.net = evgrip::NetMode::SOCKETS;
        if (sockets_port >= 0)
          cfg.port = static_cast<std::uint16_t>(sockets_port);
      }
      const auto report = evgrip::run_experiment(cfg, out_dir);
      print_report(report);
    } else if (rep->parsed()) {
      evgrip::RunConfig cfg = evgrip::parse_config_file(config_path);
      std::optional<std::filesystem::path> mask, hotpx;
      if (!mask_path.empty()) mask = mask_path;
      if (!hotpixels_path.empty()) hotpx = hotpixels_path;
      evgrip::replay(events_path, mask, hotpx, cfg, out_dir);
      std::printf("replay written to %s\n",
                  (std::filesystem::path(out_dir) / "replay.csv").c_str());
    } else if (sweep->parsed()) {
      evgrip::RunConfig cfg = evgrip::parse_config_file(config_path);
      const auto rows = evgrip::sweep_gains(cfg, parse_list(kp_csv),
                                            parse_list(ki_csv), out_dir);
      std::printf("%zu grid points, summary in %s\n", rows.size(),
                  (std::filesystem::path(out_dir) / "summary.csv").c_str());
    } else if (svg->parsed()) {
      std::filesystem::path target =
          svg_path.empty() ? std::filesystem::path(csv_path + ".svg")
                           : std::filesystem::path(svg_path);
      evgrip::export_svg(csv_path, target);
      std::printf("wrote %s\n", target.c_str());
    }
  } catch (const evgrip::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == evgrip::Err::ConfigInvalid ? 1 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

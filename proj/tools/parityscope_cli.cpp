// Command-line front end: scan, exact, compare, reproduce-fig2.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "parityscope/config.hpp"
#include "parityscope/errors.hpp"
#include "parityscope/fig2.hpp"
#include "parityscope/surface_io.hpp"

namespace ps = parityscope;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> out_dir;
  std::vector<std::string> formats;
  std::optional<unsigned> threads;
};

void add_common(CLI::App* cmd, Overrides& o, bool needs_config) {
  auto* c = cmd->add_option("--config", o.config_path, "run configuration (JSON)");
  if (needs_config) c->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "master seed, overrides the config");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--format", o.formats, "output format: csv, json or matrix (repeatable)")
      ->check(CLI::IsMember({"csv", "json", "matrix"}))
      ->delimiter(',');
  cmd->add_option("--threads", o.threads, "worker threads, 0 = hardware concurrency");
}

void apply(ps::RunConfig& c, const Overrides& o) {
  if (o.seed) c.seed = *o.seed;
  if (o.mode) {
    try {
      c.mode = ps::parse_scan_mode(*o.mode);
    } catch (const ps::DomainError& e) {
      throw ps::ValidationError("mode", e.what());
    }
  }
  if (o.out_dir) c.output.directory = *o.out_dir;
  if (!o.formats.empty()) {
    c.output.formats.clear();
    for (const auto& f : o.formats) c.output.formats.push_back(ps::parse_surface_format(f));
  }
  if (o.threads) c.threads = *o.threads;
}

void print_written(const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) std::cout << "wrote " << p.string() << "\n";
}

int cmd_scan(Overrides o, std::optional<ps::ScanMode> forced) {
  ps::RunConfig c = ps::load_config(o.config_path);
  apply(c, o);
  if (forced) c.mode = *forced;
  const ps::WignerSurface s = ps::run(c);
  print_written(ps::write_surfaces(s, c.output));
  if (s.metadata.invalid_points > 0)
    std::cerr << s.metadata.invalid_points << " point(s) exceeded the Fock cutoff and were marked invalid\n";
  return kExitOk;
}

int cmd_compare(Overrides o) {
  ps::RunConfig c = ps::load_config(o.config_path);
  apply(c, o);
  c.mode = ps::ScanMode::Both;
  const ps::WignerSurface s = ps::run(c);

  std::size_t n = 0, above2 = 0, above3 = 0;
  double sum = 0.0, sum2 = 0.0, worst = 0.0;
  const ps::SurfacePoint* worst_point = nullptr;
  for (const auto& p : s.points) {
    if (!p.valid || !std::isfinite(p.z)) continue;
    ++n;
    sum += p.z;
    sum2 += p.z * p.z;
    if (std::abs(p.z) > 2.0) ++above2;
    if (std::abs(p.z) > 3.0) ++above3;
    if (std::abs(p.z) >= worst) {
      worst = std::abs(p.z);
      worst_point = &p;
    }
  }
  std::printf("points          %zu (invalid %zu)\n", s.points.size(),
              static_cast<std::size_t>(s.metadata.invalid_points));
  std::printf("N per point     %lld\n", static_cast<long long>(s.n_intervals));
  if (n > 0) {
    std::printf("mean z          %+.4f\n", sum / n);
    std::printf("rms z           %.4f\n", std::sqrt(sum2 / n));
    std::printf("|z| > 2         %zu (%.2f%%, Gaussian 4.55%%)\n", above2, 100.0 * above2 / n);
    std::printf("|z| > 3         %zu (%.2f%%, Gaussian 0.27%%)\n", above3, 100.0 * above3 / n);
    std::printf("max |z|         %.4f at (r=%zu, k=%zu), pi_hat %.5f vs exact %.5f\n", worst,
                static_cast<std::size_t>(worst_point->radial_index), static_cast<std::size_t>(worst_point->phase_index),
                worst_point->pi_hat, worst_point->exact_pi);
  }
  if (o.out_dir || !o.formats.empty()) print_written(ps::write_surfaces(s, c.output));
  return kExitOk;
}

int cmd_fig2(const Overrides& o, long long n_intervals) {
  ps::Fig2Options opts;
  if (o.seed) opts.seed = *o.seed;
  if (o.threads) opts.threads = *o.threads;
  opts.n_intervals = n_intervals;
  const std::filesystem::path dir = o.out_dir.value_or("fig2");

  std::vector<ps::SurfaceFormat> formats{ps::SurfaceFormat::Csv, ps::SurfaceFormat::Json, ps::SurfaceFormat::Matrix};
  if (!o.formats.empty()) {
    formats.clear();
    for (const auto& f : o.formats) formats.push_back(ps::parse_surface_format(f));
  }

  const ps::Fig2Result r = ps::reproduce_fig2(opts);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ps::IoError("cannot create " + dir.string() + ": " + ec.message());

  const std::pair<ps::Fig2Panel, const ps::WignerSurface*> panels[] = {
      {ps::Fig2Panel::Vacuum, &r.vacuum},
      {ps::Fig2Panel::Coherent, &r.coherent},
      {ps::Fig2Panel::PhaseDiffused, &r.diffused}};
  for (const auto& [panel, surface] : panels) {
    ps::OutputSpec out;
    out.directory = dir.string();
    out.stem = "fig2_" + std::string(ps::to_string(panel));
    out.formats = formats;
    print_written(ps::write_surfaces(*surface, out));
  }
  const std::string report = r.report();
  const auto summary = dir / "summary.txt";
  std::ofstream f(summary);
  if (!(f << report)) throw ps::IoError("cannot write " + summary.string());
  std::cout << "wrote " << summary.string() << "\n\n" << report;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Displaced-parity Wigner function scans by simulated photon counting"};
  app.set_version_flag("--version", std::string(PARITYSCOPE_CLI_VERSION));
  app.require_subcommand(1);

  Overrides scan_o, exact_o, cmp_o, fig_o;
  long long fig_n = 8000;

  auto* scan = app.add_subcommand("scan", "run a configured scan and write the surface");
  add_common(scan, scan_o, true);
  scan->add_option("--mode", scan_o.mode, "monte_carlo, exact or both");

  auto* exact = app.add_subcommand("exact", "analytic surface only");
  add_common(exact, exact_o, true);

  auto* cmp = app.add_subcommand("compare", "Monte Carlo against exact: z-score report");
  add_common(cmp, cmp_o, true);

  auto* fig = app.add_subcommand("reproduce-fig2", "vacuum, coherent and phase-diffused panels with summary");
  add_common(fig, fig_o, false);
  fig->add_option("--n-intervals", fig_n, "counting intervals per point")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*scan) return cmd_scan(scan_o, std::nullopt);
    if (*exact) return cmd_scan(exact_o, ps::ScanMode::Exact);
    if (*cmp) return cmd_compare(cmp_o);
    if (*fig) return cmd_fig2(fig_o, fig_n);
  } catch (const ps::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ps::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

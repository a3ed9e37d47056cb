#include "fracmax/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "fracmax/config.hpp"
#include "fracmax/errors.hpp"
#include "fracmax/harness.hpp"
#include "fracmax/report.hpp"
#include "fracmax/verify.hpp"

namespace fracmax::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::string out;
  bool fast = false;
};

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("FRACFIELD_SEED");
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t used = 0;
    const auto s = std::stoull(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument(v);
    return s;
  } catch (const std::exception&) {
    throw ConfigError(std::string("FRACFIELD_SEED is not an unsigned integer: ") + v);
  }
}

/// Config file (if any) < FRACFIELD_SEED for an unset seed < flags.
RunConfig resolve(const Common& c) {
  KeyValueFile file;
  if (!c.config.empty()) {
    if (!fs::exists(c.config)) throw ConfigError("config file not found: " + c.config);
    file = KeyValueFile::load(c.config);
  }
  RunConfig cfg = RunConfig::from(file);
  if (!file.has("run.seed"))
    if (auto s = env_seed()) cfg.seed = *s;
  if (c.alpha) cfg.alpha = *c.alpha;
  if (c.seed) cfg.seed = *c.seed;
  if (c.workers) cfg.workers = *c.workers;
  cfg.constants.workers = cfg.workers;
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.fast) {
    cfg.intensities = {250, 500};
    cfg.replicates = 10;
    cfg.grid_m = 32;
    cfg.constants.f3_samples = 20'000;
  }
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* app, Common& c, bool with_config = true) {
  if (with_config) app->add_option("--config", c.config, "Key/value config file (see README)");
  app->add_option("--alpha", c.alpha, "Exponent alpha = 2H in (0, 1) [0.5]");
  app->add_option("--seed", c.seed, "Master seed [config, else $FRACFIELD_SEED, else 20240607]");
  app->add_option("--workers", c.workers, "Worker threads [1]");
  app->add_option("--out", c.out, "Output path");
  app->add_flag("--fast", c.fast, "Small, quick variant");
}

int simulate(const Common& c, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve(c);
  const fs::path root = cfg.output_dir;
  out << "computing constants for alpha = " << cfg.alpha << "\n" << std::flush;
  const consts::ConstantsReport constants = harness::obtain_constants(cfg, root);
  out << "c_V2 = " << constants.c_v2.value << " +- " << constants.c_v2.error << ", c_V3 = " << constants.c_v3.value
      << " +- " << constants.c_v3.error << "\n";
  harness::write_manifest(root, cfg, constants);
  std::size_t failed = 0;
  const auto records = harness::run_campaign(cfg, constants, [&](const harness::ReplicateRecord& r) {
    if (!r.ok) {
      ++failed;
      err << "replicate N=" << r.n << " id=" << r.id << " failed: " << r.error << "\n";
    } else {
      out << "N=" << r.n << " id=" << r.id << " points=" << r.poisson_points + r.grid_points
          << " s2=" << r.report.scaled.s2 << " L=" << r.local_time.value << " (" << r.timings.total << " s)\n"
          << std::flush;
    }
  });
  try {
    const auto rows = report::convergence_report(records, cfg.ratio_guard, std::min<std::size_t>(10, cfg.replicates));
    report::write_all(root, rows);
    report::write_convergence_csv(out, rows);
  } catch (const InsufficientData& e) {
    err << "aggregates skipped: " << e.what() << "\n";
  }
  return failed ? 2 : 0;
}

int constants_compute(const Common& c, std::ostream& out) {
  RunConfig cfg = resolve(c);
  if (c.fast) cfg.constants.f3_samples = 20'000;
  const consts::ConstantsReport r = consts::compute_constants(cfg.alpha, cfg.seed, cfg.constants);
  const std::string text = nlohmann::json(r).dump(2) + "\n";
  if (c.out.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out);
    if (!f) throw InvalidArgument("cannot write " + c.out);
    f << text;
    out << "c_V2 = " << r.c_v2.value << " +- " << r.c_v2.error << "\nc_V3 = " << r.c_v3.value << " +- "
        << r.c_v3.error << "\nwritten to " << c.out << "\n";
  }
  return 0;
}

int constants_table(const std::string& path, std::ostream& out) {
  const auto& fd = palm::EdgeLengthDensity::shared();
  std::ostringstream csv;
  csv << "ell,f_d\n";
  char buf[64];
  const auto values = fd.values();
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", static_cast<double>(k) * fd.step(), values[k]);
    csv << buf;
  }
  if (path.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(path);
    if (!f) throw InvalidArgument("cannot write " + path);
    f << csv.str();
  }
  return 0;
}

int typical_cell(std::size_t samples, const Common& c, const std::string& angle, std::ostream& out) {
  const RunConfig cfg = resolve(c);
  const palm::CoupleAngle convention = parse_couple_angle(angle.empty() ? to_string(cfg.couple_angle) : angle);
  rng::Stream stream = rng::substream(cfg.seed, "typical-cell");
  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out);
    if (!file) throw InvalidArgument("cannot write " + c.out);
  }
  std::ostream& dst = c.out.empty() ? out : file;
  dst << "r,u1x,u1y,u2x,u2y,u3x,u3y,d12,d13,d23,area,couple_d1,couple_d2,couple_theta\n";
  char buf[512];
  for (std::size_t i = 0; i < samples; ++i) {
    const auto s = palm::sample_typical_cell(stream);
    const auto cp = palm::couple_of(s, convention);
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                  s.r, s.u[0].x, s.u[0].y, s.u[1].x, s.u[1].y, s.u[2].x, s.u[2].y, s.d12, s.d13, s.d23, s.area(),
                  cp.d1, cp.d2, cp.theta);
    dst << buf;
  }
  return 0;
}

int regenerate_report(const std::string& dir, std::ostream& out) {
  const fs::path root = dir;
  double guard = 0.01;
  if (fs::exists(root / "manifest.json")) {
    std::ifstream in(root / "manifest.json");
    const auto m = nlohmann::json::parse(in, nullptr, false);
    if (!m.is_discarded() && m.contains("config"))
      guard = m["config"]["harness"].value("ratio_guard", guard);
  }
  const auto records = harness::load_records(root);
  const auto rows = report::convergence_report(records, guard);
  report::write_all(root, rows);
  report::write_convergence_csv(out, rows);
  return 0;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional Brownian fields on Poisson-Delaunay point sets: increment statistics, "
               "local time and limit constants.",
               "fracmax"};
  app.require_subcommand(1);

  Common sim, cst, ver, tc;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a convergence campaign");
  add_common(simulate_cmd, sim);

  auto* constants_cmd = app.add_subcommand("constants", "Compute c_V2 and c_V3 (default action: compute)");
  add_common(constants_cmd, cst);
  auto* compute_cmd = constants_cmd->add_subcommand("compute", "Compute the constants as JSON");
  add_common(compute_cmd, cst);
  std::string fd_out;
  auto* table_cmd = constants_cmd->add_subcommand("table-fd", "Dump the typical edge-length density table");
  table_cmd->add_option("--out", fd_out, "CSV path (ell,f_d)");
  constants_cmd->require_subcommand(0, 1);

  auto* verify_cmd = app.add_subcommand("verify", "Run the oracle suites");
  add_common(verify_cmd, ver);

  std::size_t samples = 1000;
  std::string angle;
  auto* cell_cmd = app.add_subcommand("typical-cell", "Dump typical-cell and typical-couple samples as CSV");
  add_common(cell_cmd, tc);
  cell_cmd->add_option("--samples", samples, "Number of samples [1000]");
  cell_cmd->add_option("--angle", angle, "Couple angle convention: counterclockwise | unsigned");

  std::string run_dir;
  auto* report_cmd = app.add_subcommand("report", "Regenerate aggregates and plots of a run directory");
  report_cmd->add_option("--run", run_dir, "Run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*simulate_cmd) return simulate(sim, out, err);
    if (*constants_cmd) {
      if (*table_cmd) return constants_table(fd_out, out);
      return constants_compute(cst, out);
    }
    if (*verify_cmd) {
      const RunConfig cfg = resolve(ver);
      return verify::run_all(cfg.seed, ver.fast, out) ? 0 : 2;
    }
    if (*cell_cmd) return typical_cell(samples, tc, angle, out);
    if (*report_cmd) return regenerate_report(run_dir, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.error_class() == ErrorClass::validation ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace fracmax::cli

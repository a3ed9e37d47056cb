#include "fracmax/harness.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <tuple>

#include "fracmax/errors.hpp"
#include "fracmax/parallel.hpp"

#ifndef FRACMAX_VERSION
#define FRACMAX_VERSION "0.0.0-unknown"
#endif

namespace fracmax::harness {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t key_of(double v) noexcept { return std::bit_cast<std::uint64_t>(v); }

nlohmann::json estimate_json(const ltime::LocalTimeEstimate& e) {
  return {{"value", e.value}, {"epsilon", e.epsilon}, {"grid_m", e.grid_m}, {"level", e.level}};
}

ltime::LocalTimeEstimate estimate_from(const nlohmann::json& j) {
  return {j.at("value").get<double>(), j.at("epsilon").get<double>(),
          j.at("grid_m").get<std::size_t>(), j.at("level").get<double>()};
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
}

struct BuildTimes {
  double sample_points = 0.0;
  double factorize_and_draw = 0.0;
  double triangulate = 0.0;
};

Replicate build(const RunConfig& cfg, double n, std::size_t id, BuildTimes* times) {
  const FieldParams params{cfg.sigma2, cfg.alpha};
  params.validate();
  const std::uint64_t a = key_of(cfg.alpha), nk = key_of(n);

  auto t0 = Clock::now();
  geom::WindowSpec spec{n, geom::WindowSpec::default_pad(n, cfg.pad_min, cfg.pad_scale)};
  rng::Stream point_stream = rng::substream(cfg.seed, "poisson", {a, nk, id});
  PointSet poisson = geom::sample_poisson(spec, point_stream);
  PointSet joint = poisson.concat(ltime::make_grid(cfg.grid_m));
  if (times) times->sample_points = seconds_since(t0);

  t0 = Clock::now();
  Replicate r;
  r.poisson_points = poisson.size();
  {
    const GaussianSampler sampler(params, joint);
    rng::Stream s1 = rng::substream(cfg.seed, "w1", {a, nk, id});
    rng::Stream s2 = rng::substream(cfg.seed, "w2", {a, nk, id});
    r.scene.w1 = sampler.draw(s1);
    r.scene.w2 = sampler.draw(s2);
  }
  r.scene.params = params;
  r.scene.pts = std::move(joint);
  if (times) times->factorize_and_draw = seconds_since(t0);

  t0 = Clock::now();
  r.complex = geom::triangulate(poisson);
  r.selection = geom::select_ordered(r.complex);
  if (times) times->triangulate = seconds_since(t0);
  return r;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

Replicate build_replicate(const RunConfig& cfg, double n, std::size_t id) {
  return build(cfg, n, id, nullptr);
}

ReplicateRecord run_replicate(const RunConfig& cfg, const consts::ConstantsReport& constants,
                              double n, std::size_t id) {
  ReplicateRecord rec;
  rec.alpha = cfg.alpha;
  rec.n = n;
  rec.id = id;
  const auto start = Clock::now();
  try {
    if (constants.alpha != cfg.alpha)
      throw InvalidArgument("constants were computed for alpha = " + format_number(constants.alpha));
    BuildTimes bt;
    const Replicate r = build(cfg, n, id, &bt);
    rec.timings.sample_points = bt.sample_points;
    rec.timings.factorize_and_draw = bt.factorize_and_draw;
    rec.timings.triangulate = bt.triangulate;

    const auto t0 = Clock::now();
    rec.poisson_points = r.poisson_points;
    rec.grid_points = r.scene.pts.size() - r.poisson_points;
    rec.report = stats::increment_report(r.scene, r.selection, n);
    rec.tie_edges = rec.report.ties;
    rec.v2_residual = rec.report.v2_residual();
    rec.v3_residual = rec.report.v3_residual();
    if (!(rec.v2_residual <= cfg.identity_tolerance) || !(rec.v3_residual <= cfg.identity_tolerance))
      throw IdentityViolation("decomposition residuals " + std::to_string(rec.v2_residual) + ", " +
                              std::to_string(rec.v3_residual));
    const double eps = cfg.epsilon_for();
    rec.local_time = ltime::estimate_local_time(r.scene, cfg.grid_m, eps, cfg.level);
    rec.local_time_half = ltime::estimate_local_time(r.scene, cfg.grid_m, 0.5 * eps, cfg.level);
    rec.target_v2 = constants.c_v2.value * rec.local_time.value;
    rec.target_v3 = constants.c_v3.value * rec.local_time.value;
    rec.timings.statistics = seconds_since(t0);
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  rec.timings.total = seconds_since(start);
  return rec;
}

void to_json(nlohmann::json& j, const ReplicateRecord& r) {
  j = nlohmann::json{{"alpha", r.alpha}, {"n", r.n}, {"replicate_id", r.id}, {"ok", r.ok}};
  if (!r.ok) {
    j["error"] = r.error;
    return;
  }
  j["points"] = {{"poisson", r.poisson_points}, {"grid", r.grid_points}};
  j["increment_report"] = r.report;
  j["counts"] = {{"edges", r.report.edges}, {"triangles", r.report.triangles}};
  j["scaled"] = {{"s2", r.report.scaled.s2}, {"s3", r.report.scaled.s3}};
  j["tie_edges"] = r.tie_edges;
  j["residuals"] = {{"v2", r.v2_residual}, {"v3", r.v3_residual}};
  j["local_time"] = estimate_json(r.local_time);
  j["local_time_half_epsilon"] = estimate_json(r.local_time_half);
  j["targets"] = {{"c_v2_l", r.target_v2}, {"c_v3_l", r.target_v3}};
}

void from_json(const nlohmann::json& j, ReplicateRecord& r) {
  r = ReplicateRecord{};
  r.alpha = j.at("alpha").get<double>();
  r.n = j.at("n").get<double>();
  r.id = j.at("replicate_id").get<std::size_t>();
  r.ok = j.at("ok").get<bool>();
  if (!r.ok) {
    r.error = j.value("error", std::string());
    return;
  }
  r.poisson_points = j.at("points").at("poisson").get<std::size_t>();
  r.grid_points = j.at("points").at("grid").get<std::size_t>();
  r.report = j.at("increment_report").get<stats::IncrementReport>();
  r.tie_edges = j.at("tie_edges").get<std::size_t>();
  r.report.ties = r.tie_edges;
  r.v2_residual = j.at("residuals").at("v2").get<double>();
  r.v3_residual = j.at("residuals").at("v3").get<double>();
  r.local_time = estimate_from(j.at("local_time"));
  r.local_time_half = estimate_from(j.at("local_time_half_epsilon"));
  r.target_v2 = j.at("targets").at("c_v2_l").get<double>();
  r.target_v3 = j.at("targets").at("c_v3_l").get<double>();
}

fs::path record_path(const fs::path& root, double alpha, double n, std::size_t id) {
  return root / format_number(alpha) / format_number(n) / (std::to_string(id) + ".json");
}

void write_record(const fs::path& root, const ReplicateRecord& r) {
  const fs::path path = record_path(root, r.alpha, r.n, r.id);
  write_text(path, nlohmann::json(r).dump(2) + "\n");
  const nlohmann::json timing{{"sample_points", r.timings.sample_points},
                              {"factorize_and_draw", r.timings.factorize_and_draw},
                              {"triangulate", r.timings.triangulate},
                              {"statistics", r.timings.statistics},
                              {"total", r.timings.total}};
  fs::path sidecar = path;
  sidecar.replace_extension(".timing.json");
  write_text(sidecar, timing.dump(2) + "\n");
}

std::vector<ReplicateRecord> load_records(const fs::path& root) {
  std::vector<ReplicateRecord> out;
  if (!fs::exists(root)) throw InvalidArgument("run directory " + root.string() + " does not exist");
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (entry.path().extension() != ".json" || name.ends_with(".timing.json") ||
        entry.path().parent_path() == root)
      continue;
    std::ifstream in(entry.path());
    try {
      out.push_back(nlohmann::json::parse(in).get<ReplicateRecord>());
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("malformed record " + entry.path().string() + ": " + e.what());
    }
  }
  std::sort(out.begin(), out.end(), [](const ReplicateRecord& a, const ReplicateRecord& b) {
    return std::tie(a.alpha, a.n, a.id) < std::tie(b.alpha, b.n, b.id);
  });
  return out;
}

consts::ConstantsReport obtain_constants(const RunConfig& cfg, const fs::path& root) {
  if (!cfg.constants_file.empty()) {
    std::ifstream in(cfg.constants_file);
    if (!in) throw ConfigError("cannot open constants file " + cfg.constants_file);
    auto c = nlohmann::json::parse(in).get<consts::ConstantsReport>();
    if (c.alpha != cfg.alpha)
      throw ConfigError("constants file is for alpha = " + format_number(c.alpha));
    return c;
  }
  const fs::path manifest = root / "manifest.json";
  if (fs::exists(manifest)) {
    std::ifstream in(manifest);
    const auto m = nlohmann::json::parse(in, nullptr, false);
    if (!m.is_discarded() && m.contains("constants") && m.contains("config")) {
      const nlohmann::json current = cfg;
      const auto c = m.at("constants").get<consts::ConstantsReport>();
      if (c.alpha == cfg.alpha && c.seed == cfg.seed && m.at("config").at("consts") == current.at("consts"))
        return c;
    }
  }
  return consts::compute_constants(cfg.alpha, cfg.seed, cfg.constants);
}

std::string version_string() { return FRACMAX_VERSION; }

void write_manifest(const fs::path& root, const RunConfig& cfg, const consts::ConstantsReport& constants) {
  const nlohmann::json m{{"version", version_string()}, {"config", cfg}, {"constants", constants}};
  write_text(root / "manifest.json", m.dump(2) + "\n");
}

std::vector<ReplicateRecord> run_campaign(const RunConfig& cfg, const consts::ConstantsReport& constants,
                                          const Progress& progress) {
  cfg.validate();
  struct Job {
    double n;
    std::size_t id;
  };
  std::vector<Job> jobs;
  for (double n : cfg.intensities)
    for (std::size_t id = 0; id < cfg.replicates; ++id) jobs.push_back({n, id});
  // Largest intensities first so the long jobs do not straggle at the end.
  std::stable_sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) { return a.n > b.n; });

  const fs::path root = cfg.output_dir;
  std::vector<ReplicateRecord> records(jobs.size());
  std::mutex report_mutex;
  parallel_for(jobs.size(), cfg.workers, [&](std::size_t k) {
    ReplicateRecord rec = run_replicate(cfg, constants, jobs[k].n, jobs[k].id);
    write_record(root, rec);
    if (progress) {
      std::lock_guard lock(report_mutex);
      progress(rec);
    }
    records[k] = std::move(rec);
  });
  std::sort(records.begin(), records.end(), [](const ReplicateRecord& a, const ReplicateRecord& b) {
    return std::tie(a.n, a.id) < std::tie(b.n, b.id);
  });
  return records;
}

}  // namespace fracmax::harness

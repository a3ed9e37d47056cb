#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fracmax/errors.hpp"
#include "fracmax/harness.hpp"
#include "fracmax/report.hpp"

using namespace fracmax;
namespace fs = std::filesystem;
using doctest::Approx;

namespace {

RunConfig small_config(const fs::path& root) {
  RunConfig cfg;
  cfg.intensities = {150, 300};
  cfg.replicates = 10;
  cfg.grid_m = 16;
  cfg.constants.nodes = 11;
  cfg.constants.f3_samples = 10'000;
  cfg.output_dir = root.string();
  return cfg;
}

const consts::ConstantsReport& small_constants() {
  static const consts::ConstantsReport c = [] {
    consts::ConstantsOptions opt;
    opt.nodes = 11;
    opt.f3_samples = 10'000;
    return consts::compute_constants(0.5, RunConfig{}.seed, opt);
  }();
  return c;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("replicates are deterministic and self-consistent") {
  const RunConfig cfg = small_config(fresh_dir("fracmax_h1"));
  const auto a = harness::run_replicate(cfg, small_constants(), 300, 4);
  const auto b = harness::run_replicate(cfg, small_constants(), 300, 4);
  REQUIRE(a.ok);
  CHECK(nlohmann::json(a).dump() == nlohmann::json(b).dump());
  CHECK(a.grid_points == 256);
  CHECK(a.v2_residual < 1e-9);
  CHECK(a.v3_residual < 1e-9);
  CHECK(a.local_time_half.epsilon == Approx(0.5 * a.local_time.epsilon));
  CHECK(a.target_v2 == Approx(small_constants().c_v2.value * a.local_time.value));
  CHECK(a.target_v3 == Approx(small_constants().c_v3.value * a.local_time.value));
  const auto other = harness::run_replicate(cfg, small_constants(), 300, 5);
  CHECK(other.report.v2_max != a.report.v2_max);

  const auto rep = harness::build_replicate(cfg, 300, 4);
  CHECK(rep.scene.pts.size() == rep.poisson_points + 256);
  for (std::size_t i = 0; i < rep.poisson_points; ++i) CHECK(rep.scene.pts.role(i) == PointRole::poisson);
  CHECK(rep.scene.pts.role(rep.poisson_points) == PointRole::grid);
}

TEST_CASE("records persist and reload") {
  const fs::path root = fresh_dir("fracmax_h2");
  const RunConfig cfg = small_config(root);
  const auto r = harness::run_replicate(cfg, small_constants(), 150, 2);
  harness::write_record(root, r);
  const fs::path path = harness::record_path(root, 0.5, 150, 2);
  CHECK(path == root / "0.5" / "150" / "2.json");
  CHECK(fs::exists(path));
  CHECK(fs::exists(root / "0.5" / "150" / "2.timing.json"));
  const auto loaded = harness::load_records(root);
  REQUIRE(loaded.size() == 1);
  CHECK(nlohmann::json(loaded[0]).dump() == nlohmann::json(r).dump());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  for (const char* key : {"alpha", "n", "replicate_id", "ok", "increment_report", "counts", "scaled",
                          "tie_edges", "residuals", "local_time", "local_time_half_epsilon", "targets"})
    CHECK(j.contains(key));
  CHECK_FALSE(j.contains("timings"));
  fs::remove_all(root);
}

TEST_CASE("campaign, manifest and aggregates") {
  const fs::path root = fresh_dir("fracmax_h3");
  RunConfig cfg = small_config(root);
  cfg.workers = 2;
  std::size_t seen = 0;
  const auto records = harness::run_campaign(cfg, small_constants(), [&](const auto&) { ++seen; });
  CHECK(seen == 20);
  REQUIRE(records.size() == 20);
  CHECK(std::is_sorted(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::pair(a.n, a.id) < std::pair(b.n, b.id);
  }));
  for (const auto& r : records) CHECK(r.ok);

  // worker count does not change results
  RunConfig serial = small_config(fresh_dir("fracmax_h3s"));
  const auto again = harness::run_campaign(serial, small_constants());
  for (std::size_t i = 0; i < records.size(); ++i)
    CHECK(nlohmann::json(records[i]).dump() == nlohmann::json(again[i]).dump());
  fs::remove_all(serial.output_dir);

  harness::write_manifest(root, cfg, small_constants());
  const auto cached = harness::obtain_constants(cfg, root);
  CHECK(cached.c_v3.value == small_constants().c_v3.value);
  CHECK(harness::version_string().size() > 0);

  const auto rows = report::convergence_report(records, cfg.ratio_guard);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n == 150);
  CHECK(rows[1].replicates == 10);
  CHECK(rows[1].edges_per_n > 2.0);
  CHECK(rows[1].edges_per_n < 4.0);
  auto shuffled = records;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937(7));
  const auto rows2 = report::convergence_report(shuffled, cfg.ratio_guard);
  CHECK(nlohmann::json(rows).dump() == nlohmann::json(rows2).dump());

  report::write_all(root, rows);
  for (const char* f : {"convergence.csv", "convergence.json", "corr_vs_n.svg", "ratio_vs_n.svg"})
    CHECK(fs::exists(root / f));
  std::ifstream csv(root / "convergence.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "alpha,N,replicates,corr_s2,corr_s3,ratio2_median,ratio2_iqr,ratio3_median,ratio3_iqr,"
        "edges_per_n,triangles_per_n,skew_v2g,kurt_v2g");

  std::vector<harness::ReplicateRecord> one(records.begin(), records.begin() + 10);
  CHECK_THROWS_AS(report::convergence_report(one), InsufficientData);
  fs::remove_all(root);
}

TEST_CASE("failed replicates are recorded, not dropped") {
  RunConfig cfg = small_config(fresh_dir("fracmax_h4"));
  cfg.identity_tolerance = 1e-300;
  const auto r = harness::run_replicate(cfg, small_constants(), 150, 0);
  if (!r.ok) CHECK(r.error.find("decomposition") != std::string::npos);
  std::vector<harness::ReplicateRecord> recs;
  for (std::size_t id = 0; id < 10; ++id)
    for (double n : {150.0, 300.0}) {
      harness::ReplicateRecord x;
      x.alpha = 0.5;
      x.n = n;
      x.id = id;
      x.ok = id != 0;
      x.error = x.ok ? "" : "boom";
      recs.push_back(x);
    }
  CHECK_THROWS_AS(report::convergence_report(recs), InsufficientData);
}

TEST_CASE("report helpers") {
  CHECK(report::pearson({1, 2, 3}, {2, 4, 6.5}) > 0.99);
  const auto s = report::spread({4, 1, 3, 2, 5});
  CHECK(s.median == 3);
  CHECK(s.q1 == 2);
  CHECK(s.q3 == 4);
  CHECK(s.iqr == 2);
  CHECK(harness::format_number(4000) == "4000");
  CHECK(harness::format_number(0.5) == "0.5");
}

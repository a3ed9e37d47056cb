#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracmax/config.hpp"
#include "fracmax/consts.hpp"
#include "fracmax/geom.hpp"
#include "fracmax/ltime.hpp"
#include "fracmax/stats.hpp"

namespace fracmax::harness {

/// Everything built for one replicate: the joint scene (Poisson points first,
/// then the m x m grid), the triangulation of the Poisson points and the
/// ordered selection.
struct Replicate {
  SampledScene scene;
  geom::DelaunayComplex complex;
  geom::OrderedSelection selection;
  std::size_t poisson_points = 0;
};

/// Deterministic in (cfg.seed, alpha, n, id): every random draw uses a named substream.
Replicate build_replicate(const RunConfig& cfg, double n, std::size_t id);

struct Timings {
  double sample_points = 0.0;
  double factorize_and_draw = 0.0;
  double triangulate = 0.0;
  double statistics = 0.0;
  double total = 0.0;
};

struct ReplicateRecord {
  double alpha = 0.0;
  double n = 0.0;
  std::size_t id = 0;
  bool ok = false;
  std::string error;

  std::size_t poisson_points = 0;
  std::size_t grid_points = 0;
  stats::IncrementReport report;
  std::size_t tie_edges = 0;
  double v2_residual = 0.0;
  double v3_residual = 0.0;
  ltime::LocalTimeEstimate local_time;
  ltime::LocalTimeEstimate local_time_half;  ///< same scene at epsilon / 2
  double target_v2 = 0.0;                    ///< c_V2 * L
  double target_v3 = 0.0;                    ///< c_V3 * L

  Timings timings;  ///< kept out of the record JSON; see write_record
};

/// One full replicate. Module errors are caught and stored in the record;
/// a decomposition residual above cfg.identity_tolerance is an error too.
ReplicateRecord run_replicate(const RunConfig& cfg, const consts::ConstantsReport& constants,
                              double n, std::size_t id);

void to_json(nlohmann::json& j, const ReplicateRecord& r);
void from_json(const nlohmann::json& j, ReplicateRecord& r);

/// run/<alpha>/<N>/<id>.json
std::filesystem::path record_path(const std::filesystem::path& root, double alpha, double n,
                                  std::size_t id);

/// Writes the record and a `<id>.timing.json` sidecar next to it.
void write_record(const std::filesystem::path& root, const ReplicateRecord& r);
std::vector<ReplicateRecord> load_records(const std::filesystem::path& root);

/// Loads constants from cfg.constants_file, else reuses those cached in the
/// manifest under `root` when alpha and options match, else computes them.
consts::ConstantsReport obtain_constants(const RunConfig& cfg, const std::filesystem::path& root);

/// Git-describe-style version of this build.
std::string version_string();

void write_manifest(const std::filesystem::path& root, const RunConfig& cfg,
                    const consts::ConstantsReport& constants);

using Progress = std::function<void(const ReplicateRecord&)>;

/// Runs every (N, replicate) pair on cfg.workers threads and persists each
/// record as soon as it finishes. Returns records ordered by (N, id).
std::vector<ReplicateRecord> run_campaign(const RunConfig& cfg,
                                          const consts::ConstantsReport& constants,
                                          const Progress& progress = {});

std::string format_number(double v);  ///< %g, used for directory names

}  // namespace fracmax::harness

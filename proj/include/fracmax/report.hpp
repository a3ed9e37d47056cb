#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "fracmax/harness.hpp"

namespace fracmax::report {

struct Spread {
  double median = 0.0;
  double iqr = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  std::size_t count = 0;
};

struct ConvergenceRow {
  double alpha = 0.0;
  double n = 0.0;
  std::size_t replicates = 0;  ///< successful replicates
  std::size_t failed = 0;
  std::size_t guarded = 0;     ///< replicates with L <= guard, left out of the ratios
  double corr_s2 = 0.0;        ///< corr(s2, c_V2 L)
  double corr_s3 = 0.0;        ///< corr(s3, c_V3 L)
  Spread ratio2;               ///< s2 / (c_V2 L)
  Spread ratio3;               ///< s3 / (c_V3 L)
  Spread ratio2_cross;         ///< (sqrt3/3) N^{-(2-a)/4} V2^(2/1) / (c_V2 L)
  double edges_per_n = 0.0;
  double triangles_per_n = 0.0;
  double skew_v2g = 0.0;       ///< skewness of V2^(1) + V2^(2)
  double kurt_v2g = 0.0;       ///< excess kurtosis of V2^(1) + V2^(2)
  double sd_v2_cross = 0.0;    ///< sd of V2^(2/1)
  double sd_v2_parts = 0.0;    ///< sd of V2^(1) + V2^(2)
  double mean_local_time = 0.0;
  double mean_local_time_gap = 0.0;  ///< mean |L(eps) - L(eps/2)|
};

/// Per-intensity aggregates. Requires >= 2 intensities with >= 10 successful
/// replicates each (InsufficientData otherwise). Invariant under reordering
/// of `records`.
std::vector<ConvergenceRow> convergence_report(const std::vector<harness::ReplicateRecord>& records,
                                               double ratio_guard = 0.01,
                                               std::size_t min_replicates = 10);

double pearson(const std::vector<double>& x, const std::vector<double>& y);
Spread spread(std::vector<double> v);

/// Columns: alpha,N,replicates,corr_s2,corr_s3,ratio2_median,ratio2_iqr,
/// ratio3_median,ratio3_iqr,edges_per_n,triangles_per_n,skew_v2g,kurt_v2g
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);
void to_json(nlohmann::json& j, const ConvergenceRow& r);

/// convergence.csv, convergence.json, corr_vs_n.svg and ratio_vs_n.svg under root.
void write_all(const std::filesystem::path& root, const std::vector<ConvergenceRow>& rows);

}  // namespace fracmax::report

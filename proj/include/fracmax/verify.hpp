#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fracmax::verify {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Empty-circumdisk and brute-force triangle-set comparison on random point sets.
Check delaunay_bruteforce(std::uint64_t seed, int sets, int max_points);
/// Empirical covariance of sampled fields against the analytic covariance (3 sigma).
Check covariance_monte_carlo(std::uint64_t seed, int draws);
/// Normalization of f_D and mean typical-cell area.
Check palm_consistency(std::uint64_t seed, int samples);
/// F2 evenness and nested quadrature against flat Monte Carlo for c_V2.
Check constants_dual_method(std::uint64_t seed, int samples, double rel_tol);

/// Runs every suite, printing one PASS/FAIL line each. True if all pass.
bool run_all(std::uint64_t seed, bool fast, std::ostream& out);

}  // namespace fracmax::verify

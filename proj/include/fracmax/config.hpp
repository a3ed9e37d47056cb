#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fracmax/consts.hpp"
#include "fracmax/palm.hpp"

namespace fracmax {

/// Flat `[section]` / `key = value` file. Values are numbers, booleans,
/// double-quoted strings or one-line arrays of numbers; `#` starts a comment.
class KeyValueFile {
 public:
  using Value = std::variant<double, bool, std::string, std::vector<double>>;

  static KeyValueFile parse(const std::string& text, const std::string& origin = "<string>");
  static KeyValueFile load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.contains(key); }
  const std::map<std::string, Value>& values() const noexcept { return values_; }

  double number(const std::string& key, double fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;

 private:
  std::map<std::string, Value> values_;  ///< keyed by "section.key"
  std::string origin_;
};

/// Every tunable of a campaign. Defaults are the documented design values.
struct RunConfig {
  // [run]
  double alpha = 0.5;
  double sigma2 = 1.0;
  std::vector<double> intensities{500, 1000, 2000, 4000};
  std::size_t replicates = 30;
  std::uint64_t seed = 20240607;
  std::string output_dir = "run";
  std::size_t workers = 1;
  // [geom]
  double pad_min = 0.05;
  double pad_scale = 5.0;
  // [ltime]
  std::size_t grid_m = 64;
  std::string epsilon_rule = "h_alpha";  ///< "h_alpha" or "fixed"
  double epsilon = 0.0;                  ///< used when epsilon_rule = "fixed"
  double level = 0.0;
  // [palm]
  palm::CoupleAngle couple_angle = palm::CoupleAngle::counterclockwise;
  // [consts]
  consts::ConstantsOptions constants;
  std::string constants_file;  ///< precomputed constants JSON; empty to compute
  // [harness]
  double ratio_guard = 0.01;
  double identity_tolerance = 1e-9;

  void validate() const;
  double epsilon_for() const;

  static RunConfig from(const KeyValueFile& file);
  static RunConfig load(const std::filesystem::path& path);
  std::string dump() const;
};

void to_json(nlohmann::json& j, const RunConfig& c);

std::string to_string(palm::CoupleAngle v);
palm::CoupleAngle parse_couple_angle(const std::string& s);

}  // namespace fracmax

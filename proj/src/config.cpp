#include "fracmax/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fracmax/errors.hpp"
#include "fracmax/ltime.hpp"

namespace fracmax {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

double parse_number(const std::string& text, const std::string& where) {
  std::string t;
  std::copy_if(text.begin(), text.end(), std::back_inserter(t), [](char c) { return c != '_'; });
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError(where + ": cannot parse value '" + text + "'");
  }
  if (used != t.size()) throw ConfigError(where + ": cannot parse value '" + text + "'");
  return v;
}

std::string format_number(double v) {
  // Shortest text that parses back to the same double.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::size_t as_count(double v, const std::string& key) {
  if (!(v >= 0.0) || v != std::floor(v)) throw ConfigError(key + " must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text, const std::string& origin) {
  KeyValueFile file;
  file.origin_ = origin;
  std::istringstream in(text);
  std::string raw, section;
  for (int lineno = 1; std::getline(in, raw); ++lineno) {
    const std::string where = origin + ":" + std::to_string(lineno);
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(where + ": empty key or value");
    const std::string full = section.empty() ? key : section + "." + key;
    if (file.values_.contains(full)) throw ConfigError(where + ": duplicate key " + full);

    if (value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') throw ConfigError(where + ": unterminated string");
      file.values_[full] = value.substr(1, value.size() - 2);
    } else if (value == "true" || value == "false") {
      file.values_[full] = value == "true";
    } else if (value.front() == '[') {
      if (value.back() != ']') throw ConfigError(where + ": unterminated array");
      std::vector<double> items;
      std::istringstream items_in(value.substr(1, value.size() - 2));
      std::string item;
      while (std::getline(items_in, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(parse_number(item, where));
      }
      file.values_[full] = items;
    } else {
      file.values_[full] = parse_number(value, where);
    }
  }
  return file;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path.string());
}

double KeyValueFile::number(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const double* v = std::get_if<double>(&it->second)) return *v;
  throw ConfigError(origin_ + ": " + key + " must be a number");
}

bool KeyValueFile::boolean(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const bool* v = std::get_if<bool>(&it->second)) return *v;
  throw ConfigError(origin_ + ": " + key + " must be true or false");
}

std::string KeyValueFile::string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const std::string* v = std::get_if<std::string>(&it->second)) return *v;
  throw ConfigError(origin_ + ": " + key + " must be a quoted string");
}

std::vector<double> KeyValueFile::numbers(const std::string& key,
                                          const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* v = std::get_if<std::vector<double>>(&it->second)) return *v;
  if (const double* v = std::get_if<double>(&it->second)) return {*v};
  throw ConfigError(origin_ + ": " + key + " must be an array of numbers");
}

void RunConfig::validate() const {
  if (!(sigma2 > 0.0)) throw ConfigError("run.sigma2 must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("run.alpha must lie in (0, 1)");
  if (intensities.empty()) throw ConfigError("run.intensities must not be empty");
  for (double n : intensities)
    if (!(n > 0.0)) throw ConfigError("run.intensities must be positive");
  if (!std::is_sorted(intensities.begin(), intensities.end()))
    throw ConfigError("run.intensities must be sorted ascending");
  if (replicates < 1) throw ConfigError("run.replicates must be >= 1");
  if (workers < 1) throw ConfigError("run.workers must be >= 1");
  if (!(pad_min >= 0.0) || !(pad_scale >= 0.0)) throw ConfigError("geom pad settings must be >= 0");
  if (grid_m < 8) throw ConfigError("ltime.grid_m must be >= 8");
  if (epsilon_rule != "h_alpha" && epsilon_rule != "fixed")
    throw ConfigError("ltime.epsilon_rule must be \"h_alpha\" or \"fixed\"");
  if (epsilon_rule == "fixed" && !(epsilon > 0.0))
    throw ConfigError("ltime.epsilon must be positive with the fixed rule");
  if (constants.nodes < 3 || constants.nodes % 2 == 0) throw ConfigError("consts.nodes must be odd and >= 3");
  if (constants.f3_samples < 10'000) throw ConfigError("consts.f3_samples must be >= 10000");
  if (!(constants.zmax_start > 0.0) || !(constants.grid_lambda > 0.0))
    throw ConfigError("consts.zmax_start and consts.grid_lambda must be positive");
  if (!(ratio_guard >= 0.0)) throw ConfigError("harness.ratio_guard must be >= 0");
  if (!(identity_tolerance > 0.0)) throw ConfigError("harness.identity_tolerance must be positive");
}

double RunConfig::epsilon_for() const {
  return epsilon_rule == "fixed" ? epsilon : ltime::default_epsilon(grid_m, alpha);
}

RunConfig RunConfig::from(const KeyValueFile& f) {
  RunConfig c;
  c.alpha = f.number("run.alpha", c.alpha);
  c.sigma2 = f.number("run.sigma2", c.sigma2);
  c.intensities = f.numbers("run.intensities", c.intensities);
  c.replicates = as_count(f.number("run.replicates", static_cast<double>(c.replicates)), "run.replicates");
  c.seed = static_cast<std::uint64_t>(
      as_count(f.number("run.seed", static_cast<double>(c.seed)), "run.seed"));
  c.output_dir = f.string("run.output_dir", c.output_dir);
  c.workers = as_count(f.number("run.workers", static_cast<double>(c.workers)), "run.workers");
  c.pad_min = f.number("geom.pad_min", c.pad_min);
  c.pad_scale = f.number("geom.pad_scale", c.pad_scale);
  c.grid_m = as_count(f.number("ltime.grid_m", static_cast<double>(c.grid_m)), "ltime.grid_m");
  c.epsilon_rule = f.string("ltime.epsilon_rule", c.epsilon_rule);
  c.epsilon = f.number("ltime.epsilon", c.epsilon);
  c.level = f.number("ltime.level", c.level);
  c.couple_angle = parse_couple_angle(f.string("palm.couple_angle", to_string(c.couple_angle)));
  auto& k = c.constants;
  k.nodes = as_count(f.number("consts.nodes", static_cast<double>(k.nodes)), "consts.nodes");
  k.f3_samples = as_count(f.number("consts.f3_samples", static_cast<double>(k.f3_samples)), "consts.f3_samples");
  k.zmax_start = f.number("consts.zmax_start", k.zmax_start);
  k.grid_lambda = f.number("consts.grid_lambda", k.grid_lambda);
  k.f3.labeling = consts::parse_labeling(f.string("consts.cell_labeling", consts::to_string(k.f3.labeling)));
  k.f3.phi2 = consts::parse_phi2(f.string("consts.phi2", consts::to_string(k.f3.phi2)));
  c.constants_file = f.string("consts.file", c.constants_file);
  c.ratio_guard = f.number("harness.ratio_guard", c.ratio_guard);
  c.identity_tolerance = f.number("harness.identity_tolerance", c.identity_tolerance);
  k.workers = c.workers;
  c.validate();
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) { return from(KeyValueFile::load(path)); }

std::string RunConfig::dump() const {
  std::ostringstream out;
  std::string list;
  for (std::size_t i = 0; i < intensities.size(); ++i)
    list += (i ? ", " : "") + format_number(intensities[i]);
  out << "[run]\n"
      << "alpha = " << format_number(alpha) << "\n"
      << "sigma2 = " << format_number(sigma2) << "\n"
      << "intensities = [" << list << "]\n"
      << "replicates = " << replicates << "\n"
      << "seed = " << seed << "\n"
      << "output_dir = " << quoted(output_dir) << "\n"
      << "workers = " << workers << "\n\n"
      << "[geom]\n"
      << "pad_min = " << format_number(pad_min) << "\n"
      << "pad_scale = " << format_number(pad_scale) << "\n\n"
      << "[ltime]\n"
      << "grid_m = " << grid_m << "\n"
      << "epsilon_rule = " << quoted(epsilon_rule) << "\n"
      << "epsilon = " << format_number(epsilon) << "\n"
      << "level = " << format_number(level) << "\n\n"
      << "[palm]\n"
      << "couple_angle = " << quoted(to_string(couple_angle)) << "\n\n"
      << "[consts]\n"
      << "nodes = " << constants.nodes << "\n"
      << "f3_samples = " << constants.f3_samples << "\n"
      << "zmax_start = " << format_number(constants.zmax_start) << "\n"
      << "grid_lambda = " << format_number(constants.grid_lambda) << "\n"
      << "cell_labeling = " << quoted(consts::to_string(constants.f3.labeling)) << "\n"
      << "phi2 = " << quoted(consts::to_string(constants.f3.phi2)) << "\n"
      << "file = " << quoted(constants_file) << "\n\n"
      << "[harness]\n"
      << "ratio_guard = " << format_number(ratio_guard) << "\n"
      << "identity_tolerance = " << format_number(identity_tolerance) << "\n";
  return out.str();
}

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{
      {"run",
       {{"alpha", c.alpha},
        {"sigma2", c.sigma2},
        {"intensities", c.intensities},
        {"replicates", c.replicates},
        {"seed", c.seed},
        {"output_dir", c.output_dir}}},
      {"geom", {{"pad_min", c.pad_min}, {"pad_scale", c.pad_scale}}},
      {"ltime",
       {{"grid_m", c.grid_m}, {"epsilon_rule", c.epsilon_rule}, {"epsilon", c.epsilon_for()}, {"level", c.level}}},
      {"palm", {{"couple_angle", to_string(c.couple_angle)}}},
      {"consts",
       {{"nodes", c.constants.nodes},
        {"f3_samples", c.constants.f3_samples},
        {"zmax_start", c.constants.zmax_start},
        {"grid_lambda", c.constants.grid_lambda},
        {"cell_labeling", consts::to_string(c.constants.f3.labeling)},
        {"phi2", consts::to_string(c.constants.f3.phi2)}}},
      {"harness", {{"ratio_guard", c.ratio_guard}, {"identity_tolerance", c.identity_tolerance}}}};
}

std::string to_string(palm::CoupleAngle v) {
  return v == palm::CoupleAngle::counterclockwise ? "counterclockwise" : "unsigned";
}

palm::CoupleAngle parse_couple_angle(const std::string& s) {
  if (s == "counterclockwise") return palm::CoupleAngle::counterclockwise;
  if (s == "unsigned") return palm::CoupleAngle::unsigned_angle;
  throw ConfigError("unknown couple angle convention '" + s + "'");
}

}  // namespace fracmax

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fracmax/config.hpp"
#include "fracmax/errors.hpp"

using namespace fracmax;
using doctest::Approx;

TEST_CASE("defaults") {
  const RunConfig c;
  CHECK(c.alpha == 0.5);
  CHECK(c.intensities == std::vector<double>{500, 1000, 2000, 4000});
  CHECK(c.replicates == 30);
  CHECK(c.grid_m == 64);
  CHECK(c.constants.nodes == 41);
  CHECK_NOTHROW(c.validate());
  CHECK(c.epsilon_for() == Approx(0.125));
}

TEST_CASE("parsing sections, comments and arrays") {
  const auto f = KeyValueFile::parse(R"(# campaign
[run]
alpha = 0.3   # exponent
intensities = [250, 1_000]
output_dir = "out # not a comment"
[ltime]
epsilon_rule = "fixed"
epsilon = 0.02
[consts]
phi2 = "paper"
)");
  const RunConfig c = RunConfig::from(f);
  CHECK(c.alpha == 0.3);
  CHECK(c.intensities == std::vector<double>{250, 1000});
  CHECK(c.output_dir == "out # not a comment");
  CHECK(c.epsilon_for() == 0.02);
  CHECK(c.constants.f3.phi2 == consts::Phi2Normalization::paper);
  CHECK(c.replicates == 30);
}

TEST_CASE("malformed input is rejected with a location") {
  CHECK_THROWS_WITH_AS(KeyValueFile::parse("[run]\nalpha = 0.5\nalpha = 0.6\n", "x.toml"),
                       doctest::Contains("x.toml:3"), ConfigError);
  CHECK_THROWS_AS(KeyValueFile::parse("[run\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueFile::parse("alpha\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueFile::parse("a = [1, 2\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueFile::parse("a = 1.2.3\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from(KeyValueFile::parse("[run]\nalpha = \"x\"\n")), ConfigError);
  CHECK_THROWS_AS(RunConfig::from(KeyValueFile::parse("[run]\nreplicates = 2.5\n")), ConfigError);
  CHECK_THROWS_AS(RunConfig::load("/nonexistent/run.toml"), ConfigError);
}

TEST_CASE("validation") {
  auto bad = [](auto mutate) {
    RunConfig c;
    mutate(c);
    return c;
  };
  CHECK_THROWS_AS(bad([](RunConfig& c) { c.alpha = 1.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](RunConfig& c) { c.intensities = {1000, 500}; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](RunConfig& c) { c.grid_m = 4; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](RunConfig& c) { c.constants.nodes = 40; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](RunConfig& c) { c.epsilon_rule = "fixed"; }).validate(), ConfigError);
  CHECK_THROWS_AS(parse_couple_angle("clockwise"), ConfigError);
}

TEST_CASE("dump round-trips through a file") {
  RunConfig c;
  c.alpha = 0.7;
  c.intensities = {300, 600.5};
  c.seed = 99;
  c.couple_angle = palm::CoupleAngle::unsigned_angle;
  c.constants.f3.labeling = consts::CellLabeling::exchangeable;
  c.constants_file = "consts.json";
  const auto path = std::filesystem::temp_directory_path() / "fracmax_config_roundtrip.toml";
  std::ofstream(path) << c.dump();
  const RunConfig back = RunConfig::load(path);
  std::filesystem::remove(path);
  CHECK(back.dump() == c.dump());
  nlohmann::json a = c, b = back;
  CHECK(a == b);
  CHECK_FALSE(a.contains("workers"));
}

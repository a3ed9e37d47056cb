#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fracmax/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "fracmax");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = fracmax::cli::parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("help and usage errors") {
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("simulate") != std::string::npos);
  CHECK(run({}).code == 1);
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"report"}).code == 1);
  const auto sim_help = run({"simulate", "--help"});
  CHECK(sim_help.code == 0);
  CHECK(sim_help.out.find("20240607") != std::string::npos);
}

TEST_CASE("missing config file names the path") {
  const auto r = run({"simulate", "--config", "/nonexistent/run.toml"});
  CHECK(r.code == 1);
  CHECK(r.err.find("/nonexistent/run.toml") != std::string::npos);
}

TEST_CASE("invalid values are validation errors") {
  CHECK(run({"typical-cell", "--alpha", "1.5"}).code == 1);
  CHECK(run({"typical-cell", "--angle", "sideways"}).code == 1);
}

TEST_CASE("typical-cell dumps samples and honours seed precedence") {
  const auto a = run({"typical-cell", "--samples", "5", "--seed", "3"});
  CHECK(a.code == 0);
  CHECK(lines(a.out) == 6);
  CHECK(a.out.rfind("r,u1x", 0) == 0);
  CHECK(run({"typical-cell", "--samples", "5", "--seed", "3"}).out == a.out);

  ::setenv("FRACFIELD_SEED", "3", 1);
  const auto env = run({"typical-cell", "--samples", "5"});
  CHECK(env.out == a.out);
  CHECK(run({"typical-cell", "--samples", "5", "--seed", "4"}).out != a.out);

  const fs::path cfg = fs::temp_directory_path() / "fracmax_cli_seed.toml";
  std::ofstream(cfg) << "[run]\nseed = 4\n";
  const auto from_file = run({"typical-cell", "--samples", "5", "--config", cfg.string()});
  CHECK(from_file.out == run({"typical-cell", "--samples", "5", "--seed", "4"}).out);
  ::unsetenv("FRACFIELD_SEED");
  ::setenv("FRACFIELD_SEED", "x1", 1);
  CHECK(run({"typical-cell", "--samples", "5"}).code == 1);
  ::unsetenv("FRACFIELD_SEED");
  fs::remove(cfg);
}

TEST_CASE("edge-length table") {
  const auto r = run({"constants", "table-fd"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("ell,f_d\n0,0\n", 0) == 0);
  CHECK(lines(r.out) == 4098);
}

TEST_CASE("report on a directory without records") {
  const fs::path dir = fs::temp_directory_path() / "fracmax_cli_empty";
  fs::create_directories(dir);
  const auto r = run({"report", "--run", dir.string()});
  CHECK(r.code != 0);
  CHECK(r.err.find("error") != std::string::npos);
  fs::remove_all(dir);
}

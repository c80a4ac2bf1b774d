#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

#ifndef STARKRES_CLI_PATH
#error "STARKRES_CLI_PATH must be defined by the build"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(STARKRES_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  RunResult r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("starkres_test_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("decoupled limit: the resonance sits at 1 exactly") {
  RunResult r = run("resonance --model model1 --mu 0 --f 0 --seed 1.3 -0.2");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j.at("re").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(j.at("im").get<double>()) < 1e-12);
  CHECK(j.at("count_certified").get<bool>());
  CHECK(j.at("model") == "model1");
}

TEST_CASE("resonance output carries the weakly coupled width") {
  RunResult r =
      run("resonance --model model1 --mu 0.1 --f 0 --seed 1.0 -0.001 "
          "--tol 1e-11");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j.at("re").get<double>() == doctest::Approx(1.01905).epsilon(1e-3));
  CHECK(j.at("im").get<double>() == doctest::Approx(-0.0111115).epsilon(1e-2));
  CHECK(j.at("kind") == "resonance");
}

TEST_CASE("csv output is byte-for-byte deterministic") {
  fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
  std::string base = "sweep-mu --mu-grid 0.05 0.1 0.15 --tol 1e-11 --out ";
  REQUIRE(run(base + a.string()).exit_code == 0);
  REQUIRE(run(base + b.string()).exit_code == 0);
  std::string ca = slurp(a / "sweep_mu.csv");
  CHECK(ca == slurp(b / "sweep_mu.csv"));
  CHECK(ca.rfind("mu (dimensionless)", 0) == 0);  // unit-annotated header
  int lines = 0;
  for (char c : ca)
    if (c == '\n') ++lines;
  CHECK(lines == 4);  // header + 3 grid points
}

TEST_CASE("window scan agrees with its winding cross-check") {
  fs::path d1 = fresh_dir("scan1"), d2 = fresh_dir("scan2");
  std::string base =
      "scan --model model1 --mu 0.1 --f 0 --window 0.9 1.1 -0.1 -0.0005 "
      "--grid 4x4 --tol 1e-10 --out ";
  RunResult r1 = run(base + d1.string());
  REQUIRE(r1.exit_code == 0);
  json j = json::parse(r1.out);
  CHECK(j.at("count").get<int>() == 1);
  CHECK(j.at("winding").get<int>() == 1);
  CHECK(j.at("counts_match").get<bool>());
  RunResult r2 = run(base + d2.string() + " --threads 2");
  REQUIRE(r2.exit_code == 0);
  CHECK(slurp(d1 / "scan.csv") == slurp(d2 / "scan.csv"));
}

TEST_CASE("config file is honored and flags override it") {
  fs::path d = fresh_dir("cfg");
  fs::path cfg = d / "run.json";
  {
    std::ofstream os(cfg);
    os << R"({"model": "model1", "mu": 0.25, "f": 0.0,
              "seed": [1.0, -0.01], "tol": 1e-10})";
  }
  RunResult plain = run("resonance --config " + cfg.string());
  REQUIRE(plain.exit_code == 0);
  json jp = json::parse(plain.out);
  CHECK(jp.at("mu").get<double>() == doctest::Approx(0.25));
  CHECK(jp.at("im").get<double>() < -1e-3);  // mu = 0.25 has a real width

  RunResult over = run("resonance --config " + cfg.string() + " --mu 0");
  REQUIRE(over.exit_code == 0);
  json jo = json::parse(over.out);
  CHECK(jo.at("mu").get<double>() == doctest::Approx(0.0));
  CHECK(jo.at("re").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run("resonance --model nosuch").exit_code == 1);
  CHECK(run("resonance --config /nonexistent/x.json").exit_code == 1);
  CHECK(run("resonance --tol 0").exit_code == 1);
  CHECK(run("nosuchcommand").exit_code == 1);
}

TEST_CASE("help text lists the subcommands") {
  RunResult r = run("--help");
  CHECK(r.exit_code == 0);
  for (const char* word :
       {"resonance", "sweep-mu", "scan", "trace", "validate"})
    CHECK(r.out.find(word) != std::string::npos);
}

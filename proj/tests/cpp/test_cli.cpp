#include "twaff/cli.hpp"
#include "twaff/json_io.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace twaff;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "twaff");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("fold reports the folded type") {
  const Run r = run({"fold", "--type", "A", "--rank", "3", "--order", "2"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["result"]["folded_type"] == "C2");
  CHECK(j["result"]["r1"] == "B2");
  for (const char* key : {"version", "seed", "tolerances", "wall_time"}) CHECK(j.contains(key));
  CHECK(run({"fold", "--algebra", "D4^3"}).json()["result"]["folded_type"] == "G2");
}

TEST_CASE("char evaluates a twisted character") {
  const Run r = run({"char", "--algebra", "A4^2", "--weight", "1,0,0,1", "--point", "0.1,0.2", "--tau"});
  REQUIRE(r.code == 0);
  const Json v = r.json()["result"]["value"];
  CHECK(std::isfinite(v[0].get<double>()));
  CHECK(std::isfinite(v[1].get<double>()));
}

TEST_CASE("affchar normalizes the zero weight to one") {
  const Run r = run({"affchar", "--algebra", "A2^2", "--labels", "0,0", "--beta", "0.3", "--K", "0.2"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["result"]["value"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("malformed flags exit with 2") {
  CHECK(run({"fold", "--bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"char", "--algebra", "A4^2", "--weight", "x,y", "--point", "0", "--tau"}).code == 2);
  CHECK(run({"denominator-check", "--algebra", "A3^2", "--threads", "0"}).code == 2);
  CHECK(run({"fold", "--json", "--csv", "--algebra", "A3^2"}).code == 2);
  CHECK(run({"wiener-check", "--test", "nope"}).code == 2);
}

TEST_CASE("tolerance failures exit with 1 and keep the record") {
  const Run r = run({"poisson-check", "--algebra", "A1", "--points", "3", "--tol", "0"});
  CHECK(r.code == 1);
  CHECK(r.json()["pass"] == false);
  CHECK(r.json()["result"].contains("max_rel_err"));
  CHECK(run({"poisson-check", "--algebra", "A1", "--points", "3"}).code == 0);
}

TEST_CASE("stochastic reports are byte-identical for a fixed seed") {
  const std::vector<std::string> args = {"heat-check", "--algebra", "A1", "--h-imag", "0.7", "--k-imag", "-0.4",
                                         "--n-mc",     "4000",      "--seed", "11", "--no-timing"};
  const Run a = run(args), b = run(args);
  CHECK(a.out == b.out);
  CHECK(a.json()["seed"] == 11);
  CHECK(a.json()["wall_time"].is_null());
  auto threaded = args;
  threaded.insert(threaded.end(), {"--threads", "2"});
  CHECK(run(threaded).json()["result"] == a.json()["result"]);
}

TEST_CASE("CSV mirrors the JSON report") {
  const Run r = run({"fold", "--algebra", "A3^2", "--csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("key,value\n", 0) == 0);
  CHECK(r.out.find("result.folded_type,C2") != std::string::npos);
}

TEST_CASE("orbit construct then classify through a loop file") {
  const auto path = temp_file("twaff_cli_loop.json");
  REQUIRE(run({"orbit", "construct", "--algebra", "A2^2", "--point", "0.15", "--grid", "32", "--out",
               path.string()})
              .code == 0);
  std::ifstream in(path);
  const Json file = Json::parse(in)["result"];
  const auto loop_path = temp_file("twaff_cli_loop_body.json");
  std::ofstream(loop_path) << file.dump();
  const Run r = run({"orbit", "classify", "--loop", loop_path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.json()["result"]["alcove"][0].get<double>() == doctest::Approx(0.15).epsilon(1e-8));
  CHECK(run({"orbit", "classify", "--loop", "/nonexistent.json"}).code == 2);
  CHECK(run({"orbit", "construct", "--algebra", "A2^2", "--point", "5.0"}).code == 2);
  std::filesystem::remove(path);
  std::filesystem::remove(loop_path);
}

TEST_CASE("check subcommands pass at desk scale") {
  CHECK(run({"denominator-check", "--algebra", "D4^3", "--points", "50"}).code == 0);
  CHECK(run({"integral-check", "--algebra", "A2^2", "--rep", "one", "--n-mc", "100"}).code == 0);
  CHECK(run({"integral-check", "--algebra", "A3^2", "--rep", "exterior:2", "--n-mc", "5000"}).code == 0);
  CHECK(run({"conv-check", "--algebra", "A2^2", "--rep", "adjoint", "--n-mc", "5000"}).code == 0);
  CHECK(run({"wiener-check", "--test", "berechnung", "--paths", "100000", "--depth", "5"}).code == 0);
  CHECK(run({"acceptance-all", "--only", "1", "--no-timing"}).json()["result"]["criteria"][0]["pass"] == true);
}

TEST_CASE("installed binary honours the exit-code contract") {
  const char* exe = std::getenv("TWAFF_CLI");
  if (!exe) return;
  const std::string base = std::string(exe) + " ";
  CHECK(std::system((base + "fold --algebra E6^2 > /dev/null").c_str()) == 0);
  const int bad = std::system((base + "fold --nope > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(bad) == 2);
  const int fail = std::system((base + "poisson-check --algebra A1 --points 2 --tol 0 > /dev/null").c_str());
  CHECK(WEXITSTATUS(fail) == 1);
}

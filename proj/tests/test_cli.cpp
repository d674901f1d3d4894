#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "heisadams/cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using heisadams::cli::main;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("heisadams_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "heisadams");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream log, err;
  const int code = main(static_cast<int>(argv.size()), argv.data(), log, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> m;
  for (const auto& e : fs::directory_iterator(dir)) m[e.path().filename().string()] = slurp(e.path());
  return m;
}

nlohmann::json load(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("beta and k parsing") {
  using heisadams::cli::parse_betas;
  using heisadams::cli::parse_ks;
  const double big_a = 32.0 / 9.0;
  const auto b = parse_betas("0.75T, 1T,1A,2.5", 2.0);
  REQUIRE(b.size() == 4);
  CHECK(b[0] == doctest::Approx(0.75 * big_a / 2));
  CHECK(b[1] == doctest::Approx(big_a / 2));
  CHECK(b[2] == doctest::Approx(big_a));
  CHECK(b[3] == 2.5);
  CHECK(parse_betas("T", 0.0).front() == doctest::Approx(big_a));
  CHECK_THROWS(parse_betas("x", 0.0));
  CHECK_THROWS(parse_betas("-1", 0.0));
  CHECK_THROWS(parse_betas("", 0.0));
  CHECK(parse_ks("2,4..6,9") == std::vector<int>{2, 4, 5, 6, 9});
  CHECK_THROWS(parse_ks("1"));
  CHECK_THROWS(parse_ks("5..3"));
  CHECK_THROWS(parse_ks("2,a"));
}

TEST_CASE("configuration errors exit with 2") {
  const fs::path out = scratch("errors");
  std::string err;
  CHECK(run({"lambda", "--a", "4", "--out", out.string()}, &err) == 2);
  CHECK(err.find("config error") != std::string::npos);
  CHECK(run({"lambda", "--grid", "3", "--out", out.string()}) == 2);
  CHECK(run({"solve", "--nl", "quartic", "--grid", "7", "--out", out.string()}) == 2);
  CHECK(run({"frobnicate"}) == 2);
  CHECK(run({}) == 2);
  CHECK(run({"lambda", "--grid", "seven"}) == 2);
  CHECK(run({"sharpness", "--ks", "1", "--out", out.string()}) == 2);
  CHECK(run({"capacity", "--grid", "9", "--ell", "0.2", "--out", out.string()}) == 2);
  CHECK(run({"plot-data", "--out", out.string()}) == 2);
  CHECK(run({"lambda", "--reading", "cubed", "--out", out.string()}) == 2);
  fs::remove_all(out);
}

TEST_CASE("lambda command and manifest") {
  const fs::path out = scratch("lambda");
  REQUIRE(run({"lambda", "--grid", "9", "--a", "1", "--out", out.string()}) == 0);
  const auto j = load(out / "lambda.json");
  CHECK(j["converged"] == true);
  CHECK(j["lambda"].get<double>() > 0.0);
  const auto m = load(out / "manifest.json");
  CHECK(m["exitCode"] == 0);
  CHECK(m["config"]["command"] == "lambda");
  CHECK(m["config"]["grid"] == 9);
  CHECK(m["artifacts"] == nlohmann::json::array({"lambda.json"}));
  for (const char* key : {"solverDefaults", "quadratureDefaults", "samplePlanDefaults", "summary"})
    CHECK(m.contains(key));
  fs::remove_all(out);
}

TEST_CASE("config file") {
  const fs::path out = scratch("config");
  fs::create_directories(out);
  const fs::path cfg = out / "run.ini";
  std::ofstream(cfg) << "grid=9\na=0\nout=" << (out / "res").string() << "\n";
  REQUIRE(run({"lambda", "--config", cfg.string()}) == 0);
  const auto m = load(out / "res" / "manifest.json");
  CHECK(m["config"]["grid"] == 9);
  CHECK(m["config"]["a"] == 0.0);
  // flags override the file
  REQUIRE(run({"lambda", "--config", cfg.string(), "--grid", "7"}) == 0);
  CHECK(load(out / "res" / "manifest.json")["config"]["grid"] == 7);
  fs::remove_all(out);
}

TEST_CASE("identical runs give identical bytes") {
  const fs::path out = scratch("determinism");
  const std::vector<std::string> args{"rearrange-check", "--grid", "9", "--pairs", "20", "--seed", "7",
                                      "--out", out.string()};
  REQUIRE(run(args) == 0);
  const auto first = snapshot(out);
  REQUIRE(run(args) == 0);
  CHECK(first == snapshot(out));
  CHECK(first.count("profile.csv") == 1);
  CHECK(first.count("rearrange.json") == 1);
  for (const auto& [name, _] : first) CHECK(name.find(".tmp") == std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("solve and plot-data") {
  const fs::path out = scratch("solve");
  REQUIRE(run({"solve", "--grid", "9", "--a", "1", "--out", out.string()}) == 0);
  const auto j = load(out / "solve.json");
  CHECK(j["status"] == "converged");
  CHECK(j["energy"].get<double>() > 0.0);
  CHECK(fs::file_size(out / "solution.bin") > 0);
  const std::string trace = slurp(out / "trace.csv");
  CHECK(trace.rfind("iteration,level,gradResidual,norm\n", 0) == 0);

  const fs::path plots = out / "plots";
  REQUIRE(run({"plot-data", "--artifact", (out / "trace.csv").string(), "--out", plots.string()}) == 0);
  const std::string dat = slurp(plots / "trace_level.dat");
  CHECK(dat.rfind("# iteration level\n", 0) == 0);
  const auto lines = std::count(trace.begin(), trace.end(), '\n');
  CHECK(std::count(dat.begin(), dat.end(), '\n') == lines);
  fs::remove_all(out);
}

TEST_CASE("hypothesis failure exits with 4") {
  const fs::path out = scratch("hyp");
  // lambda above Lambda breaks the small-u condition
  CHECK(run({"solve", "--grid", "9", "--nl", "critical", "--lambda-factor", "1.5", "--out", out.string()}) == 4);
  const auto j = load(out / "solve.json");
  bool h4_failed = false;
  for (const auto& c : j["hypotheses"])
    if (c["name"] == "H4") h4_failed = c["passed"] == false;
  CHECK(h4_failed);
  CHECK(load(out / "manifest.json")["exitCode"] == 4);
  fs::remove_all(out);
}

TEST_CASE("sharpness and its series") {
  const fs::path out = scratch("sharp");
  REQUIRE(run({"sharpness", "--grid", "9", "--a", "0", "--ks", "2..3", "--betas", "0.5T,1T", "--out",
               out.string()}) == 0);
  const std::string csv = slurp(out / "sharpness.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  REQUIRE(run({"plot-data", "--artifact", (out / "sharpness.csv").string(), "--out", (out / "p").string()}) == 0);
  CHECK(fs::exists(out / "p" / "series_beta0.dat"));
  CHECK(fs::exists(out / "p" / "series_beta1.dat"));
  fs::remove_all(out);
}

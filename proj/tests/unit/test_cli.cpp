#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "madic/cli.hpp"

using namespace madic;
using namespace madic::cli;
namespace fs = std::filesystem;

namespace {

int exit_code_of(const std::vector<std::string>& args,
                 std::optional<std::string> text = std::nullopt) {
  try {
    const auto config = parse_config(args, text);
    std::ostringstream err;
    return run(config, err);
  } catch (const CliError& e) {
    return e.code();
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "madic_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("flags are parsed per subcommand") {
  const auto c = parse_config({"survival", "--m", "5", "--alpha", "2", "--t", "1,10,100"});
  CHECK(c.command == "survival");
  CHECK(c.m == 5);
  CHECK(c.alpha == 2.0);
  CHECK(c.times == std::vector<double>{1.0, 10.0, 100.0});
  CHECK(c.output_format() == Format::csv);

  const auto s = parse_config({"solve", "--window", "-3,4", "--initial", "unit-ball"});
  REQUIRE(s.window.has_value());
  CHECK(s.window->lo == -3);
  CHECK(s.window->hi == 4);
  CHECK(s.initial == InitialCondition::unit_ball);

  CHECK(parse_config({"ctrw-sim"}).output_format() == Format::json);
  CHECK(parse_config({"selftest", "--format", "json"}).output_format() == Format::json);
  const auto keys = parse_config({"survival"}).effective();
  CHECK(keys.count("alpha") == 1);
  CHECK(keys.count("seed") == 0);
}

TEST_CASE("config file values are overridden by flags") {
  const std::string text = "# comment\nseed = 1\nsamples = 500\n\nm = 2\n";
  const auto c = parse_config({"ctrw-sim", "--seed", "7"}, text);
  CHECK(c.seed == 7);
  CHECK(c.samples == 500);
  CHECK(c.m == 2);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_of({"survival"}, std::string("m = 1\n")) == kBadConfig);
  CHECK(exit_code_of({"survival"}, std::string("bogus = 3\n")) == kBadConfig);
  CHECK(exit_code_of({"survival"}, std::string("not a pair\n")) == kBadConfig);
  CHECK(exit_code_of({"survival"}, std::string("seed = 3\n")) == kBadConfig);
  CHECK(exit_code_of({"survival", "--beta", "1.5"}) == kUsage);
  CHECK(exit_code_of({"survival", "--samples", "10"}) == kUsage);
  CHECK(exit_code_of({"nonsense"}) == kUsage);
  CHECK(exit_code_of({}) == kUsage);
  CHECK(exit_code_of({"--version"}) == kOk);
  CHECK(exit_code_of({"solve", "--initial", "delta", "--t", "0", "--output", scratch("z.csv").string()}) ==
        kUsage);
  const auto tiny = scratch("tiny.csv");
  CHECK(exit_code_of({"solve", "--beta", "0.5", "--window", "0,1", "--output", tiny.string()}) ==
        kToleranceFailure);
}

TEST_CASE("output carries the provenance header") {
  const auto out = scratch("survival.csv");
  REQUIRE(exit_code_of({"survival", "--t", "10,100", "--output", out.string()}) == kOk);
  const auto text = slurp(out);
  CHECK(text.rfind("# madic 1.0.0\n", 0) == 0);
  CHECK(text.find("# command: survival") != std::string::npos);
  CHECK(text.find("# notice: base m") != std::string::npos);
  CHECK(text.find("t,S,lower,upper,branch,rate,rate_lower,rate_upper") != std::string::npos);

  const auto js = scratch("survival.json");
  REQUIRE(exit_code_of({"survival", "--format", "json", "--output", js.string()}) == kOk);
  const auto doc = nlohmann::json::parse(slurp(js));
  CHECK(doc["version"] == "1.0.0");
  CHECK(doc["command"] == "survival");
  CHECK(doc["config"]["m"] == "3");
  CHECK(doc["rows"].size() == 1);
}

TEST_CASE("simulation output is deterministic and written in both formats") {
  const auto a = scratch("run.json");
  const std::vector<std::string> args{"ctrw-sim", "--samples",  "2000", "--seed",
                                      "5",        "--t",        "1,2",  "--analytic",
                                      "true",     "--output",   a.string()};
  REQUIRE(exit_code_of(args) == kOk);
  const auto first = slurp(a);
  REQUIRE(exit_code_of(args) == kOk);
  CHECK(slurp(a) == first);
  CHECK(fs::exists(fs::path(a).replace_extension(".csv")));
  const auto doc = nlohmann::json::parse(first);
  REQUIRE(doc["summary"]["times"].size() == 2);
  CHECK(doc["summary"]["times"][0]["total_variation"].get<double>() < 0.1);
}

TEST_CASE("levy-symbol reads a shell table") {
  const auto in = scratch("kernel.csv");
  {
    std::ofstream f(in);
    f << "j,weight\n0,1.25\n";  // W on S_0, jump rate lambda = 1.25 mu(S_0) = 5/6 at m = 3
  }
  const auto out = scratch("symbol.csv");
  REQUIRE(exit_code_of({"levy-symbol", "--input", in.string(), "--k-range", "1,2", "--output",
                        out.string()}) == kOk);
  const auto text = slurp(out);
  // psi = -lambda m/(m-1) at |k| = m, -lambda beyond
  CHECK(text.find("3,-1.25,") != std::string::npos);
  CHECK(text.find("9,-0.833333333333333") != std::string::npos);
}

TEST_CASE("selftest passes") {
  const auto out = scratch("selftest.csv");
  CHECK(exit_code_of({"selftest", "--output", out.string()}) == kOk);
  CHECK(slurp(out).find(",fail") == std::string::npos);
}

}  // TEST_SUITE

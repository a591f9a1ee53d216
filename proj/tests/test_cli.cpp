#include "fuller/cli.hpp"
#include "fuller/scenario_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

using namespace fuller;
using nlohmann::json;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fullerctl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const domain_error& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("fuller_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

const char* kMinimal = R"({
  "name": "di",
  "dim": 2,
  "f0": [[{"exponents": [0, 1], "coeff": "1"}], []],
  "f1": [[], [{"exponents": [0, 0], "coeff": 1}]],
  "initial": {"q": ["0", "0"], "lambda": ["-1", "-1/2"]},
  "t_final": "1"
})";

}  // namespace

TEST_CASE("scenario documents round-trip") {
  for (const auto& name : builtin_names()) {
    const ScenarioFile file = builtin(name, 3);
    const std::string text = emit_scenario(file);
    const ScenarioFile back = parse_scenario(text);
    CHECK(emit_scenario(back) == text);
    CHECK(back.scenario.f0 == file.scenario.f0);
    CHECK(back.scenario.f1 == file.scenario.f1);
    CHECK(scenario_hash(back) == scenario_hash(file));
    CHECK(scenario_hash(file).size() == 64);
  }
  const ScenarioFile di = parse_scenario(kMinimal);
  CHECK(di.dim() == 2);
  CHECK(*di.t_final == 1);
  CHECK((*di.lambda0)[1] == Rational(-1, 2));
  CHECK(di.scenario.f0 == builtin("double_integrator").scenario.f0);
}

TEST_CASE("scenario parse errors name the field") {
  CHECK(error_of("{\n  \"name\": \"x\",\n  oops\n}").find("line 3") != std::string::npos);
  CHECK(error_of(R"({"name": "x", "dim": 2, "f0": [[], []], "f1": [[], []], "colour": 1})").find("colour") !=
        std::string::npos);
  CHECK(error_of(R"({"name": "x", "dim": 2, "f0": [[], []]})").find("f1") != std::string::npos);
  CHECK(error_of(R"({"name": "x", "dim": 2, "f0": [[], [], []], "f1": [[], []]})").find("f0") != std::string::npos);
  CHECK(error_of(R"({"name": "x", "dim": 2, "f0": [[{"exponents": [1], "coeff": "1"}], []], "f1": [[], []]})")
            .find("f0[0][0].exponents") != std::string::npos);
  CHECK(error_of(R"({"name": "x", "dim": 2, "f0": [[], []], "f1": [[], []],
                     "initial": {"q": ["0", "0"], "lambda": ["0", "0"]}})")
            .find("lambda") != std::string::npos);
  CHECK(error_of(R"({"name": "x", "dim": 2, "f0": [[], []], "f1": [[], []], "t_final": "1/0"})").find("t_final") !=
        std::string::npos);
  CHECK(error_of(R"({"name": "x", "dim": 2, "fixture": "nope", "f0": [[], []], "f1": [[], []]})").find("fixture") !=
        std::string::npos);
  CHECK(error_of(R"({"name": "x", "dim": 2, "fixture": "fuller", "f0": [[], []], "f1": [[], []]})").empty());
  CHECK(error_of(R"({"name": "x", "dim": -2, "f0": [[], []], "f1": [[], []]})").find("dim") != std::string::npos);
}

TEST_CASE("builtins are deterministic") {
  CHECK(emit_scenario(builtin("random_poly", 7)) == emit_scenario(builtin("random_poly", 7)));
  CHECK(emit_scenario(builtin("random_poly", 7)) != emit_scenario(builtin("random_poly", 8)));
  CHECK(builtin("random_poly", 7).dim() == 3);
  CHECK_THROWS_AS(builtin("nothing"), domain_error);
  CHECK_THROWS_AS(resolve_scenario("/nonexistent/file.json"), domain_error);
  const auto s3 = builtin("singular3d");
  CHECK(s3.scenario.f1 == PolyVectorField({Polynomial(3), Polynomial::constant(3, 1), Polynomial::variable(3, 1)}));
}

TEST_CASE("simulator option overrides") {
  const SimOptions o = make_options({{"rtol", 1e-12}, {"max_events", 5}});
  CHECK(o.rtol == 1e-12);
  CHECK(o.max_events == 5);
  CHECK_THROWS_AS(make_options({{"rtoll", 1.0}}), domain_error);
  CHECK_THROWS_AS(make_options({{"rtol", -1.0}}), domain_error);
  CHECK_THROWS_AS(make_options({{"max_events", 2.5}}), domain_error);
  CHECK_THROWS_AS(initial_state(parse_scenario(R"({"name": "x", "dim": 1, "f0": [[]], "f1": [[]]})")), domain_error);
}

TEST_CASE("cli bound and usage errors") {
  auto r = cli({"bound", "--dim", "5"});
  REQUIRE(r.code == kExitOk);
  const json doc = json::parse(r.out);
  CHECK(doc["longest"] == 12);
  CHECK(doc["K"] == 13);
  CHECK(doc["total"] == 16);
  CHECK(cli({"bound", "--dim", "1"}).code == kExitUsage);
  CHECK(cli({"bound"}).code == kExitUsage);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  r = cli({"--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("simulate") != std::string::npos);
}

TEST_CASE("cli brackets and qrel") {
  auto r = cli({"brackets", "--word", "101", "--scenario", "singular3d"});
  REQUIRE(r.code == kExitOk);
  json doc = json::parse(r.out);
  CHECK(doc["field"]["components"] == json::array({"0", "-1", "2*x2"}));
  r = cli({"brackets", "--word", "+01", "--scenario", "singular3d", "--decompose"});
  REQUIRE(r.code == kExitOk);
  doc = json::parse(r.out);
  CHECK(doc["decomposition"]["J1"] == "001");
  CHECK(doc["decomposition"]["J2"] == "101");
  r = cli({"brackets", "--word", "0x", "--scenario", "singular3d"});
  CHECK(r.code == kExitDomain);
  CHECK(r.err.find("error:") == 0);

  r = cli({"qrel", "--r", "1", "--prev", "001", "--last", "101"});
  REQUIRE(r.code == kExitOk);
  doc = json::parse(r.out);
  CHECK(doc["text"] == "-S[0001]*S[1101] + S[0101]*S[1001]");
  CHECK(cli({"qrel", "--r", "0", "--prev", "001", "--last", "101"}).code == kExitUsage);
}

TEST_CASE("cli classify") {
  auto r = cli({"classify", "--scenario", "singular3d", "--point", "0,1,0", "--lambda", "1,-1,1"});
  REQUIRE(r.code == kExitOk);
  const json doc = json::parse(r.out);
  CHECK(doc["class"]["exact"] == true);
  CHECK(doc["class"]["wedges"].size() == 9);
  CHECK(doc.contains("collinear"));
  CHECK(doc.contains("destt"));
  r = cli({"classify", "--scenario", "singular3d", "--point", "0,1,0", "--float"});
  REQUIRE(r.code == kExitOk);
  CHECK(json::parse(r.out)["class"]["exact"] == false);
  CHECK(cli({"classify", "--scenario", "singular3d", "--point", "0,1"}).code == kExitDomain);
  CHECK(cli({"classify", "--scenario", "double_integrator", "--point", "0,1"}).code == kExitDomain);
}

TEST_CASE("cli simulate and analyze") {
  const auto dir = scratch_dir("cli");
  const std::string sim = (dir / "di.json").string();
  auto r = cli({"simulate", "--scenario", "double_integrator", "--output", sim, "--csv", (dir / "di.csv").string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("switches=1") != std::string::npos);
  std::ifstream in(sim);
  const json doc = json::parse(in);
  REQUIRE(doc["switch_times"].size() == 1);
  CHECK(std::abs(std::stod(doc["switch_times"][0].get<std::string>()) - 0.5) < 1e-9);
  std::ifstream run(sim + ".run.json");
  const json record = json::parse(run);
  CHECK(record["scenario_sha256"] == scenario_hash(builtin("double_integrator")));
  std::ifstream csv(dir / "di.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,q1,q2,lambda1,lambda2,u,h1,h01");

  const std::string times = (dir / "times.txt").string();
  {
    std::ofstream t(times);
    t << std::setprecision(17) << "# geometric\n";
    for (int k = 0; k < 12; ++k) t << 1.0 - std::ldexp(1.0, -k) << "\n";
  }
  r = cli({"analyze", "--input", times, "--epsilon", "0.3"});
  REQUIRE(r.code == kExitOk);
  const json rep = json::parse(r.out);
  CHECK(rep["order"]["estimated_order"] == 1);
  CHECK(std::abs(rep["chatter_all"]["ratio"].get<double>() - 0.5) < 1e-9);
  CHECK(cli({"analyze", "--input", sim, "--epsilon", "0.1"}).code == kExitOk);
  // Automatic epsilon needs at least three switching times; the double integrator has one.
  CHECK(cli({"analyze", "--input", sim}).code == kExitDomain);
  CHECK(cli({"analyze", "--input", times, "--representative", "median"}).code == kExitDomain);
  CHECK(cli({"analyze", "--input", (dir / "missing.txt").string()}).code == kExitDomain);
  CHECK(cli({"simulate", "--scenario", "double_integrator", "--set", "rtoll=1"}).code == kExitDomain);

  const std::string fuller_sim = (dir / "fuller.json").string();
  r = cli({"simulate", "--scenario", "fuller", "--t-final", "2", "--output", fuller_sim});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("termination=accumulation") != std::string::npos);
  r = cli({"analyze", "--input", fuller_sim, "--epsilon", "auto"});
  REQUIRE(r.code == kExitOk);
  CHECK(json::parse(r.out)["order"]["estimated_order"].get<int>() >= 1);
  CHECK(json::parse(r.out)["epsilon_mode"] == "auto");

  ::setenv(kOutputDirEnv, dir.string().c_str(), 1);
  r = cli({"simulate", "--scenario", "double_integrator"});
  ::unsetenv(kOutputDirEnv);
  CHECK(r.code == kExitOk);
  CHECK(std::filesystem::exists(dir / "double_integrator.sim.json"));
  std::filesystem::remove_all(dir);
}

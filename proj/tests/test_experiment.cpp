#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tga/errors.hpp"
#include "tga/experiment.hpp"
#include "tga/greedy.hpp"

using namespace tga;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tga_test_experiment_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json base_config() {
  return Json::parse(R"({
    "spaces": [{"family": "lp", "p": 2, "cap": 64}, {"family": "summing_c0", "cap": 32}],
    "suites": ["identities", "subsequences", "democracy"],
    "budget": {"seed": 3, "samples": 50, "dimension": 12, "max_support": 6},
    "family": {"dimension": 4, "levels": [1, 0.5]},
    "options": {"identity_samples": 100, "horizon": 64}
  })");
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = experiment_config_from_json(base_config());
  CHECK(c.spaces.size() == 2);
  CHECK(c.suites.size() == 3);
  CHECK(c.budget.seed == 3);
  CHECK(c.family.dimension == 4);
  CHECK(c.horizon == 64);
  CHECK(experiment_config_from_json(to_json(experiment_config_from_json(to_json(c)))).suites == c.suites);

  auto bad = base_config();
  bad["budget"].erase("seed");
  CHECK_THROWS_AS(experiment_config_from_json(bad), InputError);
  bad = base_config();
  bad["suites"] = Json::array();
  CHECK_THROWS_AS(experiment_config_from_json(bad), InputError);
  bad = base_config();
  bad["spaces"] = Json::array();
  CHECK_THROWS_AS(experiment_config_from_json(bad), InputError);
  bad = base_config();
  bad["suites"].push_back("plotting");
  CHECK_THROWS_AS(experiment_config_from_json(bad), InputError);
  bad = base_config();
  bad["colour"] = "red";
  CHECK_THROWS_AS(experiment_config_from_json(bad), InputError);
  bad = base_config();
  bad["output"] = Json{{"formats", Json::array({"xml"})}};
  CHECK_THROWS_AS(experiment_config_from_json(bad), InputError);
  bad = base_config();
  bad["options"]["eps"] = -1;
  CHECK_THROWS_AS(experiment_config_from_json(bad), InputError);
}

TEST_CASE("run writes reports, csv and a consistent summary") {
  const auto c = experiment_config_from_json(base_config());
  const fs::path out = scratch("run");
  const auto outcome = run_experiment(c, out, 2);
  CHECK(outcome.exit_code == 0);
  CHECK(fs::exists(out / "summary.json"));
  CHECK(fs::exists(out / "lp-2" / "identities.json"));
  CHECK(fs::exists(out / "summingc0" / "subsequences_residuals.csv"));

  const Json summary = Json::parse(slurp(out / "summary.json"));
  std::size_t sum = 0;
  std::map<std::string, std::size_t> by_status;
  for (const auto& run : summary["runs"]) {
    sum += run["checks"].get<std::size_t>();
    for (const auto& [k, v] : run["statuses"].items()) by_status[k] += v.get<std::size_t>();
    const Json report = Json::parse(slurp(out / run["report"].get<std::string>()));
    CHECK(report["schema_version"] == kReportSchemaVersion);
    CHECK(report["checks"].size() == run["checks"].get<std::size_t>());
  }
  CHECK(sum == summary["totals"]["checks"].get<std::size_t>());
  for (const auto& [k, v] : summary["totals"]["statuses"].items()) CHECK(by_status[k] == v.get<std::size_t>());
  CHECK(summary["totals"]["statuses"].value("CounterexampleFound", 0) == 0);
  CHECK(summary["exit_code"] == 0);
}

TEST_CASE("residual csv matches direct evaluation") {
  auto j = base_config();
  j["spaces"] = Json::array({Json{{"family", "lp"}, {"p", 2}, {"cap", 32}}});
  j["suites"] = Json::array({"subsequences"});
  j["options"]["horizon"] = 32;
  const fs::path out = scratch("csv");
  run_experiment(experiment_config_from_json(j), out);
  std::istringstream in(slurp(out / "lp-2" / "subsequences_residuals.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == kResidualCsvHeader);
  CoefVector x;
  for (Index i = 1; i <= 32; ++i) x.set(i, 1.0 / static_cast<double>(i));
  const auto o = lowest_index_ordering(x, 32);
  const auto space = SpaceSpec::lp(2, 32);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream fields(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(fields, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 4);
    const auto n = static_cast<std::size_t>(v[0]);
    CHECK(n == rows);
    CHECK(v[1] == doctest::Approx(space.norm(x - greedy_sum(o, n))).epsilon(1e-12));
    CHECK(v[2] == doctest::Approx(space.norm(x - cesaro_sum(o, n))).epsilon(1e-12));
  }
  CHECK(rows == 32);
}

TEST_CASE("identical config and seed give identical files") {
  const auto c = experiment_config_from_json(base_config());
  const fs::path a = scratch("rep_a");
  const fs::path b = scratch("rep_b");
  run_experiment(c, a, 1);
  run_experiment(c, b, 3);
  CHECK(tree(a) == tree(b));
  auto c2 = c;
  c2.budget.seed = 4;
  const fs::path d = scratch("rep_d");
  run_experiment(c2, d, 1);
  CHECK(tree(a) != tree(d));
}

TEST_CASE("identities on l2 all pass") {
  auto j = base_config();
  j["spaces"] = Json::array({Json{{"family", "lp"}, {"p", 2}, {"cap", 64}}});
  j["suites"] = Json::array({"identities"});
  const auto outcome = run_experiment(experiment_config_from_json(j), scratch("ident"));
  CHECK(outcome.exit_code == 0);
  CHECK(outcome.summary["totals"]["statuses"]["ExactPass"] == outcome.summary["totals"]["checks"]);
}

TEST_CASE("question presets") {
  auto j = base_config();
  j["spaces"] = Json::array({Json{{"family", "lp"}, {"p", 2}, {"cap", 64}}});
  j["suites"] = Json::array({"question2", "question1"});
  j["budget"]["samples"] = 30;
  j["options"]["question1_dimensions"] = Json::array({4, 8});
  const fs::path out = scratch("questions");
  const auto outcome = run_experiment(experiment_config_from_json(j), out);
  CHECK(outcome.exit_code == 0);
  const Json q2 = Json::parse(slurp(out / "lp-2" / "question2.json"));
  CHECK(q2["results"]["summary"] == "no 1-CQG counterexample found");
  CHECK(q2["results"]["admissible"].get<std::size_t>() == 30);
  const Json q1 = Json::parse(slurp(out / "lp-2" / "question1.json"));
  CHECK(q1["results"]["candidate"] == false);
}

TEST_CASE("suite errors give exit code 1") {
  auto j = base_config();
  j["spaces"] = Json::array({Json{{"family", "lp"}, {"p", 2}, {"cap", 1}}});
  j["suites"] = Json::array({"identities"});
  const auto outcome = run_experiment(experiment_config_from_json(j), scratch("err"));
  CHECK(outcome.exit_code == 1);
  CHECK(outcome.summary["totals"]["errors"] == 1);
}

TEST_CASE("replay of stored and corrupted payloads") {
  auto j = base_config();
  j["suites"] = Json::array({"identities"});
  const fs::path out = scratch("replay");
  const auto outcome = run_experiment(experiment_config_from_json(j), out);
  REQUIRE(!outcome.summary["samples"].empty());
  const Json payload = Json::parse(slurp(out / outcome.summary["samples"][0].get<std::string>()));
  const auto r = replay(payload);
  CHECK(r.status == CheckStatus::ExactPass);
  CHECK(!replay_failed(r));
  CHECK(dump(to_json(replay(payload))) == dump(to_json(r)));
  CHECK(r.details.contains("lhs"));

  Json corrupted = payload;
  corrupted["recorded"]["worst_slack"] = 0.25;
  const auto rc = replay(corrupted);
  CHECK(rc.details["recorded_mismatch"] == true);
  CHECK(replay_failed(rc));

  Json perturbed = payload;
  perturbed["x"][0][1] = perturbed["x"][0][1].get<double>() * 1e6;  // ordering no longer greedy
  CHECK_THROWS_AS(replay(perturbed), InputError);
  CHECK_THROWS_AS(replay(Json{{"check", "vp_identity"}}), InputError);
  CHECK_THROWS_AS(replay(Json::array()), InputError);
  CHECK_THROWS_AS(replay(Json{{"check", "unknown"}}), InputError);
}

TEST_CASE("replay of inequality payloads") {
  Json p{{"check", "qglc_bound"},
         {"space", to_json(SpaceSpec::summing_c0(8))},
         {"family", to_json(ExhaustiveFamily{4, {1.0, 0.5}, 50000})}};
  const auto r = replay(p);
  CHECK(r.status == CheckStatus::ConsistentWithinBudget);
  Json e{{"check", "ell1_decay"}, {"variant", "consecutive"}, {"l", 2.0}, {"eps", 0.5}};
  CoefVector x;
  for (Index i = 1; i <= 64; ++i) x.set(i, std::ldexp(1.0, -static_cast<int>(i)));
  e["x"] = to_json(x);
  e["ordering"] = lowest_index_ordering(x, 64).indices();
  e["gaps"] = Json{{"terms", {1, 2, 4, 8, 16, 32, 64}}, {"bounded_gap", 2}};
  CHECK(replay(e).status == CheckStatus::ConsistentWithinBudget);
  e["variant"] = "sideways";
  CHECK_THROWS_AS(replay(e), InputError);
}

TEST_CASE("example spaces serialize and reload") {
  for (const auto& s : example_spaces()) {
    const auto back = space_from_json(to_json(s));
    CHECK(back.label() == s.label());
    CHECK(dump(to_json(back)) == dump(to_json(s)));
  }
}

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tga/errors.hpp"
#include "tga/experiment.hpp"

namespace {

int cmd_run(const std::string& config_file, std::string out_dir, std::optional<std::uint64_t> seed, unsigned jobs) {
  tga::ExperimentConfig config = tga::load_experiment_config(config_file);
  if (seed) config.budget.seed = *seed;
  if (out_dir.empty()) out_dir = config.output_dir;
  if (out_dir.empty()) throw tga::InputError("no output directory given (--out or output.directory)");
  const auto outcome = tga::run_experiment(config, out_dir, jobs);
  const auto& totals = outcome.summary["totals"];
  std::cout << "checks: " << totals["checks"].get<std::size_t>() << "\n";
  for (const auto& [status, count] : totals["statuses"].items()) {
    std::cout << "  " << status << ": " << count.get<std::size_t>() << "\n";
  }
  for (const auto& run : outcome.summary["runs"]) {
    if (run.contains("summary")) {
      std::cout << run["space"].get<std::string>() << " " << run["suite"].get<std::string>() << ": "
                << run["summary"].get<std::string>() << "\n";
    }
    if (run.contains("error")) {
      std::cerr << "error in " << run["space"].get<std::string>() << " " << run["suite"].get<std::string>() << ": "
                << run["error"].get<std::string>() << "\n";
    }
  }
  for (const auto& f : outcome.failures) std::cerr << "counterexample payload: " << out_dir << "/" << f << "\n";
  std::cout << "summary: " << out_dir << "/summary.json\n";
  return outcome.exit_code;
}

int cmd_replay(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw tga::InputError("cannot read payload " + file);
  tga::Json payload;
  try {
    payload = tga::Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw tga::InputError(std::string("payload is not valid JSON: ") + e.what());
  }
  const tga::CheckReport r = tga::replay(payload);
  std::cout << tga::dump(tga::to_json(r));
  return tga::replay_failed(r) ? 1 : 0;
}

int cmd_list_spaces() {
  for (const auto& s : tga::example_spaces()) {
    std::cout << s.label() << "\t" << tga::to_json(s).dump() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thresholding greedy algorithm experiments"};
  app.require_subcommand(1);

  std::string config_file;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  auto* run = app.add_subcommand("run", "Run the suites of a config file");
  run->add_option("--config", config_file, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::string payload_file;
  auto* rep = app.add_subcommand("replay", "Recompute a stored payload");
  rep->add_option("payload", payload_file, "Payload file")->required();

  auto* list = app.add_subcommand("list-spaces", "Print the example space records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(config_file, out_dir, seed, jobs);
    if (*rep) return cmd_replay(payload_file);
    if (*list) return cmd_list_spaces();
  } catch (const tga::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

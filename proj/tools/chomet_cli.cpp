// Command-line front end: run experiments and hindsight oracles.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chomet/experiment.hpp"

namespace {

using namespace chomet;

std::vector<std::uint64_t> parse_seeds(const std::string& text)
{
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (item.empty() || used != item.size() || item[0] == '-')
      throw ConfigError("--seeds: '" + item + "' is not a non-negative integer");
    seeds.push_back(v);
    start = comma + 1;
  }
  return seeds;
}

ExperimentConfig resolve_config(const std::string& config_path, const std::string& preset_name)
{
  ExperimentConfig base = preset_name.empty() ? ExperimentConfig{} : preset(preset_name);
  if (config_path.empty()) {
    base.validate();
    return base;
  }
  return load_config(config_path, std::move(base));
}

void print_summaries(const std::vector<RunSummary>& runs, std::size_t tail, std::size_t window)
{
  std::printf("%-18s %6s %14s %14s %10s %12s %12s %12s\n", "algorithm", "seed", "total",
              ("tail" + std::to_string(tail)).c_str(), ("prep" + std::to_string(window)).c_str(),
              "avg_regret", "path_len", "bound");
  const auto row = [](const RunSummary& s, const std::string& seed) {
    char bound[32] = "-";
    if (s.regret_bound) std::snprintf(bound, sizeof bound, "%.6g", *s.regret_bound);
    std::printf("%-18s %6s %14.6g %14.6g %10.4g %12.6g %12.6g %12s\n", s.algorithm.c_str(),
                seed.c_str(), s.total_objective, s.tail_objective, s.mean_preparations,
                s.final_regret, s.path_length, bound);
  };
  for (const auto& s : runs) row(s, std::to_string(s.seed));
  for (const auto& s : mean_by_algorithm(runs)) row(s, "mean");
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Conditional-handover preparation simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, seeds_text, preset_name, oracle_kind = "dp";
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run the configured algorithms over every seed");
  run->add_option("--config", config_path, "TOML experiment file");
  run->add_option("--out", out_path, "CSV output path (overrides [output].path)");
  run->add_option("--seeds", seeds_text, "Comma-separated seeds, e.g. 1,2,3");
  run->add_option("--preset", preset_name, "Built-in experiment used as the base")
      ->check(CLI::IsMember({"volatile", "stationary"}));
  run->add_flag("--quiet", quiet, "Skip the summary table");

  auto* oracle = app.add_subcommand("oracle", "Solve the hindsight problem for every seed");
  oracle->add_option("--config", config_path, "TOML experiment file")->required();
  oracle->add_option("--kind", oracle_kind, "dp (exact, small instances) or per-slot")
      ->check(CLI::IsMember({"dp", "per-slot"}));
  oracle->add_option("--out", out_path, "Optional CSV output path");
  oracle->add_option("--seeds", seeds_text, "Comma-separated seeds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed() && config_path.empty() && preset_name.empty())
      throw ConfigError("run: pass --config, --preset, or both");

    ExperimentConfig config = resolve_config(config_path, run->parsed() ? preset_name : "");
    if (!seeds_text.empty()) config.seeds = parse_seeds(seeds_text);
    if (!out_path.empty()) config.output_path = out_path;

    if (oracle->parsed()) {
      config.algorithms = {AlgorithmSpec{
          oracle_kind == "dp" ? AlgorithmKind::oracle_dp : AlgorithmKind::oracle_per_slot, {}}};
      if (oracle_kind == "dp" && config.scenario.ues * config.scenario.cells > kOracleDpMaxPairs)
        throw CapacityError("oracle --kind dp: I*J = " +
                            std::to_string(config.scenario.ues * config.scenario.cells) +
                            " exceeds the cap of " + std::to_string(kOracleDpMaxPairs) + " pairs");
      if (out_path.empty()) config.output_path.clear();
    }

    const ExperimentResult result = run_experiment(config);
    if (!config.output_path.empty()) {
      write_csv(result.records, config.output_path);
      std::cerr << "wrote " << result.records.size() << " rows to " << config.output_path
                << '\n';
    }
    if (!quiet) print_summaries(result.summaries, config.objective_window,
                                config.preparations_window);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

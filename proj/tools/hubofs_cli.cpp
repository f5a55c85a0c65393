// hubofs: MI-based HUBO feature selection, stage by stage.
//
//   hubofs build   --input data.csv --target y --out out/
//   hubofs sample  --out out/ --sampler sa --shots 2000
//   hubofs select  --out out/ --rho 0.25 --delta 0.5
//   hubofs compare --input data.csv --target y --out out/
//   hubofs run     (all four)

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hubofs/errors.hpp"
#include "hubofs/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitSize = 4;

struct Paths {
  std::string coefficients;
  std::string samples;
  std::vector<std::string> selections;
};

void add_data_flags(CLI::App* cmd, hubofs::RunConfig& cfg, bool required) {
  auto* in = cmd->add_option("--input", cfg.input, "CSV file with a header row");
  auto* tg = cmd->add_option("--target", cfg.target, "Name of the binary target column");
  if (required) {
    in->required();
    tg->required();
  }
  cmd->add_option("--test-fraction", cfg.test_fraction, "Held-out fraction per class")->capture_default_str();
  cmd->add_option("--bins", cfg.bins, "Max equal-frequency bins for MI")->capture_default_str();
}

void add_build_flags(CLI::App* cmd, hubofs::RunConfig& cfg) {
  cmd->add_option("--preselect-k", cfg.preselect_k, "Features kept by relevance before building")->capture_default_str();
  cmd->add_option("--w1", cfg.weights.w1, "Relevance weight")->capture_default_str();
  cmd->add_option("--w2", cfg.weights.w2, "Redundancy weight")->capture_default_str();
  cmd->add_option("--w3", cfg.weights.w3, "Triadic weight")->capture_default_str();
  cmd->add_option("--lambda", cfg.penalty.lambda, "Penalty amplitude")->capture_default_str();
  cmd->add_option("--tau", cfg.penalty.tau, "Penalty relevance threshold")->capture_default_str();
  cmd->add_option("--p", cfg.penalty.p, "Penalty exponent")->capture_default_str();
}

void add_sample_flags(CLI::App* cmd, hubofs::RunConfig& cfg, std::string& mode) {
  cmd->add_option("--sampler", cfg.sampler, "exhaustive | sa | dcqo | random")->capture_default_str();
  cmd->add_option("--shots", cfg.shots, "Number of shots / chains")->capture_default_str();
  cmd->add_option("--sweeps", cfg.sweeps, "Annealing sweeps")->capture_default_str();
  cmd->add_option("--t-start", cfg.t_start, "Initial annealing temperature (default 2*n*max|coef|)");
  cmd->add_option("--t-end", cfg.t_end, "Final annealing temperature")->capture_default_str();
  cmd->add_option("--steps", cfg.steps, "Trotter steps")->capture_default_str();
  cmd->add_option("--total-time", cfg.total_time, "Total evolution time")->capture_default_str();
  cmd->add_option("--mode", mode, "full | cd_only")->capture_default_str();
}

void add_select_flags(CLI::App* cmd, hubofs::RunConfig& cfg) {
  cmd->add_option("--rho", cfg.rho, "Retained low-energy fraction")->capture_default_str();
  cmd->add_option("--delta", cfg.deltas, "Importance threshold (repeat for a sweep)")->capture_default_str();
}

void add_common_flags(CLI::App* cmd, hubofs::RunConfig& cfg, std::string& out) {
  cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  cmd->add_option("--out", out, "Output directory")->capture_default_str();
}

void report(const std::string& stage, const hubofs::StageOutput& result) {
  for (const auto& n : result.notices) std::cerr << "[" << stage << "] " << n << "\n";
  for (const auto& f : result.files) std::cout << "[" << stage << "] wrote " << f.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MI-based HUBO feature selection"};
  app.require_subcommand(1);

  hubofs::RunConfig cfg;
  std::string out = cfg.out_dir.string();
  std::string mode = hubofs::to_string(cfg.mode);
  Paths paths;

  auto* build = app.add_subcommand("build", "Build the coefficient and MI tensor files");
  add_data_flags(build, cfg, true);
  add_build_flags(build, cfg);
  add_common_flags(build, cfg, out);

  auto* sample = app.add_subcommand("sample", "Sample low-energy configurations");
  sample->add_option("--coefficients", paths.coefficients, "Coefficient file (default <out>/coefficients.json)");
  add_sample_flags(sample, cfg, mode);
  add_common_flags(sample, cfg, out);

  auto* select = app.add_subcommand("select", "Score features from retained shots");
  select->add_option("--samples", paths.samples, "Sample file (default <out>/samples.csv)");
  select->add_option("--coefficients", paths.coefficients, "Coefficient file (default <out>/coefficients.json)");
  add_select_flags(select, cfg);
  add_common_flags(select, cfg, out);

  auto* compare = app.add_subcommand("compare", "Evaluate selections against baselines");
  add_data_flags(compare, cfg, true);
  compare->add_option("--selection", paths.selections, "Importance file (repeatable; default <out>/importance.csv)");
  compare->add_option("--coefficients", paths.coefficients,
                      "Restrict the candidate universe to the model features of this file");
  add_common_flags(compare, cfg, out);

  auto* run = app.add_subcommand("run", "build, sample, select and compare in one go");
  add_data_flags(run, cfg, true);
  add_build_flags(run, cfg);
  add_sample_flags(run, cfg, mode);
  add_select_flags(run, cfg);
  add_common_flags(run, cfg, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::string stage = app.get_subcommands().front()->get_name();
  try {
    cfg.mode = hubofs::cd_mode_from_string(mode);
    cfg.out_dir = out;
    auto in_out = [&](const std::string& p, const char* name) { return p.empty() ? cfg.out_dir / name : fs::path(p); };

    if (stage == "build") {
      report(stage, hubofs::run_build(cfg));
    } else if (stage == "sample") {
      report(stage, hubofs::run_sample(cfg, in_out(paths.coefficients, hubofs::artifact::kCoefficients)));
    } else if (stage == "select") {
      report(stage, hubofs::run_select(cfg, in_out(paths.samples, hubofs::artifact::kSamples),
                                       in_out(paths.coefficients, hubofs::artifact::kCoefficients)));
    } else if (stage == "compare") {
      std::vector<fs::path> sels(paths.selections.begin(), paths.selections.end());
      if (sels.empty()) sels.push_back(cfg.out_dir / hubofs::artifact::kImportance);
      std::optional<fs::path> coeff;
      if (!paths.coefficients.empty()) coeff = paths.coefficients;
      report(stage, hubofs::run_compare(cfg, sels, coeff));
    } else {
      report(stage, hubofs::run_all(cfg));
    }
  } catch (const hubofs::InvalidArgument& e) {
    std::cerr << "hubofs " << stage << ": usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const hubofs::CapacityError& e) {
    std::cerr << "hubofs " << stage << ": size error: " << e.what() << "\n";
    return kExitSize;
  } catch (const hubofs::DataError& e) {
    std::cerr << "hubofs " << stage << ": data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "hubofs " << stage << ": error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}

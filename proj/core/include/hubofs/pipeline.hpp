#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hubofs/baselines.hpp"
#include "hubofs/dcqo.hpp"
#include "hubofs/hubo.hpp"

namespace hubofs {

/// Parameters for every pipeline stage. Defaults mirror the command line.
struct RunConfig {
  std::filesystem::path input;
  std::string target;
  std::size_t preselect_k = 32;
  std::size_t bins = kDefaultMaxBins;
  double test_fraction = kDefaultTestFraction;
  HuboWeights weights;
  PenaltyParams penalty;

  std::string sampler = "sa";
  std::uint64_t shots = 2000;
  std::uint64_t sweeps = 500;
  std::optional<double> t_start;
  double t_end = 0.01;
  std::size_t steps = 50;
  double total_time = 10.0;
  CdMode mode = CdMode::full;

  double rho = 0.25;
  /// The first delta drives the importance file; more than one also
  /// writes a sweep summary.
  std::vector<double> deltas{0.5};
  std::uint64_t seed = 7;
  std::filesystem::path out_dir = "out";

  LogisticParams classifier;
  double pca_variance = 0.95;

  /// Throws InvalidArgument on out-of-range parameters.
  void validate() const;
};

struct StageOutput {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> notices;
};

/// Canonical artifact names inside the output directory.
namespace artifact {
inline constexpr const char* kCoefficients = "coefficients.json";
inline constexpr const char* kTensors = "mi_tensors.json";
inline constexpr const char* kSamples = "samples.csv";
inline constexpr const char* kImportance = "importance.csv";
inline constexpr const char* kSweep = "selection_sweep.csv";
inline constexpr const char* kReport = "report.txt";
inline constexpr const char* kComparison = "comparison.csv";
inline constexpr const char* kChart = "comparison_auc.svg";
}  // namespace artifact

/// load -> standardize -> split -> discretize (train only) -> MI tensors
/// -> preselect -> normalize -> coefficients -> penalty.
StageOutput run_build(const RunConfig& cfg);

/// Checks sampler/size compatibility before doing any work.
StageOutput run_sample(const RunConfig& cfg, const std::filesystem::path& coefficients);

StageOutput run_select(const RunConfig& cfg, const std::filesystem::path& samples,
                       const std::filesystem::path& coefficients);

/// Evaluates each selection plus all features, matched SelectKBest and
/// PCA. When `coefficients` is given, the candidate feature universe is the
/// preselected model features; otherwise every dataset column.
StageOutput run_compare(const RunConfig& cfg, const std::vector<std::filesystem::path>& selections,
                        const std::optional<std::filesystem::path>& coefficients);

StageOutput run_all(const RunConfig& cfg);

/// Hand-rolled SVG bar chart of AUC per method.
std::string render_auc_chart(const std::vector<EvalReport>& rows);

std::string serialize_comparison(const std::vector<EvalReport>& rows);

}  // namespace hubofs

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hubofs/hubo.hpp"
#include "hubofs/mi.hpp"
#include "hubofs/postselect.hpp"
#include "hubofs/samplers.hpp"

namespace hubofs {

inline constexpr int kSchemaVersion = 1;

/// 64-bit FNV-1a, used for dataset fingerprints in provenance blocks.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

/// Everything the coefficient file carries besides the Hamiltonian itself.
struct CoefficientProvenance {
  std::vector<std::string> feature_names;
  /// Column index of each model feature in the encoded dataset.
  std::vector<std::size_t> source_indices;
  /// Globally normalised relevance c_i fed to the penalty.
  std::vector<double> relevance_normalized;
  /// Ordered key/value pairs (parameters, dataset hash, dropped rows...).
  std::vector<std::pair<std::string, std::string>> fields;
};

struct CoefficientFile {
  HuboCoefficients coefficients;
  CoefficientProvenance provenance;
};

std::string serialize_coefficients(const CoefficientFile& file);
CoefficientFile parse_coefficients(std::string_view text);

std::string serialize_mi_tensors(const MiTensors& t, const std::vector<std::string>& feature_names);
MiTensors parse_mi_tensors(std::string_view text);

/// "# hubofs-samples schema_version=1", "# key=value" metadata lines, then
/// "bitstring,count,energy" with x-bitstrings (feature 0 leftmost) and
/// energies to 12 significant digits.
std::string serialize_samples(const SampleSet& s);
/// Parses a sample file. Energies are taken from the file as printed.
SampleSet parse_samples(std::string_view text);

struct ImportanceRow {
  std::size_t feature_index = 0;
  std::string feature_name;
  double importance = 0.0;
  bool selected = false;
};

/// "feature_index,feature_name,importance,selected" sorted by importance
/// descending, ties by index.
std::string serialize_importance(const SelectionResult& sel, const std::vector<std::string>& feature_names);
std::vector<ImportanceRow> parse_importance(std::string_view text);

std::string serialize_sweep(const std::vector<SelectionResult>& sweep);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace hubofs

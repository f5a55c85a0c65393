#include "hubofs/artifacts.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hubofs/errors.hpp"
#include "hubofs/format.hpp"
#include "json.hpp"

namespace hubofs {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kCoefficientSchema = "hubofs.coefficients";
constexpr std::string_view kTensorSchema = "hubofs.mi_tensors";
constexpr std::string_view kSamplesTag = "hubofs-samples";
constexpr std::string_view kImportanceTag = "hubofs-importance";
constexpr std::string_view kSweepTag = "hubofs-sweep";

ordered_json parse_json(std::string_view text, std::string_view what) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string(what) + ": " + e.what());
  }
}

void check_schema(const ordered_json& j, std::string_view schema) {
  if (!j.is_object() || !j.contains("schema") || j["schema"] != schema)
    throw DataError("expected a " + std::string(schema) + " file");
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != kSchemaVersion)
    throw DataError("unsupported " + std::string(schema) + " schema version");
}

std::string tag_line(std::string_view tag) {
  return "# " + std::string(tag) + " schema_version=" + std::to_string(kSchemaVersion) + "\n";
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    start = end + 1;
  }
  return out;
}

void check_tag(const std::vector<std::string_view>& lines, std::string_view tag) {
  const std::string expected = tag_line(tag);
  if (!lines.empty() && lines.front() == std::string_view(expected).substr(0, expected.size() - 1)) return;
  if (!lines.empty() && lines.front().starts_with("# " + std::string(tag) + " "))
    throw DataError("unsupported " + std::string(tag) + " schema version");
  throw DataError("expected a " + std::string(tag) + " file");
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += ch;
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

template <typename T>
T parse_int(std::string_view s, std::string_view what) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError("invalid " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

double parse_double(std::string_view s, std::string_view what) {
  double v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DataError("invalid " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) { return fnv1a64(read_file(path)); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

std::string serialize_coefficients(const CoefficientFile& file) {
  const auto& c = file.coefficients;
  c.validate();
  ordered_json j;
  j["schema"] = kCoefficientSchema;
  j["schema_version"] = kSchemaVersion;
  j["n"] = c.n;
  j["feature_names"] = file.provenance.feature_names;
  j["source_indices"] = file.provenance.source_indices;
  j["h"] = c.h;
  ordered_json jt = ordered_json::array();
  for (const auto& p : c.j_terms) jt.push_back(ordered_json::array({p.i, p.j, p.value}));
  j["J"] = std::move(jt);
  ordered_json kt = ordered_json::array();
  for (const auto& t : c.k_terms) kt.push_back(ordered_json::array({t.i, t.j, t.k, t.value}));
  j["K"] = std::move(kt);
  j["constant"] = c.constant;
  j["weights"] = {{"w1", c.weights.w1}, {"w2", c.weights.w2}, {"w3", c.weights.w3}};
  j["penalty"] = {{"lambda", c.penalty.lambda},
                  {"tau", c.penalty.tau},
                  {"p", c.penalty.p},
                  {"applied", c.penalty_applied}};
  j["relevance_normalized"] = file.provenance.relevance_normalized;
  ordered_json prov = ordered_json::object();
  for (const auto& [k, v] : file.provenance.fields) prov[k] = v;
  j["provenance"] = std::move(prov);
  return j.dump(1) + "\n";
}

CoefficientFile parse_coefficients(std::string_view text) {
  const auto j = parse_json(text, "coefficient file");
  check_schema(j, kCoefficientSchema);
  CoefficientFile out;
  auto& c = out.coefficients;
  try {
    c.n = j.at("n").get<std::size_t>();
    c.h = j.at("h").get<std::vector<double>>();
    for (const auto& t : j.at("J")) c.j_terms.push_back({t.at(0).get<std::size_t>(), t.at(1).get<std::size_t>(), t.at(2).get<double>()});
    for (const auto& t : j.at("K"))
      c.k_terms.push_back({t.at(0).get<std::size_t>(), t.at(1).get<std::size_t>(), t.at(2).get<std::size_t>(), t.at(3).get<double>()});
    c.constant = j.at("constant").get<double>();
    const auto& w = j.at("weights");
    c.weights = {w.at("w1").get<double>(), w.at("w2").get<double>(), w.at("w3").get<double>()};
    const auto& p = j.at("penalty");
    c.penalty = {p.at("lambda").get<double>(), p.at("tau").get<double>(), p.at("p").get<double>()};
    c.penalty_applied = p.at("applied").get<bool>();
    out.provenance.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    out.provenance.source_indices = j.at("source_indices").get<std::vector<std::size_t>>();
    out.provenance.relevance_normalized = j.at("relevance_normalized").get<std::vector<double>>();
    if (j.contains("provenance"))
      for (const auto& [k, v] : j["provenance"].items()) out.provenance.fields.emplace_back(k, v.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("coefficient file: ") + e.what());
  }
  c.validate();
  if (out.provenance.feature_names.size() != c.n) throw DataError("coefficient file: feature_names size != n");
  return out;
}

std::string serialize_mi_tensors(const MiTensors& t, const std::vector<std::string>& feature_names) {
  ordered_json j;
  j["schema"] = kTensorSchema;
  j["schema_version"] = kSchemaVersion;
  j["feature_names"] = feature_names;
  j["relevance"] = t.relevance;
  ordered_json pairs = ordered_json::array();
  for (const auto& p : t.pairs) pairs.push_back(ordered_json::array({p.i, p.j, p.value}));
  j["pairs"] = std::move(pairs);
  ordered_json triples = ordered_json::array();
  for (const auto& q : t.triples) triples.push_back(ordered_json::array({q.i, q.j, q.k, q.value}));
  j["triples"] = std::move(triples);
  return j.dump(1) + "\n";
}

MiTensors parse_mi_tensors(std::string_view text) {
  const auto j = parse_json(text, "MI tensor file");
  check_schema(j, kTensorSchema);
  MiTensors t;
  try {
    t.relevance = j.at("relevance").get<std::vector<double>>();
    for (const auto& p : j.at("pairs")) t.pairs.push_back({p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>(), p.at(2).get<double>()});
    for (const auto& q : j.at("triples"))
      t.triples.push_back({q.at(0).get<std::size_t>(), q.at(1).get<std::size_t>(), q.at(2).get<std::size_t>(), q.at(3).get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("MI tensor file: ") + e.what());
  }
  return t;
}

std::string serialize_samples(const SampleSet& s) {
  std::string out = tag_line(kSamplesTag);
  out += "# sampler=" + s.sampler_name + "\n";
  out += "# seed=" + std::to_string(s.seed) + "\n";
  out += "# n=" + std::to_string(s.num_features()) + "\n";
  out += "# total_shots=" + std::to_string(s.total_shots) + "\n";
  for (const auto& [k, v] : s.metadata) out += "# " + k + "=" + v + "\n";
  out += "bitstring,count,energy\n";
  for (const auto& e : s.entries) {
    for (auto bit : to_binary(e.spins)) out += bit ? '1' : '0';
    out += "," + std::to_string(e.count) + "," + format_g(e.energy, 12) + "\n";
  }
  return out;
}

SampleSet parse_samples(std::string_view text) {
  const auto lines = lines_of(text);
  check_tag(lines, kSamplesTag);
  SampleSet s;
  std::size_t row = 1;
  std::size_t declared_n = 0;
  bool have_n = false;
  std::uint64_t declared_total = 0;
  bool have_total = false;
  for (; row < lines.size() && lines[row].starts_with("#"); ++row) {
    std::string_view body = lines[row].substr(1);
    while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) continue;
    const std::string key(body.substr(0, eq));
    const std::string value(body.substr(eq + 1));
    if (key == "sampler") {
      s.sampler_name = value;
    } else if (key == "seed") {
      s.seed = parse_int<std::uint64_t>(value, "seed");
    } else if (key == "n") {
      declared_n = parse_int<std::size_t>(value, "n");
      have_n = true;
    } else if (key == "total_shots") {
      declared_total = parse_int<std::uint64_t>(value, "total_shots");
      have_total = true;
    } else {
      s.metadata.emplace_back(key, value);
    }
  }
  if (row >= lines.size() || lines[row] != "bitstring,count,energy")
    throw DataError("sample file: missing 'bitstring,count,energy' header");
  for (++row; row < lines.size(); ++row) {
    if (lines[row].empty()) continue;
    const auto cells = split_csv_line(lines[row]);
    if (cells.size() != 3) throw DataError("sample file: malformed row " + std::to_string(row + 1));
    std::vector<std::uint8_t> x;
    for (char ch : cells[0]) {
      if (ch != '0' && ch != '1') throw DataError("sample file: invalid bitstring '" + cells[0] + "'");
      x.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    SampleEntry e{to_spin(x), parse_int<std::uint64_t>(cells[1], "count"), parse_double(cells[2], "energy")};
    if (e.count == 0) throw DataError("sample file: zero count");
    s.total_shots += e.count;
    s.entries.push_back(std::move(e));
  }
  if (s.entries.empty()) throw DataError("sample file: no samples");
  const std::size_t n = s.entries.front().spins.size();
  for (const auto& e : s.entries)
    if (e.spins.size() != n) throw DataError("sample file: inconsistent bitstring lengths");
  if (have_n && declared_n != n) throw DataError("sample file: n does not match bitstrings");
  if (have_total && declared_total != s.total_shots) throw DataError("sample file: counts do not sum to total_shots");
  return s;
}

std::string serialize_importance(const SelectionResult& sel, const std::vector<std::string>& feature_names) {
  const auto& scores = sel.scores.scores;
  if (feature_names.size() != scores.size()) throw InvalidArgument("feature name count mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<bool> chosen(scores.size(), false);
  for (auto i : sel.selected) chosen[i] = true;

  std::string out = tag_line(kImportanceTag);
  out += "# rho=" + format_g(sel.scores.rho) + " retained=" + std::to_string(sel.scores.retained_count) +
         " delta=" + format_g(sel.delta) + "\n";
  out += "feature_index,feature_name,importance,selected\n";
  for (auto i : order)
    out += std::to_string(i) + "," + csv_quote(feature_names[i]) + "," + format_g(scores[i], 12) + "," +
           (chosen[i] ? "1" : "0") + "\n";
  return out;
}

std::vector<ImportanceRow> parse_importance(std::string_view text) {
  const auto lines = lines_of(text);
  check_tag(lines, kImportanceTag);
  std::size_t row = 1;
  while (row < lines.size() && lines[row].starts_with("#")) ++row;
  if (row >= lines.size() || lines[row] != "feature_index,feature_name,importance,selected")
    throw DataError("importance file: missing header");
  std::vector<ImportanceRow> out;
  for (++row; row < lines.size(); ++row) {
    if (lines[row].empty()) continue;
    const auto cells = split_csv_line(lines[row]);
    if (cells.size() != 4) throw DataError("importance file: malformed row " + std::to_string(row + 1));
    ImportanceRow r;
    r.feature_index = parse_int<std::size_t>(cells[0], "feature_index");
    r.feature_name = cells[1];
    r.importance = parse_double(cells[2], "importance");
    if (cells[3] != "0" && cells[3] != "1") throw DataError("importance file: selected must be 0 or 1");
    r.selected = cells[3] == "1";
    out.push_back(std::move(r));
  }
  return out;
}

std::string serialize_sweep(const std::vector<SelectionResult>& sweep) {
  std::string out = tag_line(kSweepTag);
  out += "delta,n_selected,selected_indices\n";
  for (const auto& s : sweep) {
    std::string idx;
    for (std::size_t k = 0; k < s.selected.size(); ++k) idx += (k ? " " : "") + std::to_string(s.selected[k]);
    out += format_g(s.delta, 12) + "," + std::to_string(s.selected.size()) + "," + idx + "\n";
  }
  return out;
}

}  // namespace hubofs

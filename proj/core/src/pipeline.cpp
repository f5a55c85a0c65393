#include "hubofs/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "hubofs/artifacts.hpp"
#include "hubofs/dataset.hpp"
#include "hubofs/errors.hpp"
#include "hubofs/format.hpp"
#include "hubofs/mi.hpp"
#include "hubofs/postselect.hpp"
#include "hubofs/samplers.hpp"

namespace hubofs {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw InvalidArgument(msg);
  };
  require(preselect_k >= 1, "--preselect-k must be >= 1");
  require(bins >= 2, "--bins must be >= 2");
  require(test_fraction > 0.0 && test_fraction < 1.0, "--test-fraction must lie in (0,1)");
  require(weights.w1 > 0.0 && weights.w2 > 0.0 && weights.w3 > 0.0, "--w1/--w2/--w3 must be > 0");
  require(penalty.lambda >= 0.0, "--lambda must be >= 0");
  require(penalty.tau > 0.0 && penalty.tau <= 1.0, "--tau must lie in (0,1]");
  require(penalty.p >= 1.0, "--p must be >= 1");
  require(sampler == "exhaustive" || sampler == "sa" || sampler == "dcqo" || sampler == "random",
          "--sampler must be one of exhaustive, sa, dcqo, random");
  require(shots >= 1, "--shots must be >= 1");
  require(sweeps >= 1, "--sweeps must be >= 1");
  require(t_end > 0.0, "--t-end must be > 0");
  require(!t_start || (*t_start > 0.0 && *t_start >= t_end), "--t-start must be > 0 and >= --t-end");
  require(steps >= 1, "--steps must be >= 1");
  require(total_time > 0.0, "--total-time must be > 0");
  require(rho > 0.0 && rho <= 1.0, "--rho must lie in (0,1]");
  require(!deltas.empty(), "at least one --delta is required");
  for (double d : deltas) require(d >= 0.0 && d <= 1.0, "--delta values must lie in [0,1]");
  require(pca_variance > 0.0 && pca_variance <= 1.0, "PCA variance threshold must lie in (0,1]");
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct PreparedData {
  Dataset train;
  Dataset test;
  std::size_t dropped_rows = 0;
  std::size_t total_rows = 0;
};

PreparedData prepare(const RunConfig& cfg) {
  const Dataset raw = load_csv(cfg.input, cfg.target);
  const Dataset z = standardize(raw);
  auto [train, test] = stratified_split(z, cfg.test_fraction);
  return {std::move(train), std::move(test), raw.dropped_rows, raw.num_samples()};
}

CoefficientFile load_coefficients(const fs::path& path) { return parse_coefficients(read_file(path)); }

void append_report(const RunConfig& cfg, const std::string& text) {
  const fs::path path = cfg.out_dir / artifact::kReport;
  std::string existing;
  if (fs::exists(path)) existing = read_file(path);
  write_file(path, existing + text);
}

EvalReport fit_and_evaluate(const RunConfig& cfg, const Dataset& train, const Dataset& test, std::string name) {
  const auto model = logistic_fit(train, cfg.classifier);
  auto rep = evaluate(model, test);
  rep.method_name = std::move(name);
  return rep;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

StageOutput run_build(const RunConfig& cfg) {
  cfg.validate();
  StageOutput out;
  const auto data = prepare(cfg);
  const auto disc = discretize(data.train, cfg.bins);
  const std::size_t n_all = disc.num_features;

  const auto relevance = relevance_scores(disc);
  std::vector<std::size_t> chosen;
  if (n_all <= cfg.preselect_k) {
    chosen.resize(n_all);
    for (std::size_t i = 0; i < n_all; ++i) chosen[i] = i;
    out.notices.push_back("preselection skipped: dataset has " + std::to_string(n_all) + " features (<= " +
                          std::to_string(cfg.preselect_k) + ")");
  } else {
    chosen = preselect_top_k(relevance, cfg.preselect_k);
  }

  const auto sub = disc.with_features(chosen);
  const auto tensors = compute_tensors(sub);
  const auto norm = normalize_global(tensors);
  if (norm.degenerate) out.notices.push_back("warning: degenerate normalization (all MI values equal)");

  auto coeffs = build_coefficients(norm.tensors, cfg.weights);
  coeffs = apply_penalty(coeffs, norm.tensors.relevance, cfg.penalty);

  CoefficientFile file;
  file.coefficients = std::move(coeffs);
  file.provenance.feature_names = sub.source_names;
  file.provenance.source_indices = chosen;
  file.provenance.relevance_normalized = norm.tensors.relevance;
  file.provenance.fields = {
      {"input", cfg.input.filename().string()},
      {"target", cfg.target},
      {"dataset_fnv1a64", hex64(fnv1a64_file(cfg.input))},
      {"rows_used", std::to_string(data.total_rows)},
      {"dropped_rows", std::to_string(data.dropped_rows)},
      {"encoded_features", std::to_string(n_all)},
      {"train_rows", std::to_string(data.train.num_samples())},
      {"test_fraction", format_g(cfg.test_fraction)},
      {"bins", std::to_string(cfg.bins)},
      {"preselect_k", std::to_string(cfg.preselect_k)},
      {"mi_min_bits", format_g(norm.min_value)},
      {"mi_max_bits", format_g(norm.max_value)},
      {"normalization_degenerate", norm.degenerate ? "true" : "false"},
  };

  const fs::path coeff_path = cfg.out_dir / artifact::kCoefficients;
  const fs::path tensor_path = cfg.out_dir / artifact::kTensors;
  write_file(coeff_path, serialize_coefficients(file));
  write_file(tensor_path, serialize_mi_tensors(tensors, sub.source_names));
  out.files = {coeff_path, tensor_path};
  return out;
}

StageOutput run_sample(const RunConfig& cfg, const fs::path& coefficients) {
  cfg.validate();
  const auto file = load_coefficients(coefficients);
  const auto& c = file.coefficients;
  if (cfg.sampler == "exhaustive" && c.n > kMaxExhaustiveSpins)
    throw CapacityError("sampler 'exhaustive' supports n <= " + std::to_string(kMaxExhaustiveSpins) + ", model has n=" +
                        std::to_string(c.n));
  if (cfg.sampler == "dcqo" && c.n > kMaxStatevectorQubits)
    throw CapacityError("sampler 'dcqo' supports n <= " + std::to_string(kMaxStatevectorQubits) + ", model has n=" +
                        std::to_string(c.n));

  SampleSet samples;
  StageOutput out;
  if (cfg.sampler == "exhaustive") {
    const std::uint64_t space = std::uint64_t{1} << c.n;
    if (cfg.shots > space) out.notices.push_back("exhaustive: keeping all " + std::to_string(space) + " states");
    samples = exhaustive_solve(c, std::min(cfg.shots, space));
  } else if (cfg.sampler == "sa") {
    AnnealingParams p;
    p.shots = cfg.shots;
    p.sweeps = cfg.sweeps;
    p.t_start = cfg.t_start;
    p.t_end = cfg.t_end;
    p.seed = cfg.seed;
    samples = simulated_annealing(c, p);
  } else if (cfg.sampler == "dcqo") {
    samples = evolve_and_sample(c, build_schedule(cfg.steps, cfg.total_time), cfg.shots, cfg.seed, cfg.mode);
  } else {
    samples = random_sample(c, cfg.shots, cfg.seed);
  }
  const fs::path path = cfg.out_dir / artifact::kSamples;
  write_file(path, serialize_samples(samples));
  out.files = {path};
  return out;
}

StageOutput run_select(const RunConfig& cfg, const fs::path& samples_path, const fs::path& coefficients) {
  cfg.validate();
  const auto file = load_coefficients(coefficients);
  auto samples = parse_samples(read_file(samples_path));
  if (samples.num_features() != file.coefficients.n)
    throw DataError("sample file has n=" + std::to_string(samples.num_features()) + " but coefficient file has n=" +
                    std::to_string(file.coefficients.n));
  // Rank on exact energies, not the 12-digit printed ones.
  for (auto& e : samples.entries) e.energy = energy(file.coefficients, e.spins);
  sort_entries(samples.entries);

  const auto retained = retain_low_energy(samples, cfg.rho);
  const auto scores = importance(retained, cfg.rho);
  const auto sweep = threshold_sweep(scores, cfg.deltas);

  StageOutput out;
  const fs::path imp_path = cfg.out_dir / artifact::kImportance;
  write_file(imp_path, serialize_importance(sweep.front(), file.provenance.feature_names));
  out.files.push_back(imp_path);
  if (cfg.deltas.size() > 1) {
    const fs::path sweep_path = cfg.out_dir / artifact::kSweep;
    write_file(sweep_path, serialize_sweep(sweep));
    out.files.push_back(sweep_path);
  }

  std::string report = "[select] sampler=" + samples.sampler_name + " shots=" + std::to_string(samples.total_shots) +
                       " rho=" + format_g(cfg.rho) + " retained=" + std::to_string(scores.retained_count) + "\n";
  for (const auto& s : sweep) {
    report += "[select] delta=" + format_g(s.delta) + " selected=" + std::to_string(s.selected.size()) + "/" +
              std::to_string(file.coefficients.n) + ":";
    for (auto i : s.selected) report += " " + file.provenance.feature_names[i];
    report += "\n";
  }
  append_report(cfg, report);
  out.files.push_back(cfg.out_dir / artifact::kReport);
  return out;
}

std::string serialize_comparison(const std::vector<EvalReport>& rows) {
  std::string out = "# hubofs-comparison schema_version=" + std::to_string(kSchemaVersion) + "\n";
  out += "method,n,accuracy,f1,auc\n";
  for (const auto& r : rows)
    out += r.method_name + "," + std::to_string(r.n_features_or_components) + "," + format_g(r.accuracy, 6) + "," +
           format_g(r.f1, 6) + "," + format_g(r.auc, 6) + "\n";
  return out;
}

std::string render_auc_chart(const std::vector<EvalReport>& rows) {
  const int bar_w = 60;
  const int gap = 30;
  const int left = 60;
  const int top = 40;
  const int plot_h = 300;
  const int width = left + static_cast<int>(rows.size()) * (bar_w + gap) + gap;
  const int height = top + plot_h + 120;
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<!-- hubofs-comparison-chart schema_version=" + std::to_string(kSchemaVersion) + " -->\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<text x=\"" + std::to_string(left) + "\" y=\"20\" font-size=\"14\">Test ROC-AUC by method</text>\n";
  const int base = top + plot_h;
  for (int tick = 0; tick <= 10; tick += 2) {
    const int y = base - plot_h * tick / 10;
    svg += "<line x1=\"" + std::to_string(left) + "\" y1=\"" + std::to_string(y) + "\" x2=\"" + std::to_string(width - gap / 2) +
           "\" y2=\"" + std::to_string(y) + "\" stroke=\"#ddd\"/>\n";
    svg += "<text x=\"" + std::to_string(left - 8) + "\" y=\"" + std::to_string(y + 4) + "\" text-anchor=\"end\">" +
           format_g(tick / 10.0, 2) + "</text>\n";
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int x = left + gap + static_cast<int>(k) * (bar_w + gap);
    const int h = static_cast<int>(std::lround(rows[k].auc * plot_h));
    svg += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(base - h) + "\" width=\"" + std::to_string(bar_w) +
           "\" height=\"" + std::to_string(h) + "\" fill=\"#4472c4\"/>\n";
    svg += "<text x=\"" + std::to_string(x + bar_w / 2) + "\" y=\"" + std::to_string(base - h - 4) +
           "\" text-anchor=\"middle\">" + format_g(rows[k].auc, 4) + "</text>\n";
    svg += "<text transform=\"translate(" + std::to_string(x + bar_w / 2) + "," + std::to_string(base + 12) +
           ") rotate(30)\">" + xml_escape(rows[k].method_name) + " (n=" + std::to_string(rows[k].n_features_or_components) +
           ")</text>\n";
  }
  svg += "<line x1=\"" + std::to_string(left) + "\" y1=\"" + std::to_string(base) + "\" x2=\"" + std::to_string(width - gap / 2) +
         "\" y2=\"" + std::to_string(base) + "\" stroke=\"#000\"/>\n";
  svg += "</svg>\n";
  return svg;
}

StageOutput run_compare(const RunConfig& cfg, const std::vector<fs::path>& selections,
                        const std::optional<fs::path>& coefficients) {
  cfg.validate();
  if (selections.empty()) throw InvalidArgument("compare needs at least one selection file");
  StageOutput out;
  const auto data = prepare(cfg);

  std::vector<std::size_t> universe;
  if (coefficients) {
    const auto file = load_coefficients(*coefficients);
    for (const auto& name : file.provenance.feature_names) universe.push_back(data.train.feature_index(name));
  } else {
    for (std::size_t i = 0; i < data.train.num_features(); ++i) universe.push_back(i);
  }
  std::vector<std::size_t> sorted_universe = universe;
  std::sort(sorted_universe.begin(), sorted_universe.end());
  const Dataset train_u = data.train.with_columns(sorted_universe);
  const Dataset test_u = data.test.with_columns(sorted_universe);

  std::vector<EvalReport> hubo_rows;
  std::vector<std::size_t> sizes;
  for (const auto& path : selections) {
    const auto rows = parse_importance(read_file(path));
    std::vector<std::size_t> cols;
    for (const auto& r : rows)
      if (r.selected) cols.push_back(train_u.feature_index(r.feature_name));
    std::sort(cols.begin(), cols.end());
    if (cols.empty()) {
      out.notices.push_back("selection '" + path.filename().string() + "' is empty; skipped");
      continue;
    }
    hubo_rows.push_back(fit_and_evaluate(cfg, train_u.with_columns(cols), test_u.with_columns(cols),
                                         "hubo:" + path.stem().string()));
    sizes.push_back(cols.size());
  }

  std::vector<EvalReport> rows = hubo_rows;
  rows.push_back(fit_and_evaluate(cfg, train_u, test_u, "all_features"));

  const auto relevance = relevance_scores(discretize(train_u, cfg.bins));
  for (std::size_t m : sizes) {
    const auto cols = select_k_best(relevance, m);
    rows.push_back(fit_and_evaluate(cfg, train_u.with_columns(cols), test_u.with_columns(cols), "select_k_best"));
  }

  const auto pca = pca_fit(train_u, cfg.pca_variance);
  rows.push_back(fit_and_evaluate(cfg, pca_transform(pca, train_u), pca_transform(pca, test_u),
                                  "pca_var" + format_g(cfg.pca_variance)));

  const fs::path csv_path = cfg.out_dir / artifact::kComparison;
  const fs::path svg_path = cfg.out_dir / artifact::kChart;
  write_file(csv_path, serialize_comparison(rows));
  write_file(svg_path, render_auc_chart(rows));
  out.files = {csv_path, svg_path};
  return out;
}

StageOutput run_all(const RunConfig& cfg) {
  StageOutput out;
  auto merge = [&](StageOutput s) {
    out.files.insert(out.files.end(), s.files.begin(), s.files.end());
    out.notices.insert(out.notices.end(), s.notices.begin(), s.notices.end());
  };
  const fs::path report = cfg.out_dir / artifact::kReport;
  if (fs::exists(report)) fs::remove(report);
  merge(run_build(cfg));
  const fs::path coeff = cfg.out_dir / artifact::kCoefficients;
  merge(run_sample(cfg, coeff));
  merge(run_select(cfg, cfg.out_dir / artifact::kSamples, coeff));
  merge(run_compare(cfg, {cfg.out_dir / artifact::kImportance}, coeff));
  return out;
}

}  // namespace hubofs

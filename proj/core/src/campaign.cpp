#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <istream>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <sstream>

#include "holosens/error.hpp"
#include "holosens/experiment.hpp"
#include "holosens/phase_retrieval.hpp"
#include "holosens/random.hpp"

namespace holosens {

std::string_view to_string(ForwardModel fm) noexcept {
  return fm == ForwardModel::Fourier ? "fourier" : "asm";
}

ForwardModel parse_forward_model(std::string_view text) {
  if (text == "fourier") return ForwardModel::Fourier;
  if (text == "asm" || text == "free") return ForwardModel::Asm;
  throw Error(ErrorKind::InvalidArgument, "unknown forward model '" + std::string(text) + "'");
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
  return fnv1a64(std::span(reinterpret_cast<const unsigned char*>(text.data()), text.size()));
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::uint64_t hash_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return fnv1a64(bytes);
}

std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir, std::size_t limit) {
  require(std::filesystem::is_directory(dir), ErrorKind::Io,
          "corpus directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.size() > limit) files.resize(limit);
  require(!files.empty(), ErrorKind::InvalidArgument, "corpus is empty: " + dir.string());

  std::vector<CorpusEntry> corpus;
  for (const auto& f : files) corpus.push_back(CorpusEntry{f, hash_file(f), load_grayscale(f)});
  return corpus;
}

void CampaignConfig::validate() const {
  bounds.validate();
  require(base_samples >= 2, ErrorKind::InvalidArgument, "N must be >= 2");
  require(!forward_models.empty(), ErrorKind::InvalidArgument, "no forward model selected");
  require(iterations >= 1, ErrorKind::InvalidArgument, "iterations must be >= 1");
  require(image_limit >= 1, ErrorKind::InvalidArgument, "image_limit must be >= 1");
  for (std::size_t it : record_iterations) {
    require(it >= 1 && it <= iterations, ErrorKind::InvalidArgument,
            "record iteration outside [1, iterations]");
  }
}

std::vector<std::size_t> CampaignConfig::recorded_iterations() const {
  if (record_iterations.empty()) {
    std::vector<std::size_t> all(iterations);
    for (std::size_t i = 0; i < iterations; ++i) all[i] = i + 1;
    return all;
  }
  std::set<std::size_t> unique(record_iterations.begin(), record_iterations.end());
  return {unique.begin(), unique.end()};
}

FmhConfig fmh_from_row(const FmhBounds& bounds, std::span<const double> row,
                       const FmhConfig& fallback) {
  FmhConfig fmh = fallback;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const std::string& name = bounds.parameters[i].name;
    if (name == "lambda") {
      fmh.wavelength = row[i];
    } else if (name == "pitch") {
      fmh.pixel_pitch = row[i];
    } else if (name == "M") {
      fmh.slm_resolution = static_cast<std::size_t>(std::llround(row[i]));
    } else if (name == "d") {
      fmh.distance = row[i];
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown FMH parameter '" + name + "'");
    }
  }
  return fmh;
}

double metric_value(const MetricRecord& record, std::string_view metric) {
  if (metric == "psnr") return record.psnr;
  if (metric == "ssim") return record.ssim;
  if (metric == "accuracy") return record.accuracy;
  throw Error(ErrorKind::InvalidArgument, "unknown metric '" + std::string(metric) + "'");
}

namespace {

std::size_t iteration_slot(const std::vector<std::size_t>& iterations, std::size_t iteration) {
  const auto it = std::find(iterations.begin(), iterations.end(), iteration);
  require(it != iterations.end(), ErrorKind::InvalidArgument,
          "iteration " + std::to_string(iteration) + " was not recorded");
  return static_cast<std::size_t>(it - iterations.begin());
}

// Mean metrics over the corpus for one FMH / forward model.
std::vector<MetricRecord> evaluate_corpus(const std::vector<CorpusEntry>& corpus,
                                          ForwardModel fm, const FmhConfig& fmh,
                                          const CampaignConfig& cfg,
                                          const std::vector<std::size_t>& iterations,
                                          std::uint64_t item) {
  std::vector<MetricRecord> sums(iterations.size());
  for (std::size_t img = 0; img < corpus.size(); ++img) {
    GsConfig gs;
    gs.forward_model = fm;
    gs.fmh = fmh;
    gs.iterations = cfg.iterations;
    gs.seed = derive_seed({cfg.master_seed, item, img});
    gs.record_iterations = iterations;
    const Image target = resize_bilinear(corpus[img].image, fmh.slm_resolution);
    const GsTrace trace = gs_run(target, gs);
    for (std::size_t s = 0; s < iterations.size(); ++s) {
      sums[s].psnr += trace.records[s].metrics.psnr;
      sums[s].ssim += trace.records[s].metrics.ssim;
      sums[s].accuracy += trace.records[s].metrics.accuracy;
    }
  }
  const auto n = static_cast<double>(corpus.size());
  for (auto& m : sums) {
    m.psnr /= n;
    m.ssim /= n;
    m.accuracy /= n;
  }
  return sums;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t design_hash(const SaltelliDesign& design) {
  std::ostringstream s;
  write_design_csv(s, design);
  return fnv1a64(s.str());
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream s(line);
  while (std::getline(s, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::vector<double> CampaignResult::column(std::string_view metric, std::size_t iteration) const {
  const std::size_t slot = iteration_slot(iterations, iteration);
  std::vector<double> y;
  y.reserve(rows.size());
  for (const auto& r : rows) y.push_back(metric_value(r.per_iteration[slot], metric));
  return y;
}

void write_result_rows(std::ostream& out, const SaltelliDesign& design, const RowMetrics& row,
                       std::span<const std::size_t> iterations) {
  const std::string block = block_label(design.rows[row.row]);
  for (std::size_t s = 0; s < iterations.size(); ++s) {
    const MetricRecord& m = row.per_iteration[s];
    out << row.row << ',' << block << ',' << fmt17(row.fmh.wavelength) << ','
        << fmt17(row.fmh.pixel_pitch) << ',' << row.fmh.slm_resolution << ','
        << fmt17(row.fmh.distance) << ',' << iterations[s] << ',' << fmt17(m.psnr) << ','
        << fmt17(m.ssim) << ',' << fmt17(m.accuracy) << '\n';
  }
}

void write_results_csv(std::ostream& out, const CampaignResult& result) {
  out << kResultsHeader << '\n';
  for (const auto& row : result.rows) write_result_rows(out, result.design, row, result.iterations);
}

ResultsTable read_results_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line == kResultsHeader,
          ErrorKind::MalformedHeader, "results CSV header mismatch");
  ResultsTable table;
  std::map<std::size_t, RowMetrics> rows;
  std::set<std::size_t> iterations;
  std::map<std::size_t, std::map<std::size_t, MetricRecord>> cells;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    require(f.size() == 10, ErrorKind::MalformedHeader, "results CSV row has wrong field count");
    try {
      const std::size_t r = std::stoul(f[0]);
      RowMetrics& rm = rows[r];
      rm.row = r;
      rm.fmh = FmhConfig{std::stod(f[2]), std::stod(f[3]), std::stoul(f[4]), std::stod(f[5])};
      const std::size_t it = std::stoul(f[6]);
      iterations.insert(it);
      cells[r][it] = MetricRecord{std::stod(f[7]), std::stod(f[8]), std::stod(f[9])};
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::MalformedHeader, "unparseable results CSV row: " + line);
    }
  }
  table.iterations.assign(iterations.begin(), iterations.end());
  for (auto& [r, rm] : rows) {
    for (std::size_t it : table.iterations) {
      const auto c = cells[r].find(it);
      // Partial rows (interrupted writes) are dropped.
      if (c == cells[r].end()) break;
      rm.per_iteration.push_back(c->second);
    }
    if (rm.per_iteration.size() == table.iterations.size()) table.rows.push_back(rm);
  }
  return table;
}

CampaignResult run_fmh_campaign(const CampaignConfig& cfg, const CampaignOptions& options) {
  cfg.validate();
  const std::vector<CorpusEntry> corpus = load_corpus(cfg.corpus, cfg.image_limit);

  CampaignResult result;
  result.design = saltelli_design(cfg.bounds, cfg.base_samples, cfg.second_order);
  result.forward_model = cfg.forward_models.front();
  result.iterations = cfg.recorded_iterations();
  result.provenance.master_seed = cfg.master_seed;
  result.provenance.design_hash = design_hash(result.design);
  for (const auto& c : corpus) {
    result.provenance.corpus.emplace_back(c.path.filename().string(), c.content_hash);
  }

  const SaltelliDesign& design = result.design;
  const std::size_t total = design.row_count();
  auto row_fmh = [&](std::size_t r) {
    const std::span<const double> row(&design.scaled[r * design.dimensions], design.dimensions);
    return fmh_from_row(design.bounds, row);
  };

  // Resume: keep the longest prefix of complete rows that match this design.
  std::vector<RowMetrics> done;
  std::ofstream sink;
  if (options.output_dir) {
    std::filesystem::create_directories(*options.output_dir);
    const auto path = *options.output_dir / "results.csv";
    if (std::filesystem::exists(path)) {
      // Only newline-terminated lines count; a run killed mid-write can leave
      // a truncated number that would otherwise parse as a valid value.
      std::ifstream raw(path, std::ios::binary);
      std::string text((std::istreambuf_iterator<char>(raw)), std::istreambuf_iterator<char>());
      text.resize(text.find_last_of('\n') == std::string::npos ? 0 : text.find_last_of('\n') + 1);
      std::istringstream in(text);
      ResultsTable previous;
      try {
        previous = read_results_csv(in);
      } catch (const Error&) {
        previous = {};
      }
      if (previous.iterations == result.iterations) {
        for (std::size_t r = 0; r < previous.rows.size() && r < total; ++r) {
          if (previous.rows[r].row != r || !(previous.rows[r].fmh == row_fmh(r))) break;
          done.push_back(previous.rows[r]);
        }
      }
    }
    sink.open(path, std::ios::trunc);
    require(static_cast<bool>(sink), ErrorKind::Io, "cannot write " + path.string());
    sink << kResultsHeader << '\n';
    for (const auto& row : done) write_result_rows(sink, design, row, result.iterations);
    sink.flush();
  }

  const std::size_t first = done.size();
  std::map<std::size_t, RowMetrics> pending;
  std::size_t next_to_write = first;
  auto on_done = [&](std::size_t i, const RowMetrics& row) {
    if (!sink.is_open()) return;
    pending.emplace(first + i, row);
    while (!pending.empty() && pending.begin()->first == next_to_write) {
      write_result_rows(sink, design, pending.begin()->second, result.iterations);
      pending.erase(pending.begin());
      ++next_to_write;
    }
    sink.flush();
  };
  std::vector<RowMetrics> fresh = parallel_map<RowMetrics>(
      total - first, cfg.workers,
      [&](std::size_t i) {
        const std::size_t r = first + i;
        RowMetrics rm;
        rm.row = r;
        rm.fmh = row_fmh(r);
        rm.per_iteration =
            evaluate_corpus(corpus, result.forward_model, rm.fmh, cfg, result.iterations, r);
        return rm;
      },
      on_done);

  result.rows = std::move(done);
  for (auto& r : fresh) result.rows.push_back(std::move(r));
  return result;
}

std::string campaign_manifest_json(const CampaignConfig& cfg, const CampaignResult& result) {
  nlohmann::ordered_json j;
  j["tool"] = "holosens";
  j["kind"] = "fmh_campaign";
  nlohmann::ordered_json bounds = nlohmann::ordered_json::array();
  for (const auto& p : cfg.bounds.parameters) {
    bounds.push_back({{"name", p.name}, {"lower", p.lower}, {"upper", p.upper},
                      {"integer", p.integer}});
  }
  j["config"] = {
      {"bounds", bounds},
      {"N", cfg.base_samples},
      {"second_order", cfg.second_order},
      {"forward_model", std::string(to_string(result.forward_model))},
      {"iterations", cfg.iterations},
      {"record_iterations", result.iterations},
      {"corpus", cfg.corpus.string()},
      {"image_limit", cfg.image_limit},
      {"workers", cfg.workers},
      {"bootstrap_resamples", cfg.bootstrap_resamples},
  };
  j["master_seed"] = cfg.master_seed;
  j["seed_derivation"] = "splitmix64 chain over (master_seed, row, image)";
  j["design_hash_fnv1a64"] = hex64(result.provenance.design_hash);
  j["design_rows"] = result.design.row_count();
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& [name, hash] : result.provenance.corpus) {
    files.push_back({{"file", name}, {"fnv1a64", hex64(hash)}});
  }
  j["corpus_files"] = files;
  j["metric_averaging"] = "arithmetic mean of per-image values";
  j["score_normalization"] = "min-max per campaign per metric";
  return j.dump(2);
}

void write_indices_json(std::ostream& out, const SobolIndices& indices, std::string_view metric,
                        std::size_t iteration) {
  nlohmann::ordered_json j;
  j["metric"] = std::string(metric);
  j["iteration"] = iteration;
  j["confidence_level"] = indices.confidence_level;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  const std::size_t k = indices.names.size();
  for (std::size_t i = 0; i < k; ++i) {
    rows.push_back({{"param", indices.names[i]}, {"order", "S1"},
                    {"S", indices.first[i].value}, {"conf", indices.first[i].conf}});
  }
  for (std::size_t i = 0; i < k; ++i) {
    rows.push_back({{"param", indices.names[i]}, {"order", "ST"},
                    {"S", indices.total[i].value}, {"conf", indices.total[i].conf}});
  }
  if (indices.has_second) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t jj = i + 1; jj < k; ++jj) {
        rows.push_back({{"param", indices.names[i] + ":" + indices.names[jj]},
                        {"order", "S2"},
                        {"S", indices.s2(i, jj).value},
                        {"conf", indices.s2(i, jj).conf}});
      }
    }
  }
  j["indices"] = rows;
  out << j.dump(2) << '\n';
}

AnchorPoints anchor_points(const FmhBounds& bounds) {
  bounds.validate();
  AnchorPoints a;
  for (const auto& p : bounds.parameters) {
    const double mid = (p.lower + p.upper) / 2.0;
    const double inner = (p.lower + mid) / 2.0;
    const double outer = (mid + p.upper) / 2.0;
    auto fix = [&](double v) { return p.integer ? std::round(v) : v; };
    a.mid.push_back(fix(mid));
    a.inner.push_back(fix(inner));
    a.outer.push_back(fix(outer));
  }
  return a;
}

FmComparisonResult run_fm_comparison(const CampaignConfig& cfg) {
  cfg.validate();
  const std::vector<CorpusEntry> corpus = load_corpus(cfg.corpus, cfg.image_limit);

  std::size_t m_index = cfg.bounds.size();
  for (std::size_t i = 0; i < cfg.bounds.size(); ++i) {
    if (cfg.bounds.parameters[i].name == "M") m_index = i;
  }
  require(m_index < cfg.bounds.size(), ErrorKind::InvalidArgument,
          "forward-model comparison needs an M bound");

  FmComparisonResult result;
  result.iterations = cfg.recorded_iterations();
  const AnchorPoints anchors = anchor_points(cfg.bounds);
  result.frozen = fmh_from_row(cfg.bounds, anchors.mid);
  result.provenance.master_seed = cfg.master_seed;
  for (const auto& c : corpus) {
    result.provenance.corpus.emplace_back(c.path.filename().string(), c.content_hash);
  }

  const std::vector<double> unit = sobol_points(1, cfg.base_samples);
  std::string design_text;
  for (double u : unit) {
    const auto m = static_cast<std::size_t>(cfg.bounds.scale(m_index, u));
    result.resolutions.push_back(m);
    design_text += std::to_string(m) + '\n';
  }
  result.provenance.design_hash = fnv1a64(design_text);

  const std::size_t n = result.resolutions.size();
  // Work item 2s is Fourier, 2s+1 ASM, for sample s; both share seeds.
  auto runs = parallel_map<std::vector<MetricRecord>>(2 * n, cfg.workers, [&](std::size_t item) {
    const std::size_t s = item / 2;
    const ForwardModel fm = item % 2 == 0 ? ForwardModel::Fourier : ForwardModel::Asm;
    FmhConfig fmh = result.frozen;
    fmh.slm_resolution = result.resolutions[s];
    return evaluate_corpus(corpus, fm, fmh, cfg, result.iterations, s);
  });
  for (std::size_t s = 0; s < n; ++s) {
    result.fourier.push_back(std::move(runs[2 * s]));
    result.asm_model.push_back(std::move(runs[2 * s + 1]));
  }
  return result;
}

std::vector<double> FmComparisonResult::column(ForwardModel fm, std::string_view metric,
                                               std::size_t iteration) const {
  const std::size_t slot = iteration_slot(iterations, iteration);
  const auto& source = fm == ForwardModel::Fourier ? fourier : asm_model;
  std::vector<double> y;
  y.reserve(source.size());
  for (const auto& per_iteration : source) y.push_back(metric_value(per_iteration[slot], metric));
  return y;
}

void write_fm_comparison_csv(std::ostream& out, const FmComparisonResult& result) {
  out << "sample,M,fm,iteration,mean_psnr_db,mean_ssim,mean_accuracy\n";
  for (std::size_t s = 0; s < result.resolutions.size(); ++s) {
    for (ForwardModel fm : {ForwardModel::Fourier, ForwardModel::Asm}) {
      const auto& per = fm == ForwardModel::Fourier ? result.fourier[s] : result.asm_model[s];
      for (std::size_t i = 0; i < result.iterations.size(); ++i) {
        out << s << ',' << result.resolutions[s] << ',' << to_string(fm) << ','
            << result.iterations[i] << ',' << fmt17(per[i].psnr) << ',' << fmt17(per[i].ssim)
            << ',' << fmt17(per[i].accuracy) << '\n';
      }
    }
  }
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Degenerate inputs (constant columns, tiny samples) report p = 1 and NaN.
template <typename F>
TestResult guarded(F&& f) {
  try {
    return f();
  } catch (const Error&) {
    return TestResult{std::numeric_limits<double>::quiet_NaN(), 1.0, 0, Alternative::TwoSided,
                      false};
  }
}

}  // namespace

std::vector<FmIterationReport> fm_comparison_report(const FmComparisonResult& result,
                                                    std::string_view metric) {
  std::vector<double> m(result.resolutions.begin(), result.resolutions.end());
  std::vector<FmIterationReport> report;
  for (std::size_t it : result.iterations) {
    const auto f = result.column(ForwardModel::Fourier, metric, it);
    const auto a = result.column(ForwardModel::Asm, metric, it);
    FmIterationReport r;
    r.iteration = it;
    r.median_fourier = median(f);
    r.median_asm = median(a);
    r.wilcoxon_fourier_greater =
        guarded([&] { return wilcoxon_signed_rank(f, a, Alternative::Greater); });
    r.spearman_m_fourier = guarded([&] { return spearman(m, f); });
    r.spearman_m_asm = guarded([&] { return spearman(m, a); });
    r.pearson_m_fourier = guarded([&] { return pearson(m, f); });
    r.pearson_m_asm = guarded([&] { return pearson(m, a); });
    r.pearson_fourier_asm = guarded([&] { return pearson(f, a); });
    r.spearman_fourier_asm = guarded([&] { return spearman(f, a); });
    report.push_back(r);
  }
  return report;
}

void write_fm_report_csv(std::ostream& out, const std::vector<FmIterationReport>& report) {
  out << "iteration,median_fourier,median_asm,wilcoxon_W,wilcoxon_p,wilcoxon_n,"
         "spearman_M_fourier,spearman_M_fourier_p,spearman_M_asm,spearman_M_asm_p,"
         "pearson_M_fourier,pearson_M_fourier_p,pearson_M_asm,pearson_M_asm_p,"
         "pearson_fourier_asm,pearson_fourier_asm_p,spearman_fourier_asm,"
         "spearman_fourier_asm_p\n";
  for (const auto& r : report) {
    out << r.iteration << ',' << fmt17(r.median_fourier) << ',' << fmt17(r.median_asm) << ','
        << fmt17(r.wilcoxon_fourier_greater.statistic) << ','
        << fmt17(r.wilcoxon_fourier_greater.p_value) << ',' << r.wilcoxon_fourier_greater.n;
    for (const TestResult* t : {&r.spearman_m_fourier, &r.spearman_m_asm, &r.pearson_m_fourier,
                                &r.pearson_m_asm, &r.pearson_fourier_asm,
                                &r.spearman_fourier_asm}) {
      out << ',' << fmt17(t->statistic) << ',' << fmt17(t->p_value);
    }
    out << '\n';
  }
}

}  // namespace holosens

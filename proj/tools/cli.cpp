#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "config.hpp"
#include "holosens/error.hpp"
#include "holosens/experiment.hpp"
#include "holosens/phase_retrieval.hpp"

#ifndef HOLOSENS_VERSION
#define HOLOSENS_VERSION "0.0.0"
#endif

namespace holosens::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Collects provenance while a subcommand runs and writes run_manifest.json.
class RunRecorder {
 public:
  RunRecorder(std::string subcommand, fs::path out_dir, std::vector<std::string> argv)
      : subcommand_(std::move(subcommand)), out_dir_(std::move(out_dir)), argv_(std::move(argv)),
        start_(std::chrono::steady_clock::now()) {}

  void config(Json snapshot, std::uint64_t seed) {
    config_ = std::move(snapshot);
    seed_ = seed;
  }

  void input(const fs::path& path) { inputs_.push_back({path.string(), hex64(hash_file(path))}); }
  void inputs_from_corpus(const Provenance& p, const fs::path& dir) {
    for (const auto& [name, hash] : p.corpus) inputs_.push_back({(dir / name).string(), hex64(hash)});
  }

  /// Path of a file the subcommand is about to write; hashed at finish.
  fs::path output(const std::string& name) {
    const fs::path p = out_dir_ / name;
    outputs_.push_back(p);
    return p;
  }

  template <typename F>
  auto timed(const std::string& phase, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      timings_.emplace_back(phase, seconds_since(t0));
    } else {
      auto r = f();
      timings_.emplace_back(phase, seconds_since(t0));
      return r;
    }
  }

  void finish() {
    Json j;
    j["tool"] = "holosens";
    j["version"] = HOLOSENS_VERSION;
    j["subcommand"] = subcommand_;
    j["argv"] = argv_;
    j["config"] = config_;
    j["master_seed"] = seed_;
    Json in = Json::array();
    for (const auto& [path, hash] : inputs_) in.push_back({{"path", path}, {"fnv1a64", hash}});
    j["inputs"] = in;
    Json out = Json::array();
    for (const auto& p : outputs_) {
      require(fs::exists(p), ErrorKind::Io, "expected output missing: " + p.string());
      out.push_back({{"path", p.string()}, {"fnv1a64", hex64(hash_file(p))}});
    }
    j["outputs"] = out;
    Json t = Json::object();
    for (const auto& [phase, s] : timings_) t[phase] = s;
    j["timings_s"] = t;
    j["wall_clock_s"] = seconds_since(start_);
    std::ofstream f(out_dir_ / "run_manifest.json");
    require(static_cast<bool>(f), ErrorKind::Io, "cannot write run manifest");
    f << j.dump(2) << '\n';
  }

 private:
  static double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  std::string subcommand_;
  fs::path out_dir_;
  std::vector<std::string> argv_;
  std::chrono::steady_clock::time_point start_;
  Json config_;
  std::uint64_t seed_ = 0;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<fs::path> outputs_;
  std::vector<std::pair<std::string, double>> timings_;
};

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::string out = "holosens-out";
};

// Physical parameters for single runs: h_mid of the configured bounds unless
// overridden on the command line.
struct PhysicalFlags {
  std::string fm = "fourier";
  std::size_t m = 0;
  std::optional<double> lambda;
  std::optional<double> pitch;
  std::optional<double> d;
  std::string target;
};

struct Options {
  Globals g;
  PhysicalFlags phys;
  bool inverse = false;
  bool zero_phase = false;
  std::size_t iters = 30;
  double amplitude = 1.0;
  bool rescale = false;
  std::size_t k = 0;
  std::optional<std::size_t> n;
  bool second_order = false;
  bool first_order = false;
  std::optional<std::size_t> campaign_iters;
  std::optional<std::string> campaign_fm;
  std::optional<std::string> corpus;
  std::string metric = "psnr";
  std::optional<std::size_t> iteration;
  std::string method_csv;
  std::string baseline_csv;
  std::string inner_csv, mid_csv, outer_csv, neighborhood_csv;
  double alpha = 1.0 / 3.0, beta = 1.0 / 3.0, gamma = 1.0 / 3.0;
  std::vector<std::string> inputs;
};

void add_physical(CLI::App* sub, PhysicalFlags& p) {
  sub->add_option("--fm", p.fm, "forward model: fourier | asm")->capture_default_str();
  sub->add_option("--m", p.m, "SLM resolution M (0: take the target's size)");
  sub->add_option("--lambda", p.lambda, "wavelength [m]");
  sub->add_option("--pitch", p.pitch, "pixel pitch [m]");
  sub->add_option("--d", p.d, "propagation distance [m]");
  sub->add_option("--target", p.target, "target image (PGM)")->required();
}

CampaignConfig build_config(const Options& o) {
  CampaignConfig cfg;
  if (!o.g.config.empty()) apply_config(cfg, load_config_file(o.g.config));
  if (o.g.seed) cfg.master_seed = *o.g.seed;
  if (o.g.workers) cfg.workers = *o.g.workers;
  if (o.n) cfg.base_samples = *o.n;
  if (o.campaign_iters) cfg.iterations = *o.campaign_iters;
  if (o.campaign_fm) cfg.forward_models = {parse_forward_model(*o.campaign_fm)};
  if (o.corpus) cfg.corpus = *o.corpus;
  if (o.second_order) cfg.second_order = true;
  if (o.first_order) cfg.second_order = false;
  return cfg;
}

FmhConfig physical(const CampaignConfig& cfg, const PhysicalFlags& p, std::size_t m) {
  FmhConfig fmh = fmh_from_row(cfg.bounds, anchor_points(cfg.bounds).mid);
  if (p.lambda) fmh.wavelength = *p.lambda;
  if (p.pitch) fmh.pixel_pitch = *p.pitch;
  if (p.d) fmh.distance = *p.d;
  fmh.slm_resolution = m;
  fmh.validate();
  return fmh;
}

// Loads the target and brings it to M x M.
Image square_target(const PhysicalFlags& p, std::size_t& m) {
  Image img = load_grayscale(p.target);
  if (m == 0) {
    require(img.width() == img.height(), ErrorKind::SizeMismatch,
            "target is not square; pass --m to resample");
    m = img.width();
  }
  if (img.width() != m || img.height() != m) img = resize_bilinear(img, m);
  return img;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorKind::Io, "cannot write " + path.string());
  f << text;
}

const std::vector<std::string> kMetrics{"psnr", "ssim", "accuracy"};

// ---- subcommands ---------------------------------------------------------

void run_propagate(const Options& o, RunRecorder& rec, std::ostream& out) {
  const CampaignConfig cfg = build_config(o);
  std::size_t m = o.phys.m;
  rec.input(o.phys.target);
  const Image target = square_target(o.phys, m);
  const FmhConfig fmh = physical(cfg, o.phys, m);
  const ForwardModel fm = parse_forward_model(o.phys.fm);
  Json snap = config_snapshot(cfg);
  snap["fm"] = std::string(to_string(fm));
  snap["fmh"] = {{"lambda_m", fmh.wavelength}, {"pitch_m", fmh.pixel_pitch},
                 {"M", fmh.slm_resolution}, {"d_m", fmh.distance}};
  snap["direction"] = o.inverse ? "inverse" : "forward";
  snap["phase"] = o.zero_phase ? "zero" : "random";
  rec.config(snap, cfg.master_seed);

  const std::vector<double> phase =
      o.zero_phase ? std::vector<double>(m * m, 0.0) : random_phase(m, cfg.master_seed);
  const ComplexField field = field_from_target(target, fmh.pixel_pitch, phase);
  const Propagator psi(fm, fmh);
  const ComplexField result =
      rec.timed("propagate", [&] { return o.inverse ? psi.inverse(field) : psi.forward(field); });

  Grid intensity = result.intensity();
  double peak = 0.0;
  for (double v : intensity.data) peak = std::max(peak, v);
  if (peak > 0.0)
    for (double& v : intensity.data) v /= peak;
  save_grayscale(to_image_clamped(intensity), rec.output("intensity.pgm"));
  out << "energy_in " << fmt17(field.energy()) << "\nenergy_out " << fmt17(result.energy())
      << "\npeak_intensity " << fmt17(peak) << '\n';
}

void run_gs(const Options& o, RunRecorder& rec, std::ostream& out) {
  const CampaignConfig cfg = build_config(o);
  std::size_t m = o.phys.m;
  rec.input(o.phys.target);
  const Image target = square_target(o.phys, m);

  GsConfig gs;
  gs.forward_model = parse_forward_model(o.phys.fm);
  gs.fmh = physical(cfg, o.phys, m);
  gs.iterations = o.iters;
  gs.seed = cfg.master_seed;
  gs.slm_amplitude = o.amplitude;
  gs.mean_intensity_rescale = o.rescale;
  Json snap = config_snapshot(cfg);
  snap["fm"] = std::string(to_string(gs.forward_model));
  snap["fmh"] = {{"lambda_m", gs.fmh.wavelength}, {"pitch_m", gs.fmh.pixel_pitch},
                 {"M", gs.fmh.slm_resolution}, {"d_m", gs.fmh.distance}};
  snap["gs_iterations"] = gs.iterations;
  snap["slm_amplitude"] = gs.slm_amplitude;
  snap["mean_intensity_rescale"] = gs.mean_intensity_rescale;
  rec.config(snap, cfg.master_seed);

  const GsTrace trace = rec.timed("gs", [&] { return gs_run(target, gs); });

  std::ostringstream csv;
  csv << "iteration,psnr_db,ssim,accuracy,amplitude_error\n";
  for (const auto& r : trace.records) {
    csv << r.iteration << ',' << fmt17(r.metrics.psnr) << ',' << fmt17(r.metrics.ssim) << ','
        << fmt17(r.metrics.accuracy) << ',' << fmt17(r.amplitude_error) << '\n';
  }
  write_text(rec.output("trace.csv"), csv.str());
  save_grayscale(trace.final_reconstruction, rec.output("reconstruction.pgm"));

  std::vector<double> phase01(trace.final_slm_phase.size());
  for (std::size_t p = 0; p < phase01.size(); ++p)
    phase01[p] = std::clamp((trace.final_slm_phase[p] + std::numbers::pi) / (2 * std::numbers::pi),
                            0.0, 1.0);
  save_grayscale(Image(m, m, std::move(phase01)), rec.output("slm_phase.pgm"));

  const auto& last = trace.records.back().metrics;
  out << "iteration " << trace.records.back().iteration << " psnr_db " << fmt17(last.psnr)
      << " ssim " << fmt17(last.ssim) << " accuracy " << fmt17(last.accuracy) << '\n';
}

void run_sample(const Options& o, RunRecorder& rec, std::ostream& out) {
  const CampaignConfig cfg = build_config(o);
  FmhBounds bounds = cfg.bounds;
  if (o.k > 0) {
    bounds.parameters.clear();
    for (std::size_t i = 0; i < o.k; ++i)
      bounds.parameters.push_back({"x" + std::to_string(i + 1), 0.0, 1.0, false});
  }
  Json snap = config_snapshot(cfg);
  snap["k"] = bounds.size();
  rec.config(snap, cfg.master_seed);
  const SaltelliDesign design = rec.timed(
      "design", [&] { return saltelli_design(bounds, cfg.base_samples, cfg.second_order); });
  std::ostringstream csv;
  write_design_csv(csv, design);
  write_text(rec.output("design.csv"), csv.str());
  out << "rows " << design.row_count() << '\n';
}

void run_sa(const Options& o, RunRecorder& rec, std::ostream& out, const fs::path& out_dir) {
  CampaignConfig cfg = build_config(o);
  rec.config(config_snapshot(cfg), cfg.master_seed);
  const std::vector<ForwardModel> models = cfg.forward_models;
  for (ForwardModel fm : models) {
    cfg.forward_models = {fm};
    const std::string prefix = models.size() > 1 ? std::string(to_string(fm)) + "/" : "";
    const fs::path dir = out_dir / prefix;
    CampaignOptions options;
    options.output_dir = dir;
    const CampaignResult result = rec.timed("campaign_" + std::string(to_string(fm)),
                                            [&] { return run_fmh_campaign(cfg, options); });
    rec.output(prefix + "results.csv");
    if (fm == models.front()) rec.inputs_from_corpus(result.provenance, cfg.corpus);
    write_text(rec.output(prefix + "manifest.json"), campaign_manifest_json(cfg, result) + "\n");

    rec.timed("indices_" + std::string(to_string(fm)), [&] {
      for (std::size_t it : result.iterations) {
        for (const auto& metric : kMetrics) {
          const SobolIndices idx = sobol_indices(result.design, result.column(metric, it),
                                                 cfg.bootstrap_resamples, cfg.master_seed);
          const std::string stem = prefix + "indices_" + metric + "_it" + std::to_string(it);
          std::ostringstream csv, json;
          write_indices_csv(csv, idx);
          write_indices_json(json, idx, metric, it);
          write_text(rec.output(stem + ".csv"), csv.str());
          write_text(rec.output(stem + ".json"), json.str());
          if (metric == "psnr" && it == result.iterations.back()) {
            std::size_t top = 0;
            for (std::size_t i = 1; i < idx.names.size(); ++i)
              if (idx.total[i].value > idx.total[top].value) top = i;
            out << to_string(fm) << " iteration " << it << " top ST for psnr: " << idx.names[top]
                << " (" << fmt17(idx.total[top].value) << ")\n";
          }
        }
      }
    });
  }
}

void run_compare_fm(const Options& o, RunRecorder& rec, std::ostream& out) {
  const CampaignConfig cfg = build_config(o);
  rec.config(config_snapshot(cfg), cfg.master_seed);
  const FmComparisonResult result = rec.timed("comparison", [&] { return run_fm_comparison(cfg); });
  rec.inputs_from_corpus(result.provenance, cfg.corpus);
  std::ostringstream data, report;
  write_fm_comparison_csv(data, result);
  const auto rows = fm_comparison_report(result, o.metric);
  write_fm_report_csv(report, rows);
  write_text(rec.output("fm_comparison.csv"), data.str());
  write_text(rec.output("fm_report.csv"), report.str());
  for (const auto& r : rows) {
    out << "iteration " << r.iteration << " median_fourier " << fmt17(r.median_fourier)
        << " median_asm " << fmt17(r.median_asm) << " wilcoxon_p "
        << fmt17(r.wilcoxon_fourier_greater.p_value) << " spearman_M_fourier "
        << fmt17(r.spearman_m_fourier.statistic) << " p " << fmt17(r.spearman_m_fourier.p_value)
        << '\n';
  }
}

ResultsTable read_table(const std::string& path, RunRecorder& rec) {
  rec.input(path);
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path);
  return read_results_csv(in);
}

std::vector<double> table_column(const ResultsTable& t, const std::string& metric,
                                 std::size_t iteration) {
  const auto pos = std::find(t.iterations.begin(), t.iterations.end(), iteration);
  require(pos != t.iterations.end(), ErrorKind::InvalidArgument,
          "iteration " + std::to_string(iteration) + " not present in results");
  const auto slot = static_cast<std::size_t>(pos - t.iterations.begin());
  std::vector<double> v;
  for (const auto& row : t.rows) v.push_back(metric_value(row.per_iteration[slot], metric));
  return v;
}

double mean_of(const std::vector<double>& v) {
  require(!v.empty(), ErrorKind::DegenerateInput, "results file has no rows");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void run_metric(const Options& o, RunRecorder& rec, std::ostream& out) {
  const CompositeWeights w{o.alpha, o.beta, o.gamma};
  w.validate();
  Json snap;
  snap["metric"] = o.metric;
  snap["weights"] = {o.alpha, o.beta, o.gamma};
  snap["normalization"] = "min-max per campaign per metric (gs-weighted term only)";

  const ResultsTable method = read_table(o.method_csv, rec);
  const std::size_t iteration = o.iteration.value_or(method.iterations.back());
  snap["iteration"] = iteration;
  Json result;

  double gsw = 0.0, gm = 0.0, res = 0.0;
  if (!o.baseline_csv.empty()) {
    const ResultsTable baseline = read_table(o.baseline_csv, rec);
    const auto p = minmax_normalize(table_column(method, o.metric, iteration));
    const auto b = minmax_normalize(table_column(baseline, o.metric, iteration));
    gsw = gs_weighted_metric(p, b);
    result["gs_weighted"] = gsw;
  } else {
    require(w.alpha == 0.0, ErrorKind::InvalidArgument, "alpha > 0 needs --baseline");
  }

  const bool have_anchors = !o.inner_csv.empty() && !o.mid_csv.empty() && !o.outer_csv.empty();
  double mid_score = 0.0;
  if (have_anchors) {
    const double inner = mean_of(table_column(read_table(o.inner_csv, rec), o.metric, iteration));
    mid_score = mean_of(table_column(read_table(o.mid_csv, rec), o.metric, iteration));
    const double outer = mean_of(table_column(read_table(o.outer_csv, rec), o.metric, iteration));
    gm = generalization_metric(inner, mid_score, outer);
    result["generalization"] = gm;
  } else {
    require(w.beta == 0.0 && w.gamma == 0.0, ErrorKind::InvalidArgument,
            "beta or gamma > 0 needs --inner, --mid and --outer");
  }
  if (!o.neighborhood_csv.empty()) {
    require(have_anchors, ErrorKind::InvalidArgument, "--neighborhood needs the anchor files");
    const auto perturbed =
        table_column(read_table(o.neighborhood_csv, rec), o.metric, iteration);
    res = resilience_metric(mid_score, perturbed);
    result["resilience"] = res;
  } else {
    require(w.gamma == 0.0, ErrorKind::InvalidArgument, "gamma > 0 needs --neighborhood");
  }

  result["composite"] = composite_metric(w, gsw, gm, res);
  rec.config(snap, 0);
  Json doc;
  doc["config"] = snap;
  doc["result"] = result;
  write_text(rec.output("metric.json"), doc.dump(2) + "\n");
  out << "composite " << fmt17(result["composite"].get<double>()) << '\n';
}

void run_report(const Options& o, RunRecorder& rec, std::ostream& out) {
  Json snap;
  snap["inputs"] = o.inputs;
  rec.config(snap, 0);
  std::ostringstream csv;
  csv << "source,row,lambda_m,pitch_m,M,d_m,iteration,metric,value\n";
  std::size_t lines = 0;
  for (const auto& path : o.inputs) {
    const ResultsTable t = read_table(path, rec);
    const std::string source = fs::path(path).parent_path().filename().string() + "/" +
                               fs::path(path).filename().string();
    for (const auto& row : t.rows) {
      for (std::size_t s = 0; s < t.iterations.size(); ++s) {
        for (const auto& metric : kMetrics) {
          csv << source << ',' << row.row << ',' << fmt17(row.fmh.wavelength) << ','
              << fmt17(row.fmh.pixel_pitch) << ',' << row.fmh.slm_resolution << ','
              << fmt17(row.fmh.distance) << ',' << t.iterations[s] << ',' << metric << ','
              << fmt17(metric_value(row.per_iteration[s], metric)) << '\n';
          ++lines;
        }
      }
    }
  }
  write_text(rec.output("report_long.csv"), csv.str());
  out << "lines " << lines << '\n';
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"holosens: CGH forward-model sensitivity toolkit", "holosens"};
  app.set_version_flag("--version", HOLOSENS_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--config", o.g.config, "config file (key = value or JSON)");
  app.add_option("--seed", o.g.seed, "master seed");
  app.add_option("--workers", o.g.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", o.g.out, "output directory")->capture_default_str();

  auto* propagate = app.add_subcommand("propagate", "propagate one field, write intensity PGM");
  add_physical(propagate, o.phys);
  propagate->add_flag("--inverse", o.inverse, "target plane to SLM plane");
  propagate->add_flag("--zero-phase", o.zero_phase, "flat phase instead of seeded random");

  auto* gs = app.add_subcommand("gs", "single GS run, write trace CSV and reconstruction");
  add_physical(gs, o.phys);
  gs->add_option("--iters", o.iters, "GS iterations")->capture_default_str();
  gs->add_option("--amplitude", o.amplitude, "uniform SLM amplitude")->capture_default_str();
  gs->add_flag("--rescale", o.rescale, "rescale reconstruction to target mean before scoring");

  auto* sample = app.add_subcommand("sample", "emit a Saltelli design CSV");
  sample->add_option("--k", o.k, "unit-hypercube dimensions (default: config bounds)");
  sample->add_option("--n", o.n, "base samples N");
  sample->add_flag("--second-order", o.second_order, "include BA blocks");
  sample->add_flag("--first-order", o.first_order, "omit BA blocks");

  auto* sa = app.add_subcommand("sa", "FMH campaign and Sobol index report");
  sa->add_option("--n", o.n, "base samples N");
  sa->add_option("--iters", o.campaign_iters, "GS iterations");
  sa->add_option("--fm", o.campaign_fm, "forward model");
  sa->add_option("--corpus", o.corpus, "corpus directory");
  sa->add_flag("--first-order", o.first_order, "omit second-order indices");

  auto* compare = app.add_subcommand("compare-fm", "paired Fourier vs ASM run over sampled M");
  compare->add_option("--n", o.n, "number of sampled M values");
  compare->add_option("--iters", o.campaign_iters, "GS iterations");
  compare->add_option("--corpus", o.corpus, "corpus directory");
  compare->add_option("--metric", o.metric, "psnr | ssim | accuracy")->capture_default_str();

  auto* metric = app.add_subcommand("metric", "composite benchmarking metric from result CSVs");
  metric->add_option("--method", o.method_csv, "results CSV of the evaluated method")->required();
  metric->add_option("--baseline", o.baseline_csv, "results CSV of the GS baseline");
  metric->add_option("--inner", o.inner_csv, "results CSV at h_inner");
  metric->add_option("--mid", o.mid_csv, "results CSV at h_mid");
  metric->add_option("--outer", o.outer_csv, "results CSV at h_outer");
  metric->add_option("--neighborhood", o.neighborhood_csv, "results CSV of perturbations");
  metric->add_option("--metric", o.metric, "psnr | ssim | accuracy")->capture_default_str();
  metric->add_option("--iteration", o.iteration, "iteration (default: last recorded)");
  metric->add_option("--alpha", o.alpha, "weight of the GS-weighted term");
  metric->add_option("--beta", o.beta, "weight of the generalization term");
  metric->add_option("--gamma", o.gamma, "weight of the resilience term");

  auto* report = app.add_subcommand("report", "merge result CSVs into long format");
  report->add_option("inputs", o.inputs, "results CSV files")->required();

  // Name the offending word rather than CLI11's generic complaint.
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].rfind("-", 0) == 0) {
      if (args[i].find('=') == std::string::npos && args[i] != "--help" && args[i] != "-h" &&
          args[i] != "--version")
        ++i;
      continue;
    }
    if (app.get_subcommand_no_throw(args[i]) == nullptr) {
      err << "error: unknown subcommand '" << args[i] << "'\n\n" << app.help();
      return kExitUsage;
    }
    break;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << HOLOSENS_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    const fs::path out_dir = o.g.out;
    fs::create_directories(out_dir);
    RunRecorder rec(name, out_dir, args);
    if (!o.g.config.empty()) rec.input(o.g.config);
    if (name == "propagate") run_propagate(o, rec, out);
    else if (name == "gs") run_gs(o, rec, out);
    else if (name == "sample") run_sample(o, rec, out);
    else if (name == "sa") run_sa(o, rec, out, out_dir);
    else if (name == "compare-fm") run_compare_fm(o, rec, out);
    else if (name == "metric") run_metric(o, rec, out);
    else if (name == "report") run_report(o, rec, out);
    rec.finish();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace holosens::cli

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "holosens/field.hpp"
#include "holosens/metrics.hpp"
#include "holosens/propagation.hpp"
#include "holosens/sensitivity.hpp"
#include "holosens/stats.hpp"

namespace holosens {

std::string_view to_string(ForwardModel fm) noexcept;
ForwardModel parse_forward_model(std::string_view text);

/// FNV-1a 64-bit, used for provenance stamps (design, corpus files).
std::uint64_t fnv1a64(std::span<const unsigned char> bytes) noexcept;
std::uint64_t fnv1a64(std::string_view text) noexcept;
std::string hex64(std::uint64_t value);
std::uint64_t hash_file(const std::filesystem::path& path);

struct CorpusEntry {
  std::filesystem::path path;
  std::uint64_t content_hash = 0;
  Image image = Image::constant(1, 1, 0.0);
};

/// All *.pgm files of a directory in filename order, at most limit of them.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir, std::size_t limit);

struct CampaignConfig {
  FmhBounds bounds = paper_fmh_bounds();
  std::size_t base_samples = 64;
  bool second_order = true;
  std::vector<ForwardModel> forward_models{ForwardModel::Asm};
  std::size_t iterations = 30;
  /// 1-based GS iterations persisted; empty means every iteration.
  std::vector<std::size_t> record_iterations;
  std::filesystem::path corpus;
  std::size_t image_limit = 10;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  std::size_t bootstrap_resamples = kDefaultBootstrapResamples;

  void validate() const;
  std::vector<std::size_t> recorded_iterations() const;
};

/// Maps a bounds row onto FMH fields by parameter name (lambda, pitch, M, d).
/// Parameters absent from the bounds take the value in fallback.
FmhConfig fmh_from_row(const FmhBounds& bounds, std::span<const double> row,
                       const FmhConfig& fallback = {});

struct Provenance {
  std::uint64_t master_seed = 0;
  std::uint64_t design_hash = 0;
  std::vector<std::pair<std::string, std::uint64_t>> corpus;
};

/// One design row's metrics, averaged over the corpus at each recorded
/// iteration (arithmetic mean of per-image values).
struct RowMetrics {
  std::size_t row = 0;
  FmhConfig fmh;
  std::vector<MetricRecord> per_iteration;
};

struct CampaignResult {
  SaltelliDesign design;
  ForwardModel forward_model = ForwardModel::Asm;
  std::vector<std::size_t> iterations;
  std::vector<RowMetrics> rows;
  Provenance provenance;

  /// y vector for sobol_indices: one metric at one recorded iteration.
  std::vector<double> column(std::string_view metric, std::size_t iteration) const;
};

double metric_value(const MetricRecord& record, std::string_view metric);

/// Evaluates task(0..count-1) on a bounded pool of workers. Calls must be
/// independent; results come back in index order. The optional on_done(i, v)
/// runs serialized, in completion order.
template <typename T, typename Task, typename OnDone>
std::vector<T> parallel_map(std::size_t count, std::size_t workers, Task&& task,
                            OnDone&& on_done);
template <typename T, typename Task>
std::vector<T> parallel_map(std::size_t count, std::size_t workers, Task&& task);

struct CampaignOptions {
  /// When set, results stream into <dir>/results.csv in row order and an
  /// interrupted run resumes from the last complete row.
  std::optional<std::filesystem::path> output_dir;
};

/// GS over every Saltelli design row and every corpus image. Seeds derive
/// from (master_seed, row, image) only, so results do not depend on worker
/// count or scheduling.
CampaignResult run_fmh_campaign(const CampaignConfig& cfg, const CampaignOptions& options = {});

inline constexpr std::string_view kResultsHeader =
    "row,block,lambda_m,pitch_m,M,d_m,iteration,mean_psnr_db,mean_ssim,mean_accuracy";

void write_results_csv(std::ostream& out, const CampaignResult& result);
/// Appends one row's lines (no header).
void write_result_rows(std::ostream& out, const SaltelliDesign& design, const RowMetrics& row,
                       std::span<const std::size_t> iterations);

/// Parsed results CSV (rows grouped by row index, iterations ascending).
struct ResultsTable {
  std::vector<std::size_t> iterations;
  std::vector<RowMetrics> rows;
};
ResultsTable read_results_csv(std::istream& in);

/// Manifest JSON: config snapshot, seeds, design hash, corpus hashes.
std::string campaign_manifest_json(const CampaignConfig& cfg, const CampaignResult& result);

void write_indices_json(std::ostream& out, const SobolIndices& indices, std::string_view metric,
                        std::size_t iteration);

// ---- Anchor points -------------------------------------------------------

struct AnchorPoints {
  std::vector<double> inner;
  std::vector<double> mid;
  std::vector<double> outer;
};

/// mid = mean(lower, upper); inner = mean(lower, mid); outer = mean(mid, upper).
/// Integer parameters are rounded after averaging.
AnchorPoints anchor_points(const FmhBounds& bounds);

// ---- Forward-model comparison --------------------------------------------

struct FmComparisonResult {
  std::vector<std::size_t> resolutions;
  std::vector<std::size_t> iterations;
  FmhConfig frozen;  // lambda, pitch and d at h_mid; M varies
  /// [sample][iteration index]
  std::vector<std::vector<MetricRecord>> fourier;
  std::vector<std::vector<MetricRecord>> asm_model;
  Provenance provenance;

  std::vector<double> column(ForwardModel fm, std::string_view metric,
                             std::size_t iteration) const;
};

/// n Sobol samples of M within the bounds' M range; lambda, pitch and d fixed
/// at h_mid. GS runs under both models with identical seeds per (sample, image).
FmComparisonResult run_fm_comparison(const CampaignConfig& cfg);

void write_fm_comparison_csv(std::ostream& out, const FmComparisonResult& result);

struct FmIterationReport {
  std::size_t iteration = 0;
  double median_fourier = 0.0;
  double median_asm = 0.0;
  TestResult wilcoxon_fourier_greater;
  TestResult spearman_m_fourier;
  TestResult spearman_m_asm;
  TestResult pearson_m_fourier;
  TestResult pearson_m_asm;
  TestResult pearson_fourier_asm;
  TestResult spearman_fourier_asm;
};

std::vector<FmIterationReport> fm_comparison_report(const FmComparisonResult& result,
                                                    std::string_view metric = "psnr");
void write_fm_report_csv(std::ostream& out, const std::vector<FmIterationReport>& report);

// ---- Benchmarking metrics ------------------------------------------------

inline constexpr double kBaselineFloor = 1e-6;

/// mean_i P_i / max(GS_i, floor).
double gs_weighted_metric(std::span<const double> scores, std::span<const double> baseline,
                          double floor = kBaselineFloor);

/// Mean of the three anchor scores.
double generalization_metric(double inner, double mid, double outer);

/// 1 - mean_i (P_i - P_ref)^2 / P_ref. Not clipped.
double resilience_metric(double reference, std::span<const double> perturbed);

/// Sobol-sampled perturbations of center within +-sigma_fraction of each
/// parameter's range, clipped to the bounds. Row-major n x k.
std::vector<double> resilience_neighborhood(const FmhBounds& bounds,
                                            std::span<const double> center,
                                            double sigma_fraction = 0.05, std::size_t n = 32);

struct CompositeWeights {
  double alpha = 1.0 / 3.0;
  double beta = 1.0 / 3.0;
  double gamma = 1.0 / 3.0;

  void validate() const;
};

double composite_metric(const CompositeWeights& weights, double gs_weighted,
                        double generalization, double resilience);

struct CorrelationPair {
  TestResult pearson;
  TestResult spearman;
};

/// Pearson and Spearman between two methods' scores over identical configs.
CorrelationPair complexity_correlation(std::span<const double> scores_a,
                                       std::span<const double> scores_b);

}  // namespace holosens

#include "holosens/detail/parallel.hpp"

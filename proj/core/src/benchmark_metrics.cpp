#include <algorithm>
#include <cmath>

#include "holosens/error.hpp"
#include "holosens/experiment.hpp"

namespace holosens {

double gs_weighted_metric(std::span<const double> scores, std::span<const double> baseline,
                          double floor) {
  require(scores.size() == baseline.size(), ErrorKind::SizeMismatch,
          "scores and baseline differ in length");
  require(!scores.empty(), ErrorKind::InvalidArgument, "no scores");
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    require(std::isfinite(baseline[i]) && baseline[i] >= 0.0, ErrorKind::InvalidArgument,
            "baseline scores must be normalized (non-negative)");
    const double gs = std::max(baseline[i], floor);
    require(gs > 0.0, ErrorKind::DegenerateInput, "zero baseline score");
    sum += scores[i] / gs;
  }
  return sum / static_cast<double>(scores.size());
}

double generalization_metric(double inner, double mid, double outer) {
  return (inner + mid + outer) / 3.0;
}

double resilience_metric(double reference, std::span<const double> perturbed) {
  require(reference > 0.0, ErrorKind::DegenerateInput, "reference score must be positive");
  require(!perturbed.empty(), ErrorKind::InvalidArgument, "no perturbed scores");
  double sum = 0.0;
  for (double p : perturbed) sum += (p - reference) * (p - reference) / reference;
  return 1.0 - sum / static_cast<double>(perturbed.size());
}

std::vector<double> resilience_neighborhood(const FmhBounds& bounds,
                                            std::span<const double> center,
                                            double sigma_fraction, std::size_t n) {
  bounds.validate();
  const std::size_t k = bounds.size();
  require(center.size() == k, ErrorKind::SizeMismatch, "center has wrong dimension");
  require(sigma_fraction > 0.0, ErrorKind::InvalidArgument, "sigma must be positive");
  const std::vector<double> unit = sobol_points(k, n);
  std::vector<double> out(n * k);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      const ParameterBound& p = bounds.parameters[c];
      const double sigma = sigma_fraction * (p.upper - p.lower);
      double v = center[c] + (2.0 * unit[r * k + c] - 1.0) * sigma;
      v = std::clamp(v, p.lower, p.upper);
      out[r * k + c] = p.integer ? std::round(v) : v;
    }
  }
  return out;
}

void CompositeWeights::validate() const {
  require(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0, ErrorKind::InvalidArgument,
          "composite weights must be non-negative");
  require(alpha + beta + gamma > 0.0, ErrorKind::InvalidArgument,
          "composite weights must not all be zero");
}

double composite_metric(const CompositeWeights& weights, double gs_weighted,
                        double generalization, double resilience) {
  weights.validate();
  return weights.alpha * gs_weighted + weights.beta * generalization + weights.gamma * resilience;
}

CorrelationPair complexity_correlation(std::span<const double> scores_a,
                                       std::span<const double> scores_b) {
  return CorrelationPair{pearson(scores_a, scores_b), spearman(scores_a, scores_b)};
}

}  // namespace holosens

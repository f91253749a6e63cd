#pragma once

#include <span>
#include <vector>

#include "holosens/field.hpp"

namespace holosens {

/// Default MSE floor; caps PSNR at 120 dB.
inline constexpr double kPsnrEpsilon = 1e-12;

struct MetricRecord {
  double psnr = 0.0;
  double ssim = 0.0;
  double accuracy = 0.0;

  bool operator==(const MetricRecord&) const = default;
};

/// 10 log10(1 / (MSE + eps)) with unit dynamic range.
double psnr(const Grid& recon, const Grid& target, double eps = kPsnrEpsilon);

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

/// Mean SSIM over all fully contained windows (no padding) of a normalized
/// Gaussian window. Both sides must be at least window x window.
double ssim(const Grid& recon, const Grid& target, const SsimParams& params = {});

/// Normalized cross-correlation sum(a b) / sqrt(sum a^2 sum b^2).
double accuracy(const Grid& recon, const Grid& target);

MetricRecord evaluate(const Grid& recon, const Grid& target);

/// (x - min) / (max - min); a constant sequence maps to 0.5 everywhere.
std::vector<double> minmax_normalize(std::span<const double> scores);

}  // namespace holosens

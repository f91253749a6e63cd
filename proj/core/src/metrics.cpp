#include "holosens/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "holosens/error.hpp"

namespace holosens {

namespace {

void check_same_shape(const Grid& a, const Grid& b) {
  require(a.width == b.width && a.height == b.height && a.data.size() == b.data.size(),
          ErrorKind::SizeMismatch, "metric inputs differ in size");
  require(!a.data.empty(), ErrorKind::InvalidArgument, "metric inputs are empty");
}

std::vector<double> gaussian_window(int size, double sigma) {
  std::vector<double> w(static_cast<std::size_t>(size));
  const double center = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double x = i - center;
    w[static_cast<std::size_t>(i)] = std::exp(-(x * x) / (2.0 * sigma * sigma));
    sum += w[static_cast<std::size_t>(i)];
  }
  for (double& v : w) v /= sum;
  return w;
}

// "Valid" separable correlation: output is (h-k+1) x (w-k+1).
std::vector<double> filter_valid(const std::vector<double>& in, std::size_t w, std::size_t h,
                                 const std::vector<double>& k) {
  const std::size_t n = k.size();
  const std::size_t ow = w - n + 1;
  const std::size_t oh = h - n + 1;
  std::vector<double> rows(h * ow);
  for (std::size_t r = 0; r < h; ++r) {
    const double* src = &in[r * w];
    for (std::size_t c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (std::size_t t = 0; t < n; ++t) acc += k[t] * src[c + t];
      rows[r * ow + c] = acc;
    }
  }
  std::vector<double> out(oh * ow);
  for (std::size_t r = 0; r < oh; ++r) {
    for (std::size_t c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (std::size_t t = 0; t < n; ++t) acc += k[t] * rows[(r + t) * ow + c];
      out[r * ow + c] = acc;
    }
  }
  return out;
}

}  // namespace

double psnr(const Grid& recon, const Grid& target, double eps) {
  check_same_shape(recon, target);
  require(eps > 0.0, ErrorKind::InvalidArgument, "epsilon must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < recon.data.size(); ++i) {
    const double d = recon.data[i] - target.data[i];
    sum += d * d;
  }
  const double mse = sum / static_cast<double>(recon.data.size());
  return 10.0 * std::log10(1.0 / (mse + eps));
}

double ssim(const Grid& recon, const Grid& target, const SsimParams& params) {
  check_same_shape(recon, target);
  const auto win = static_cast<std::size_t>(params.window);
  require(params.window >= 1 && recon.width >= win && recon.height >= win,
          ErrorKind::InvalidArgument, "image smaller than the SSIM window");

  const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
  const double c2 = std::pow(params.k2 * params.dynamic_range, 2);
  const std::vector<double> k = gaussian_window(params.window, params.sigma);

  const std::size_t w = recon.width, h = recon.height, n = recon.data.size();
  std::vector<double> xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = recon.data[i], y = target.data[i];
    xx[i] = x * x;
    yy[i] = y * y;
    xy[i] = x * y;
  }
  const auto mu_x = filter_valid(recon.data, w, h, k);
  const auto mu_y = filter_valid(target.data, w, h, k);
  const auto e_xx = filter_valid(xx, w, h, k);
  const auto e_yy = filter_valid(yy, w, h, k);
  const auto e_xy = filter_valid(xy, w, h, k);

  double total = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double mx = mu_x[i], my = mu_y[i];
    const double vx = e_xx[i] - mx * mx;
    const double vy = e_yy[i] - my * my;
    const double cov = e_xy[i] - mx * my;
    total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
             ((mx * mx + my * my + c1) * (vx + vy + c2));
  }
  return total / static_cast<double>(mu_x.size());
}

double accuracy(const Grid& recon, const Grid& target) {
  check_same_shape(recon, target);
  double cross = 0.0, rr = 0.0, tt = 0.0;
  for (std::size_t i = 0; i < recon.data.size(); ++i) {
    cross += recon.data[i] * target.data[i];
    rr += recon.data[i] * recon.data[i];
    tt += target.data[i] * target.data[i];
  }
  require(rr > 0.0 && tt > 0.0, ErrorKind::DegenerateInput,
          "accuracy undefined for an all-zero image");
  return cross / std::sqrt(rr * tt);
}

MetricRecord evaluate(const Grid& recon, const Grid& target) {
  return MetricRecord{psnr(recon, target), ssim(recon, target), accuracy(recon, target)};
}

std::vector<double> minmax_normalize(std::span<const double> scores) {
  require(!scores.empty(), ErrorKind::InvalidArgument, "cannot normalize an empty sequence");
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  const double min = *lo, max = *hi;
  std::vector<double> out(scores.size(), 0.5);
  if (max == min) return out;
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = (scores[i] - min) / (max - min);
  return out;
}

}  // namespace holosens

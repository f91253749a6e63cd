#include "holosens/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>
#include <string>

#include "holosens/error.hpp"

namespace holosens {

std::string_view to_string(Alternative alt) noexcept {
  switch (alt) {
    case Alternative::TwoSided: return "two-sided";
    case Alternative::Less: return "less";
    case Alternative::Greater: return "greater";
  }
  return "two-sided";
}

Alternative parse_alternative(std::string_view text) {
  if (text == "two-sided") return Alternative::TwoSided;
  if (text == "less") return Alternative::Less;
  if (text == "greater") return Alternative::Greater;
  throw Error(ErrorKind::InvalidArgument, "unknown alternative '" + std::string(text) + "'");
}

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

namespace {

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

TestResult pearson(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorKind::SizeMismatch, "correlation inputs differ in length");
  const std::size_t n = x.size();
  require(n >= 3, ErrorKind::InvalidArgument, "correlation needs n >= 3");
  const double nd = static_cast<double>(n);
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / nd;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / nd;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  require(sxx > 0.0 && syy > 0.0, ErrorKind::DegenerateInput,
          "correlation undefined for zero variance");
  const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);

  TestResult out{r, 0.0, n, Alternative::TwoSided, false};
  if (std::abs(r) < 1.0) {
    const double dof = nd - 2.0;
    const double t = r * std::sqrt(dof / ((1.0 - r) * (1.0 + r)));
    const boost::math::students_t dist(dof);
    out.p_value = std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))),
                             0.0, 1.0);
  }
  return out;
}

TestResult spearman(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorKind::SizeMismatch, "correlation inputs differ in length");
  const std::vector<double> rx = midranks(x);
  const std::vector<double> ry = midranks(y);
  return pearson(rx, ry);
}

TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                Alternative alternative) {
  require(x.size() == y.size(), ErrorKind::SizeMismatch, "paired inputs differ in length");
  std::vector<double> diffs;
  diffs.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    require(std::isfinite(d), ErrorKind::InvalidArgument, "non-finite paired difference");
    if (d != 0.0) diffs.push_back(d);
  }
  require(!diffs.empty(), ErrorKind::DegenerateInput, "all paired differences are zero");

  const std::size_t n = diffs.size();
  std::vector<double> magnitude(n);
  std::transform(diffs.begin(), diffs.end(), magnitude.begin(),
                 [](double d) { return std::abs(d); });
  const std::vector<double> ranks = midranks(magnitude);
  double w = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (diffs[i] > 0.0) w += ranks[i];
  }

  TestResult out{w, 1.0, n, alternative, n <= kWilcoxonExactMaxN};
  if (out.exact) {
    // Null distribution of the doubled statistic (mid-ranks are half-integers).
    std::vector<long> doubled(n);
    long total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      doubled[i] = std::lround(2.0 * ranks[i]);
      total += doubled[i];
    }
    std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
    counts[0] = 1.0;
    long reach = 0;
    for (long r : doubled) {
      for (long s = reach; s >= 0; --s) counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
      reach += r;
    }
    const long observed = std::lround(2.0 * w);
    double le = 0.0, ge = 0.0;
    for (long s = 0; s <= total; ++s) {
      if (s <= observed) le += counts[static_cast<std::size_t>(s)];
      if (s >= observed) ge += counts[static_cast<std::size_t>(s)];
    }
    const double all = std::ldexp(1.0, static_cast<int>(n));
    const double p_less = le / all, p_greater = ge / all;
    switch (alternative) {
      case Alternative::Less: out.p_value = p_less; break;
      case Alternative::Greater: out.p_value = p_greater; break;
      case Alternative::TwoSided: out.p_value = std::min(1.0, 2.0 * std::min(p_less, p_greater)); break;
    }
    return out;
  }

  const double nd = static_cast<double>(n);
  const double mean = nd * (nd + 1.0) / 4.0;
  double tie_term = 0.0;
  {
    std::vector<double> sorted = magnitude;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i + 1);
      tie_term += t * t * t - t;
      i = j + 1;
    }
  }
  const double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term / 48.0;
  const double sd = std::sqrt(var);
  switch (alternative) {
    case Alternative::Greater: out.p_value = normal_sf((w - mean - 0.5) / sd); break;
    case Alternative::Less: out.p_value = normal_cdf((w - mean + 0.5) / sd); break;
    case Alternative::TwoSided:
      out.p_value = std::min(1.0, 2.0 * normal_sf((std::abs(w - mean) - 0.5) / sd));
      break;
  }
  out.p_value = std::clamp(out.p_value, 0.0, 1.0);
  return out;
}

}  // namespace holosens

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace holosens {

enum class Alternative { TwoSided, Less, Greater };

std::string_view to_string(Alternative alt) noexcept;
Alternative parse_alternative(std::string_view text);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  Alternative alternative = Alternative::TwoSided;
  /// Wilcoxon only: exact null distribution rather than normal approximation.
  bool exact = false;
};

/// Mid-ranks (1-based, ties share the average rank).
std::vector<double> midranks(std::span<const double> values);

/// Sample correlation, two-sided p from Student's t with n-2 dof.
TestResult pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of mid-ranks.
TestResult spearman(std::span<const double> x, std::span<const double> y);

/// Above this many nonzero differences the signed-rank test uses the normal
/// approximation (tie and continuity corrected); at or below, exact.
inline constexpr std::size_t kWilcoxonExactMaxN = 25;

/// Signed-rank test on d = x - y. Zero differences are dropped; statistic is
/// the rank sum of positive differences. "greater" tests whether d tends
/// above zero.
TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                Alternative alternative);

}  // namespace holosens

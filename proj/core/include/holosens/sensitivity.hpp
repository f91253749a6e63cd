#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace holosens {

/// Largest dimension covered by the embedded Joe-Kuo direction numbers.
inline constexpr std::size_t kSobolMaxDim = 16;

/// First n points (index 0, the origin, included) of the unscrambled Sobol
/// sequence in dim dimensions, row-major n x dim, Gray-code ordering.
std::vector<double> sobol_points(std::size_t dim, std::size_t n);

/// Incremental Sobol generator; sobol_points is a thin wrapper.
class SobolSequence {
 public:
  explicit SobolSequence(std::size_t dim);

  std::size_t dimension() const noexcept { return dim_; }
  /// Writes the next point into out (size dim) and advances.
  void next(double* out);

  /// Direction numbers v_1..v_32 (scaled to 2^32) for one dimension.
  static std::vector<std::uint32_t> direction_numbers(std::size_t dimension_index);

 private:
  std::size_t dim_;
  std::uint64_t index_ = 0;
  std::vector<std::vector<std::uint32_t>> directions_;
  std::vector<std::uint32_t> state_;
};

struct ParameterBound {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  bool integer = false;
};

struct FmhBounds {
  std::vector<ParameterBound> parameters;

  std::size_t size() const noexcept { return parameters.size(); }
  /// Throws InvalidArgument unless every lower < upper.
  void validate() const;
  /// lower + u (upper - lower), rounded to nearest for integer parameters.
  double scale(std::size_t parameter, double unit) const;
};

/// lambda [200, 1800] nm, pitch [4, 80] um, M [128, 4000], d [0, 1.5] m.
FmhBounds paper_fmh_bounds();

enum class Block { A, AB, BA, B };

struct DesignRow {
  Block block = Block::A;
  /// Column substituted for AB/BA rows (0-based); unused for A and B.
  std::size_t column = 0;
  std::size_t base_index = 0;
};

/// Saltelli cross-sampling layout. Rows are grouped per base sample in the
/// order A, AB_1..AB_k, [BA_1..BA_k,] B.
struct SaltelliDesign {
  std::size_t base_samples = 0;
  std::size_t dimensions = 0;
  bool second_order = false;
  std::vector<DesignRow> rows;
  /// rows.size() x dimensions, unit hypercube.
  std::vector<double> unit;
  /// rows.size() x dimensions, scaled into the bounds.
  std::vector<double> scaled;
  FmhBounds bounds;

  std::size_t row_count() const noexcept { return rows.size(); }
  std::size_t rows_per_base() const noexcept {
    return second_order ? 2 * dimensions + 2 : dimensions + 2;
  }
  double unit_at(std::size_t row, std::size_t col) const { return unit[row * dimensions + col]; }
  double scaled_at(std::size_t row, std::size_t col) const {
    return scaled[row * dimensions + col];
  }
  std::size_t row_index(Block block, std::size_t column, std::size_t base) const;
};

std::string block_label(const DesignRow& row);

/// N rows of a 2k-dimensional Sobol sequence: first k columns form A, the
/// rest B; AB_i / BA_i substitute column i. N must be >= 2.
SaltelliDesign saltelli_design(const FmhBounds& bounds, std::size_t base_samples,
                               bool second_order);

struct IndexEstimate {
  double value = 0.0;
  double conf = 0.0;
};

struct SobolIndices {
  std::vector<std::string> names;
  std::vector<IndexEstimate> first;
  std::vector<IndexEstimate> total;
  /// k x k, upper triangle (i < j) populated when second order.
  std::vector<IndexEstimate> second;
  bool has_second = false;
  double confidence_level = 0.95;

  const IndexEstimate& s2(std::size_t i, std::size_t j) const {
    return second[i * names.size() + j];
  }
};

inline constexpr std::size_t kDefaultBootstrapResamples = 1000;

/// Saltelli (2010) first-order, Jansen total-order and Saltelli second-order
/// estimators, with products taken on outputs centered on the A/B mean.
/// Confidence half-widths are 1.96 x the bootstrap standard
/// deviation over resampled base indices.
SobolIndices sobol_indices(const SaltelliDesign& design, const std::vector<double>& y,
                           std::size_t bootstrap_resamples = kDefaultBootstrapResamples,
                           std::uint64_t seed = 0);

/// block,base_index,<param columns...>
void write_design_csv(std::ostream& out, const SaltelliDesign& design);
/// param,order,S,conf
void write_indices_csv(std::ostream& out, const SobolIndices& indices);

}  // namespace holosens

#include <array>
#include <bit>

#include "holosens/error.hpp"
#include "holosens/sensitivity.hpp"

namespace holosens {

namespace {

constexpr int kBits = 32;

struct PrimitiveEntry {
  std::uint32_t polynomial;  // full polynomial bits, leading and constant term included
  std::array<std::uint32_t, 6> initial;
};

// Joe & Kuo, new-joe-kuo-6.21201, dimensions 2..16. Dimension 1 is the
// van der Corput sequence and has no entry.
constexpr std::array<PrimitiveEntry, kSobolMaxDim - 1> kJoeKuo{{
    {3, {1}},
    {7, {1, 3}},
    {11, {1, 3, 1}},
    {13, {1, 1, 1}},
    {19, {1, 1, 3, 3}},
    {25, {1, 3, 5, 13}},
    {37, {1, 1, 5, 5, 17}},
    {41, {1, 1, 5, 5, 5}},
    {47, {1, 1, 7, 11, 19}},
    {55, {1, 1, 5, 1, 1}},
    {59, {1, 1, 1, 3, 11}},
    {61, {1, 3, 5, 5, 31}},
    {67, {1, 3, 3, 9, 7, 49}},
    {91, {1, 1, 1, 15, 21, 21}},
    {97, {1, 3, 1, 13, 27, 49}},
}};

}  // namespace

std::vector<std::uint32_t> SobolSequence::direction_numbers(std::size_t dimension_index) {
  require(dimension_index < kSobolMaxDim, ErrorKind::InvalidArgument,
          "Sobol dimension exceeds the embedded direction-number table");
  std::vector<std::uint32_t> v(kBits + 1, 0);  // 1-based
  if (dimension_index == 0) {
    for (int k = 1; k <= kBits; ++k) v[k] = std::uint32_t{1} << (kBits - k);
    return v;
  }
  const PrimitiveEntry& e = kJoeKuo[dimension_index - 1];
  const int degree = std::bit_width(e.polynomial) - 1;
  const std::uint32_t inner = (e.polynomial >> 1) & ((std::uint32_t{1} << (degree - 1)) - 1);
  for (int k = 1; k <= degree; ++k) v[k] = e.initial[k - 1] << (kBits - k);
  for (int k = degree + 1; k <= kBits; ++k) {
    std::uint32_t value = v[k - degree] ^ (v[k - degree] >> degree);
    for (int l = 1; l < degree; ++l) {
      if ((inner >> (degree - 1 - l)) & 1U) value ^= v[k - l];
    }
    v[k] = value;
  }
  return v;
}

SobolSequence::SobolSequence(std::size_t dim) : dim_(dim), state_(dim, 0) {
  require(dim >= 1, ErrorKind::InvalidArgument, "Sobol dimension must be >= 1");
  require(dim <= kSobolMaxDim, ErrorKind::InvalidArgument,
          "Sobol dimension exceeds the embedded direction-number table");
  directions_.reserve(dim);
  for (std::size_t d = 0; d < dim; ++d) directions_.push_back(direction_numbers(d));
}

void SobolSequence::next(double* out) {
  if (index_ > 0) {
    // Gray-code step: flip the direction number at the lowest zero bit of index-1.
    const int c = std::countr_one(index_ - 1) + 1;
    require(c <= kBits, ErrorKind::InvalidArgument, "Sobol sequence exhausted");
    for (std::size_t d = 0; d < dim_; ++d) state_[d] ^= directions_[d][c];
  }
  for (std::size_t d = 0; d < dim_; ++d) out[d] = static_cast<double>(state_[d]) * 0x1.0p-32;
  ++index_;
}

std::vector<double> sobol_points(std::size_t dim, std::size_t n) {
  require(n >= 1, ErrorKind::InvalidArgument, "need at least one Sobol point");
  SobolSequence seq(dim);
  std::vector<double> points(n * dim);
  for (std::size_t i = 0; i < n; ++i) seq.next(&points[i * dim]);
  return points;
}

}  // namespace holosens

#pragma once

#include <cstddef>
#include <vector>

#include "holosens/field.hpp"

namespace holosens {

/// Forward-model hyperparameters (lambda, pixel pitch, M, d), SI units.
struct FmhConfig {
  double wavelength = 0.0;
  double pixel_pitch = 0.0;
  std::size_t slm_resolution = 0;
  double distance = 0.0;

  /// Throws InvalidArgument unless lambda > 0, pitch > 0, M >= 2, d >= 0.
  void validate() const;

  bool operator==(const FmhConfig&) const = default;
};

enum class Direction { Forward, Inverse };

/// Sizes up to this use a direct separable DFT instead of FFTW. Small grids
/// are faster that way and the result is reproducible bit-for-bit by a plain
/// summation loop.
inline constexpr std::size_t kDirectDftMaxSize = 16;

/// Orthonormal 2-D DFT: 1/M overall scaling in both directions, DC at index
/// (0,0), negative frequencies in the upper half.
ComplexField unitary_dft2(const ComplexField& field, Direction direction);

/// In-place circular shifts that move index floor(M/2) to 0 and back.
void ifftshift2(std::span<Complex> data, std::size_t size);
void fftshift2(std::span<Complex> data, std::size_t size);

/// Band-limited angular-spectrum transfer function sampled on the DFT grid.
struct TransferFunction {
  std::size_t size = 0;
  std::vector<Complex> values;
};

/// Signed spatial frequency (cycles/m) of DFT index j on an M-point grid.
double dft_frequency(std::size_t index, std::size_t size, double pitch) noexcept;

/// Frequencies with |u| <= u_bl (and |v| <= v_bl) survive the band limit.
double band_limit_frequency(const FmhConfig& fmh) noexcept;

/// exp(i 2 pi w(u,v) sign d) inside the propagating disk and the band limit,
/// zero elsewhere. sign is +1 or -1.
TransferFunction asm_transfer(const FmhConfig& fmh, int sign);

ComplexField propagate_asm(const ComplexField& field, const FmhConfig& fmh, Direction direction);

/// Lens (Fourier) model: centered unitary DFT, global phase factor omitted.
ComplexField propagate_fourier(const ComplexField& field, Direction direction);

enum class ForwardModel { Fourier, Asm };

/// Precomputes whatever a forward model needs for one FMH so that repeated
/// propagations (GS iterations) only pay for the transforms.
class Propagator {
 public:
  Propagator(ForwardModel model, const FmhConfig& fmh);

  ForwardModel model() const noexcept { return model_; }
  const FmhConfig& fmh() const noexcept { return fmh_; }

  /// SLM plane -> target plane.
  ComplexField forward(const ComplexField& field) const;
  /// Target plane -> SLM plane.
  ComplexField inverse(const ComplexField& field) const;

 private:
  ComplexField apply_asm(const ComplexField& field, const TransferFunction& h) const;

  ForwardModel model_;
  FmhConfig fmh_;
  TransferFunction h_forward_;
  TransferFunction h_inverse_;
};

}  // namespace holosens

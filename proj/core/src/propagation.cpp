#include "holosens/propagation.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include "holosens/error.hpp"

namespace holosens {

void FmhConfig::validate() const {
  require(std::isfinite(wavelength) && wavelength > 0.0, ErrorKind::InvalidArgument,
          "wavelength must be positive");
  require(std::isfinite(pixel_pitch) && pixel_pitch > 0.0, ErrorKind::InvalidArgument,
          "pixel pitch must be positive");
  require(slm_resolution >= 2, ErrorKind::InvalidArgument, "SLM resolution must be >= 2");
  require(std::isfinite(distance) && distance >= 0.0, ErrorKind::InvalidArgument,
          "distance must be >= 0");
}

namespace {

// FFTW's planner is not reentrant; execution with new arrays is.
class FftwPlanCache {
 public:
  static FftwPlanCache& instance() {
    static FftwPlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t size, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(size, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const int n = static_cast<int>(size);
    // Scratch arrays only for planning. FFTW_ESTIMATE never touches them and
    // FFTW_UNALIGNED keeps the plan independent of the caller's alignment.
    std::vector<Complex> in(size * size), out(size * size);
    fftw_plan plan = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    require(plan != nullptr, ErrorKind::InvalidArgument, "FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

  FftwPlanCache(const FftwPlanCache&) = delete;
  FftwPlanCache& operator=(const FftwPlanCache&) = delete;

 private:
  FftwPlanCache() = default;
  ~FftwPlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

// out[k] = sum_n in[n] * exp(sign * 2 pi i n k / M), applied to rows then
// columns. Accumulation order is fixed: n ascending from zero.
void direct_dft2(std::span<const Complex> in, std::span<Complex> out, std::size_t m, int sign) {
  std::vector<Complex> twiddle(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(j) /
                         static_cast<double>(m);
    twiddle[j] = Complex(std::cos(angle), std::sin(angle));
  }
  std::vector<Complex> tmp(m * m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = 0; k < m; ++k) {
      Complex acc(0.0, 0.0);
      for (std::size_t n = 0; n < m; ++n) acc += in[r * m + n] * twiddle[(n * k) % m];
      tmp[r * m + k] = acc;
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t k = 0; k < m; ++k) {
      Complex acc(0.0, 0.0);
      for (std::size_t n = 0; n < m; ++n) acc += tmp[n * m + c] * twiddle[(n * k) % m];
      out[k * m + c] = acc;
    }
  }
}

void shift2(std::span<Complex> data, std::size_t m, std::size_t offset) {
  if (offset == 0) return;
  std::vector<Complex> tmp(data.begin(), data.end());
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t rr = (r + offset) % m;
    for (std::size_t c = 0; c < m; ++c) data[rr * m + (c + offset) % m] = tmp[r * m + c];
  }
}

}  // namespace

ComplexField unitary_dft2(const ComplexField& field, Direction direction) {
  const std::size_t m = field.size();
  require(m >= 2, ErrorKind::InvalidArgument, "DFT needs M >= 2");
  const int sign = direction == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
  ComplexField out(m, field.pitch());
  if (m <= kDirectDftMaxSize) {
    direct_dft2(field.data(), out.data(), m, sign);
  } else {
    fftw_plan plan = FftwPlanCache::instance().get(m, sign);
    // FFTW does not write to the input of an out-of-place complex DFT.
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(const_cast<Complex*>(field.data().data())),
                     reinterpret_cast<fftw_complex*>(out.data().data()));
  }
  const double scale = 1.0 / static_cast<double>(m);
  for (Complex& c : out.data()) c *= scale;
  return out;
}

// Moving index floor(M/2) to 0 is a shift by ceil(M/2); the reverse by floor(M/2).
void ifftshift2(std::span<Complex> data, std::size_t size) { shift2(data, size, (size + 1) / 2); }
void fftshift2(std::span<Complex> data, std::size_t size) { shift2(data, size, size / 2); }

double dft_frequency(std::size_t index, std::size_t size, double pitch) noexcept {
  const auto m = static_cast<double>(index <= size / 2 ? static_cast<long long>(index)
                                                       : static_cast<long long>(index) -
                                                             static_cast<long long>(size));
  return m / (static_cast<double>(size) * pitch);
}

double band_limit_frequency(const FmhConfig& fmh) noexcept {
  const double du = 1.0 / (static_cast<double>(fmh.slm_resolution) * fmh.pixel_pitch);
  const double t = 2.0 * fmh.distance * du;
  return 1.0 / (fmh.wavelength * std::sqrt(t * t + 1.0));
}

TransferFunction asm_transfer(const FmhConfig& fmh, int sign) {
  fmh.validate();
  require(sign == 1 || sign == -1, ErrorKind::InvalidArgument, "sign must be +1 or -1");
  const std::size_t m = fmh.slm_resolution;
  const double inv_lambda_sq = 1.0 / (fmh.wavelength * fmh.wavelength);
  const double u_bl = band_limit_frequency(fmh);
  const double signed_d = sign * fmh.distance;

  std::vector<double> freq(m);
  for (std::size_t j = 0; j < m; ++j) freq[j] = dft_frequency(j, m, fmh.pixel_pitch);

  TransferFunction h{m, std::vector<Complex>(m * m)};
  for (std::size_t r = 0; r < m; ++r) {
    const double v = freq[r];
    for (std::size_t c = 0; c < m; ++c) {
      const double u = freq[c];
      const double radial = u * u + v * v;
      if (radial > inv_lambda_sq || std::abs(u) > u_bl || std::abs(v) > u_bl) continue;
      const double w = std::sqrt(inv_lambda_sq - radial);
      // Reduce cycles before scaling by 2 pi; w*d is routinely ~1e6 cycles.
      const double cycles = std::fmod(w * signed_d, 1.0);
      h.values[r * m + c] = std::polar(1.0, 2.0 * std::numbers::pi * cycles);
    }
  }
  return h;
}

namespace {

void check_field_matches(const ComplexField& field, const FmhConfig& fmh) {
  require(field.size() == fmh.slm_resolution, ErrorKind::SizeMismatch,
          "field size does not match SLM resolution");
  require(std::abs(field.pitch() - fmh.pixel_pitch) <= 1e-12 * fmh.pixel_pitch,
          ErrorKind::SizeMismatch, "field pitch does not match pixel pitch");
}

ComplexField multiply_spectrum(const ComplexField& field, const TransferFunction& h) {
  ComplexField spectrum = unitary_dft2(field, Direction::Forward);
  auto data = spectrum.data();
  // Written out: operator* on std::complex routes through the Annex G
  // inf/nan recovery path, which dominates at large M.
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Complex a = data[i], b = h.values[i];
    data[i] = Complex(a.real() * b.real() - a.imag() * b.imag(),
                      a.real() * b.imag() + a.imag() * b.real());
  }
  return unitary_dft2(spectrum, Direction::Inverse);
}

}  // namespace

ComplexField propagate_asm(const ComplexField& field, const FmhConfig& fmh, Direction direction) {
  fmh.validate();
  check_field_matches(field, fmh);
  return multiply_spectrum(field, asm_transfer(fmh, direction == Direction::Forward ? 1 : -1));
}

ComplexField propagate_fourier(const ComplexField& field, Direction direction) {
  const std::size_t m = field.size();
  ComplexField shifted = field;
  ifftshift2(shifted.data(), m);
  ComplexField out = unitary_dft2(shifted, direction);
  fftshift2(out.data(), m);
  return out;
}

Propagator::Propagator(ForwardModel model, const FmhConfig& fmh) : model_(model), fmh_(fmh) {
  if (model_ == ForwardModel::Asm) {
    fmh_.validate();
    h_forward_ = asm_transfer(fmh_, 1);
    h_inverse_ = asm_transfer(fmh_, -1);
  } else {
    require(fmh_.slm_resolution >= 2, ErrorKind::InvalidArgument, "SLM resolution must be >= 2");
  }
}

ComplexField Propagator::apply_asm(const ComplexField& field, const TransferFunction& h) const {
  check_field_matches(field, fmh_);
  return multiply_spectrum(field, h);
}

ComplexField Propagator::forward(const ComplexField& field) const {
  if (model_ == ForwardModel::Fourier) return propagate_fourier(field, Direction::Forward);
  return apply_asm(field, h_forward_);
}

ComplexField Propagator::inverse(const ComplexField& field) const {
  if (model_ == ForwardModel::Fourier) return propagate_fourier(field, Direction::Inverse);
  return apply_asm(field, h_inverse_);
}

}  // namespace holosens

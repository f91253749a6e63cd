#pragma once

// A deliberately plain re-implementation of the GS loop for small grids:
// O(M^3) separable DFT sums, explicit index shifts, explicit transfer function.
// It shares nothing with the library beyond the seeded start phase, and uses
// the same arithmetic order so results can be compared bit-for-bit.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "holosens/phase_retrieval.hpp"

namespace testing_support {

using C = std::complex<double>;

struct StraightLineResult {
  std::vector<double> intensity;
  std::vector<double> slm_phase;
  std::vector<double> errors;
};

inline std::vector<C> dft(const std::vector<C>& in, std::size_t m, int sign) {
  std::vector<C> tw(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    tw[j] = C(std::cos(angle), std::sin(angle));
  }
  std::vector<C> rows(m * m), out(m * m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t k = 0; k < m; ++k) {
      C acc(0.0, 0.0);
      for (std::size_t n = 0; n < m; ++n) acc += in[r * m + n] * tw[(n * k) % m];
      rows[r * m + k] = acc;
    }
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t k = 0; k < m; ++k) {
      C acc(0.0, 0.0);
      for (std::size_t n = 0; n < m; ++n) acc += rows[n * m + c] * tw[(n * k) % m];
      out[k * m + c] = acc;
    }
  const double s = 1.0 / static_cast<double>(m);
  for (C& z : out) z = C(z.real() * s, z.imag() * s);
  return out;
}

inline std::vector<C> roll(const std::vector<C>& in, std::size_t m, std::size_t by) {
  std::vector<C> out(m * m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) out[((r + by) % m) * m + (c + by) % m] = in[r * m + c];
  return out;
}

inline std::vector<C> transfer(const holosens::FmhConfig& f, int sign) {
  const std::size_t m = f.slm_resolution;
  const double inv_l2 = 1.0 / (f.wavelength * f.wavelength);
  const double du = 1.0 / (static_cast<double>(m) * f.pixel_pitch);
  const double t = 2.0 * f.distance * du;
  const double u_bl = 1.0 / (f.wavelength * std::sqrt(t * t + 1.0));
  auto freq = [&](std::size_t j) {
    const double k = j <= m / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(m);
    return k / (static_cast<double>(m) * f.pixel_pitch);
  };
  std::vector<C> h(m * m, C(0.0, 0.0));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) {
      const double u = freq(c), v = freq(r);
      const double rad = u * u + v * v;
      if (rad > inv_l2 || std::abs(u) > u_bl || std::abs(v) > u_bl) continue;
      const double cycles = std::fmod(std::sqrt(inv_l2 - rad) * (sign * f.distance), 1.0);
      h[r * m + c] = std::polar(1.0, 2.0 * std::numbers::pi * cycles);
    }
  return h;
}

inline StraightLineResult straight_line_gs(const holosens::Image& target, const holosens::GsConfig& cfg) {
  const std::size_t m = cfg.fmh.slm_resolution;
  const bool fourier = cfg.forward_model == holosens::ForwardModel::Fourier;
  std::vector<C> h_plus, h_minus;
  if (!fourier) {
    h_plus = transfer(cfg.fmh, 1);
    h_minus = transfer(cfg.fmh, -1);
  }
  auto propagate = [&](const std::vector<C>& x, bool forward) {
    if (fourier) return roll(dft(roll(x, m, (m + 1) / 2), m, forward ? -1 : 1), m, m / 2);
    std::vector<C> s = dft(x, m, -1);
    const std::vector<C>& h = forward ? h_plus : h_minus;
    for (std::size_t i = 0; i < s.size(); ++i)
      s[i] = C(s[i].real() * h[i].real() - s[i].imag() * h[i].imag(),
               s[i].real() * h[i].imag() + s[i].imag() * h[i].real());
    return dft(s, m, 1);
  };
  auto mag = [](C z) { return std::sqrt(z.real() * z.real() + z.imag() * z.imag()); };

  const std::vector<double> phi0 = holosens::random_phase(m, cfg.seed);
  std::vector<double> amp(m * m);
  for (std::size_t p = 0; p < m * m; ++p) amp[p] = std::sqrt(target.data()[p]);
  std::vector<C> unit(m * m), slm_unit(m * m), tp(m * m);
  for (std::size_t p = 0; p < m * m; ++p) unit[p] = std::polar(1.0, phi0[p]);

  StraightLineResult res;
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    for (std::size_t p = 0; p < m * m; ++p) tp[p] = amp[p] * unit[p];
    std::vector<C> slm = propagate(tp, false);
    for (std::size_t p = 0; p < m * m; ++p) {
      const double a = mag(slm[p]);
      slm_unit[p] = a > 0.0 ? slm[p] / a : C(1.0, 0.0);
      slm[p] = cfg.slm_amplitude * slm_unit[p];
    }
    tp = propagate(slm, true);
    double err = 0.0;
    for (std::size_t p = 0; p < m * m; ++p) {
      const double a = mag(tp[p]);
      unit[p] = a > 0.0 ? tp[p] / a : C(1.0, 0.0);
      err += (a - amp[p]) * (a - amp[p]);
    }
    res.errors.push_back(err);
  }
  for (std::size_t p = 0; p < m * m; ++p) {
    res.intensity.push_back(tp[p].real() * tp[p].real() + tp[p].imag() * tp[p].imag());
    res.slm_phase.push_back(std::arg(slm_unit[p]));
  }
  return res;
}

}  // namespace testing_support

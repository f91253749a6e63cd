#include "holosens/phase_retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "holosens/error.hpp"
#include "holosens/random.hpp"

namespace holosens {

std::vector<double> random_phase(std::size_t size, std::uint64_t seed) {
  require(size >= 2, ErrorKind::InvalidArgument, "phase grid needs M >= 2");
  constexpr double pi = std::numbers::pi;
  Rng rng(seed);
  std::vector<double> phase(size * size);
  for (double& p : phase) {
    p = -pi + 2.0 * pi * rng.uniform();
    if (p >= pi) p = std::nextafter(pi, 0.0);
  }
  return phase;
}

namespace {

Grid rescale_to_mean(Grid recon, const Grid& target) {
  double sr = 0.0, st = 0.0;
  for (double v : recon.data) sr += v;
  for (double v : target.data) st += v;
  if (sr > 0.0) {
    const double f = st / sr;
    for (double& v : recon.data) v *= f;
  }
  return recon;
}

double magnitude(Complex z) { return std::sqrt(z.real() * z.real() + z.imag() * z.imag()); }

Complex unit_phasor(Complex z) {
  const double mag = magnitude(z);
  return mag > 0.0 ? z / mag : Complex(1.0, 0.0);
}

}  // namespace

GsTrace gs_run(const Image& target, const GsConfig& cfg) {
  const std::size_t m = cfg.fmh.slm_resolution;
  require(cfg.iterations >= 1, ErrorKind::InvalidArgument, "GS needs at least one iteration");
  require(target.width() == m && target.height() == m, ErrorKind::SizeMismatch,
          "target is not M x M for the configured SLM resolution");
  require(std::isfinite(cfg.slm_amplitude) && cfg.slm_amplitude > 0.0,
          ErrorKind::InvalidArgument, "SLM amplitude must be positive");

  const Propagator psi(cfg.forward_model, cfg.fmh);
  // The Fourier model ignores pitch; any positive value keeps fields valid.
  const double pitch = cfg.forward_model == ForwardModel::Asm ? cfg.fmh.pixel_pitch
                       : cfg.fmh.pixel_pitch > 0.0        ? cfg.fmh.pixel_pitch
                                                          : 1.0;

  std::vector<double> phase;
  if (cfg.initial_phase) {
    require(cfg.initial_phase->size() == m * m, ErrorKind::SizeMismatch,
            "initial phase length != M^2");
    phase = *cfg.initial_phase;
  } else {
    phase = random_phase(m, cfg.seed);
  }

  std::vector<bool> record(cfg.iterations + 1, cfg.record_iterations.empty());
  for (std::size_t it : cfg.record_iterations) {
    require(it >= 1 && it <= cfg.iterations, ErrorKind::InvalidArgument,
            "record iteration outside [1, iterations]");
    record[it] = true;
  }

  const auto target_data = target.data();
  std::vector<double> amplitude(target_data.size());
  std::transform(target_data.begin(), target_data.end(), amplitude.begin(),
                 [](double v) { return std::sqrt(v); });

  // Phases are carried as unit phasors z/|z| so the projections avoid trig;
  // a zero sample takes phase 0, as arg(0) would.
  std::vector<Complex> unit(m * m);
  for (std::size_t p = 0; p < unit.size(); ++p) unit[p] = std::polar(1.0, phase[p]);

  GsTrace trace;
  std::vector<Complex> slm_unit(m * m);
  ComplexField tp(m, pitch);
  for (std::size_t it = 1; it <= cfg.iterations; ++it) {
    auto tp_data = tp.data();
    for (std::size_t p = 0; p < tp_data.size(); ++p) tp_data[p] = amplitude[p] * unit[p];

    ComplexField slm = psi.inverse(tp);
    auto slm_data = slm.data();
    for (std::size_t p = 0; p < slm_data.size(); ++p) {
      slm_unit[p] = unit_phasor(slm_data[p]);
      slm_data[p] = cfg.slm_amplitude * slm_unit[p];
    }

    tp = psi.forward(slm);
    tp_data = tp.data();
    double error = 0.0;
    for (std::size_t p = 0; p < tp_data.size(); ++p) {
      const double mag = magnitude(tp_data[p]);
      unit[p] = mag > 0.0 ? tp_data[p] / mag : Complex(1.0, 0.0);
      const double d = mag - amplitude[p];
      error += d * d;
    }

    if (record[it]) {
      Grid recon = tp.intensity();
      if (cfg.mean_intensity_rescale) recon = rescale_to_mean(std::move(recon), target.grid());
      trace.records.push_back(GsIterationRecord{it, evaluate(recon, target.grid()), error});
    }
  }

  std::vector<double> slm_phase(m * m);
  for (std::size_t p = 0; p < slm_phase.size(); ++p) slm_phase[p] = std::arg(slm_unit[p]);
  trace.final_slm_phase = std::move(slm_phase);
  trace.final_intensity = tp.intensity();
  trace.final_reconstruction = to_image_clamped(trace.final_intensity);
  return trace;
}

}  // namespace holosens

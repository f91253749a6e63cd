#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "holosens/field.hpp"
#include "holosens/metrics.hpp"
#include "holosens/propagation.hpp"

namespace holosens {

/// M*M phases i.i.d. uniform on [-pi, pi) from Rng(seed).
std::vector<double> random_phase(std::size_t size, std::uint64_t seed);

struct GsConfig {
  ForwardModel forward_model = ForwardModel::Fourier;
  /// Only slm_resolution is consulted for the Fourier model.
  FmhConfig fmh;
  std::size_t iterations = 1;
  std::uint64_t seed = 0;
  double slm_amplitude = 1.0;
  /// Iterations (1-based) at which metrics are computed; empty means all.
  std::vector<std::size_t> record_iterations;
  /// Overrides the seeded random start phase at the target plane.
  std::optional<std::vector<double>> initial_phase;
  /// Rescale the reconstruction to the target's mean intensity before scoring.
  bool mean_intensity_rescale = false;
};

struct GsIterationRecord {
  std::size_t iteration = 0;
  MetricRecord metrics;
  /// || |E_TP| - sqrt(I) ||_2^2 at the target plane after this iteration.
  double amplitude_error = 0.0;
};

struct GsTrace {
  std::vector<GsIterationRecord> records;
  std::vector<double> final_slm_phase;
  /// |E_TP|^2 after the last iteration, unscaled.
  Grid final_intensity;
  /// final_intensity clamped into [0, 1] for display.
  Image final_reconstruction = Image::constant(1, 1, 0.0);
};

/// Gerchberg-Saxton phase retrieval. Each iteration enforces the target
/// amplitude, propagates to the SLM, keeps only the phase under a uniform
/// amplitude, and propagates back.
GsTrace gs_run(const Image& target, const GsConfig& cfg);

}  // namespace holosens

#pragma once

// s-wave scattering observables of a one-channel contact model.

#include <cmath>
#include <complex>
#include <numbers>

#include "resokit/error.hpp"
#include "resokit/phase_shift_model.hpp"

namespace resokit {

struct ScatteringPoint {
  double k = 0.0;
  double energy = 0.0;
  std::complex<double> f;
  double delta = 0.0;  // in (0, pi]
};

/// f_s(k) = -1 / (-g(E) + i k), E = k^2.
inline std::complex<double> amplitude(const PhaseShiftModel& model, double k) {
  if (!(k >= 0.0)) throw Error(ErrorCode::invalid_input, "k must be non-negative");
  const double g = model.g(k * k);
  if (k == 0.0) {
    if (g == 0.0) {
      throw Error(ErrorCode::divergent_amplitude, "g(0) = 0: zero-energy resonance");
    }
    return {1.0 / g, 0.0};
  }
  return -1.0 / std::complex<double>(-g, k);
}

/// delta_s on the branch (0, pi]: cot(delta) = g(E)/k.
inline double phase_shift(const PhaseShiftModel& model, double k) {
  if (!(k > 0.0)) throw Error(ErrorCode::invalid_input, "phase shift needs k > 0");
  const double g = model.g(k * k);
  if (std::isinf(g)) return g > 0.0 ? 0.0 : std::numbers::pi;
  return std::atan2(k, g);
}

/// 4 pi |f|^2, doubled for identical particles.
inline double cross_section(const PhaseShiftModel& model, double k, bool identical) {
  if (!(k > 0.0)) throw Error(ErrorCode::invalid_input, "cross section needs k > 0");
  const double f2 = std::norm(amplitude(model, k));
  return (identical ? 8.0 : 4.0) * std::numbers::pi * f2;
}

/// |Im(1/f) + k| / k; zero up to rounding for real-coefficient models.
inline double unitarity_residual(const PhaseShiftModel& model, double k) {
  if (!(k > 0.0)) throw Error(ErrorCode::invalid_input, "unitarity check needs k > 0");
  const std::complex<double> inv = 1.0 / amplitude(model, k);
  return std::fabs(inv.imag() + k) / k;
}

inline ScatteringPoint evaluate(const PhaseShiftModel& model, double k) {
  ScatteringPoint p;
  p.k = k;
  p.energy = k * k;
  p.f = amplitude(model, k);
  p.delta = phase_shift(model, k);
  return p;
}

}  // namespace resokit

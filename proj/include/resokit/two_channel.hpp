#pragma once

// Gaussian-regularized two-channel Feshbach model in the relative-motion
// sector of two identical bosons (hbar = 1, atom mass m explicit).
//
// Open-channel pairs alpha(k) couple to a single molecular amplitude beta
// through Lambda chi_eps(k), chi_eps(k) = exp(-k^2 eps^2 / 4):
//
//   (E - hbar^2 k^2/m) alpha(k) = Lambda beta chi_eps(k)
//   (E - E_mol) beta = 2 Lambda int d^3k/(2pi)^3 chi_eps(k) alpha(k)
//
// Everything below follows from the loop integral
//
//   I(E) = int d^3k/(2pi)^3 chi_eps(k)^2 / (E - hbar^2 k^2/m + i0+)
//
// which has a closed form in scaled erfc (E < 0) and Dawson (E > 0) functions.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "resokit/error.hpp"
#include "resokit/phase_shift_model.hpp"
#include "resokit/special_functions.hpp"

namespace resokit::two_channel {

inline constexpr double pi = std::numbers::pi;
inline const double sqrt_2_over_pi = std::sqrt(2.0 / pi);

struct Params {
  double lambda = 0.0;  // coupling amplitude
  double e_mol = 0.0;   // molecular energy
  double eps = 0.0;     // regulator width
  double mass = 1.0;    // atom mass
};

inline void validate(const Params& p) {
  if (!(p.eps > 0.0)) throw Error(ErrorCode::invalid_input, "eps must be positive");
  if (p.lambda == 0.0 || !std::isfinite(p.lambda)) {
    throw Error(ErrorCode::invalid_input, "lambda must be finite and non-zero");
  }
  if (!(p.mass > 0.0)) throw Error(ErrorCode::invalid_input, "mass must be positive");
  if (!std::isfinite(p.e_mol)) throw Error(ErrorCode::invalid_input, "e_mol must be finite");
}

/// chi_eps(k)^2.
inline double form_factor_squared(const Params& p, double k) {
  return std::exp(-0.5 * k * k * p.eps * p.eps);
}

/// Closed-form loop integral. Real for E <= 0; for E > 0 the imaginary part
/// is the on-shell delta-function contribution.
inline std::complex<double> loop_integral(const Params& p, double energy) {
  const double alpha = 0.5 * p.eps * p.eps;
  const double prefactor = p.mass / (2.0 * pi * pi);
  const double half_gaussian = 0.5 * std::sqrt(pi / alpha);
  if (energy < 0.0) {
    const double kappa = std::sqrt(-p.mass * energy);
    return {prefactor * half_gaussian * special::erfcx_tail(kappa * std::sqrt(alpha)), 0.0};
  }
  if (energy == 0.0) return {-prefactor * half_gaussian, 0.0};
  const double k0 = std::sqrt(p.mass * energy);
  const double re = prefactor * half_gaussian * special::dawson_tail(k0 * std::sqrt(alpha));
  const double im = -p.mass * k0 / (4.0 * pi) * std::exp(-alpha * k0 * k0);
  return {re, im};
}

namespace detail {

// (E - E_mol)/(2 Lambda^2) - I(E): the amplitude denominator.
inline std::complex<double> denominator(const Params& p, double energy) {
  return (energy - p.e_mol) / (2.0 * p.lambda * p.lambda) - loop_integral(p, energy);
}

}  // namespace detail

/// 1/f(E). At E < 0 this is the analytic continuation (real).
inline std::complex<double> inverse_amplitude(const Params& p, double energy) {
  const double alpha = 0.5 * p.eps * p.eps;
  const double inv_chi2 = std::exp(alpha * p.mass * energy);
  return -(4.0 * pi / p.mass) * detail::denominator(p, energy) * inv_chi2;
}

/// f(E) = -(m/4 pi hbar^2) chi^2 / [(E - E_mol)/(2 Lambda^2) - I(E)].
inline std::complex<double> amplitude(const Params& p, double energy) {
  validate(p);
  const auto denom = detail::denominator(p, energy);
  const double scale = std::fabs(energy - p.e_mol) / (2.0 * p.lambda * p.lambda) +
                       std::abs(loop_integral(p, energy));
  if (std::abs(denom) <= 16.0 * std::numeric_limits<double>::epsilon() * scale) {
    throw Error(ErrorCode::pole_hit, "amplitude denominator vanishes at E = " + std::to_string(energy));
  }
  return 1.0 / inverse_amplitude(p, energy);
}

/// R* = 2 pi hbar^4 / (m^2 Lambda^2).
inline double rstar_from_lambda(double lambda, double mass) {
  return 2.0 * pi / (mass * mass * lambda * lambda);
}

/// Inverse of rstar_from_lambda for R* > 0.
inline double lambda_from_rstar(double rstar, double mass) {
  if (!(rstar > 0.0)) throw Error(ErrorCode::invalid_input, "R* must be positive");
  if (!(mass > 0.0)) throw Error(ErrorCode::invalid_input, "mass must be positive");
  return std::sqrt(2.0 * pi / (mass * mass * rstar));
}

/// E_mol giving scattering length a_target at this (Lambda, eps, m).
inline double emol_for_target_a(double a_target, const Params& p) {
  if (a_target == 0.0) throw Error(ErrorCode::invalid_input, "target a must be non-zero");
  return p.lambda * p.lambda * p.mass / (2.0 * pi) * (sqrt_2_over_pi / p.eps - 1.0 / a_target);
}

struct EffectiveParams {
  double inv_a_eps = 0.0;  // closed form 1/a_eps
  double a_eps = 0.0;
  double rstar_eps = 0.0;  // closed form
  double coupling_term = 0.0;  // Lambda-only part of R*_eps, 2 pi hbar^4/(m^2 Lambda^2)
  double a_fit = 0.0;      // from the low-energy fit of Re(1/f)
  double rstar_fit = 0.0;
  double rel_error_a = 0.0;      // on 1/a
  double rel_error_rstar = 0.0;
};

struct FitGrid {
  double e_min = 1e-6;
  double e_max = 1e-3;
  int points = 41;
  double tolerance = 1e-6;
};

/// Closed-form (1/a_eps, R*_eps) and their least-squares check against a
/// quadratic fit of Re(1/f)(E) on a low-energy grid.
inline EffectiveParams effective_params(const Params& p, const FitGrid& grid = {}) {
  validate(p);
  const double l2 = p.lambda * p.lambda;
  const double m = p.mass;
  EffectiveParams out;
  const double gaussian_term = sqrt_2_over_pi / p.eps;
  const double molecular_term = 2.0 * pi * p.e_mol / (l2 * m);
  out.inv_a_eps = gaussian_term - molecular_term;
  out.a_eps = 1.0 / out.inv_a_eps;
  const double coupling_term = 2.0 * pi / (l2 * m * m);
  const double curvature_term = 0.5 * p.eps * p.eps * out.inv_a_eps;
  out.rstar_eps = -sqrt_2_over_pi * p.eps + coupling_term + curvature_term;
  out.coupling_term = coupling_term;

  // Re(1/f) = c0 + c1 E + c2 E^2 in t = E / e_max for conditioning.
  std::array<std::array<double, 4>, 3> normal{};
  for (int i = 0; i < grid.points; ++i) {
    const double e = grid.e_min + (grid.e_max - grid.e_min) * i / (grid.points - 1);
    const double t = e / grid.e_max;
    const double y = inverse_amplitude(p, e).real();
    const std::array<double, 3> basis{1.0, t, t * t};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) normal[r][c] += basis[r] * basis[c];
      normal[r][3] += basis[r] * y;
    }
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::fabs(normal[r][col]) > std::fabs(normal[pivot][col])) pivot = r;
    }
    std::swap(normal[col], normal[pivot]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double factor = normal[r][col] / normal[col][col];
      for (int c = col; c < 4; ++c) normal[r][c] -= factor * normal[col][c];
    }
  }
  const double c0 = normal[0][3] / normal[0][0];
  const double c1 = normal[1][3] / normal[1][1] / grid.e_max;
  out.a_fit = -1.0 / c0;
  out.rstar_fit = -c1 / m;

  const double inv_a_scale = std::fmax(std::fabs(out.inv_a_eps), gaussian_term + std::fabs(molecular_term));
  const double rstar_scale =
      std::fmax(std::fabs(out.rstar_eps),
                sqrt_2_over_pi * p.eps + coupling_term + std::fabs(curvature_term));
  out.rel_error_a = std::fabs(-c0 - out.inv_a_eps) / inv_a_scale;
  out.rel_error_rstar = std::fabs(out.rstar_fit - out.rstar_eps) / rstar_scale;
  if (out.rel_error_a > grid.tolerance || out.rel_error_rstar > grid.tolerance) {
    throw Error(ErrorCode::inconsistent_expansion,
                "closed-form effective parameters disagree with the low-energy fit (rel. errors " +
                    std::to_string(out.rel_error_a) + ", " + std::to_string(out.rel_error_rstar) + ")");
  }
  return out;
}

/// Parameters reproducing (a, R*) at regulator width eps.
inline Params params_for(double a, double rstar, double eps, double mass = 1.0) {
  Params p;
  p.eps = eps;
  p.mass = mass;
  p.lambda = lambda_from_rstar(rstar, mass);
  p.e_mol = emol_for_target_a(a, p);
  return p;
}

/// The one-channel effective-range model with the same (a, R*) in the
/// zero-range limit, R* = 2 pi hbar^4/(m^2 Lambda^2). g is a polynomial in E,
/// so the k^2 coefficient picks up m; PhaseShiftModel itself assumes m = 1.
inline PhaseShiftModel zero_range_model(const Params& p) {
  const double inv_a = sqrt_2_over_pi / p.eps - 2.0 * pi * p.e_mol / (p.lambda * p.lambda * p.mass);
  return PhaseShiftModel({-inv_a, -rstar_from_lambda(p.lambda, p.mass) * p.mass});
}

struct BoundState {
  double energy = 0.0;
  double q = 0.0;          // sqrt(-m E)
  double beta = 0.0;       // molecular amplitude, real positive
  double beta2 = 0.0;      // closed-channel fraction
  double open_norm = 0.0;  // int d^3k/(2pi)^3 |psi(k)|^2
  double A_tail = 0.0;     // source amplitude from the momentum tail
  double A_exact = 0.0;    // sqrt(2) m Lambda beta / (4 pi hbar^2)
};

struct BoundStateOptions {
  std::size_t points_per_decade = 256;
  double e_closest = 1e-12;  // upper end of the search window is -e_closest
  double rel_tol = 1e-12;
  double quad_tol = 1e-10;
};

/// psi(k) = sqrt(2) Lambda beta chi_eps(k) / (E - hbar^2 k^2/m).
inline double open_wavefunction(const Params& p, const BoundState& s, double k) {
  return std::sqrt(2.0) * p.lambda * s.beta * std::exp(-0.25 * k * k * p.eps * p.eps) /
         (s.energy - k * k / p.mass);
}

/// A = sqrt(2) m Lambda beta / (4 pi hbar^2).
inline double amplitude_from_beta(const Params& p, double beta) {
  return std::sqrt(2.0) * p.mass * p.lambda * beta / (4.0 * pi);
}

namespace detail {

/// (1/2pi^2) int_0^inf k^2 chi^2 / ((E1 - k^2/m)(E2 - k^2/m)) dk.
inline double resolvent_product_integral(const Params& p, double e1, double e2, double tol) {
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  const auto integrand = [&](double k) {
    const double k2 = k * k;
    return k2 * std::exp(-0.5 * k2 * p.eps * p.eps) / ((e1 - k2 / p.mass) * (e2 - k2 / p.mass));
  };
  // Split at the bound-state momentum and at the regulator scale so each
  // piece is smooth on its own scale.
  const double k_bound = std::sqrt(p.mass * std::fmax(std::fabs(e1), std::fabs(e2)));
  std::vector<double> cuts{0.0, k_bound, 1.0 / p.eps};
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    double err = 0.0;
    total += Quad::integrate(integrand, cuts[i], cuts[i + 1], 15, 1e-13, &err);
    error += err;
  }
  double err = 0.0;
  total += Quad::integrate(integrand, cuts.back(), std::numeric_limits<double>::infinity(), 15,
                           1e-13, &err);
  error += err;
  if (!(error <= tol * std::fabs(total)) || !std::isfinite(total)) {
    throw Error(ErrorCode::quadrature_failure,
                "norm integral did not converge (estimated rel. error " +
                    std::to_string(error / std::fabs(total)) + ")");
  }
  return total / (2.0 * pi * pi);
}

/// Plateau of k^2 psi(k) between the bound-state scale q and the cutoff
/// 1/eps: fit G(k) = G_inf + b/k^2 + c k^2 through k^2 = k*^2 {1/2, 1, 2},
/// k*^2 = 2 q / eps, where the two leading corrections balance.
inline double tail_plateau(const Params& p, const BoundState& s) {
  const double center = 2.0 * s.q / p.eps;
  const std::array<double, 3> x{0.5 * center, center, 2.0 * center};
  std::array<std::array<double, 4>, 3> m{};
  for (int i = 0; i < 3; ++i) {
    m[i] = {1.0, 1.0 / x[i], x[i], x[i] * open_wavefunction(p, s, std::sqrt(x[i]))};
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
    }
    std::swap(m[col], m[pivot]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double factor = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  return m[0][3] / m[0][0];
}

}  // namespace detail

/// Finds the bound state below threshold, normalizes it with the usual
/// two-channel product (open_norm + beta^2 = 1) and extracts its source
/// amplitude.
inline BoundState bound_state(const Params& p, const BoundStateOptions& opt = {}) {
  validate(p);
  const auto bracket = [&p](double e) { return detail::denominator(p, e).real(); };

  const double e_far = 1e3 * std::fmax(1.0 / (p.mass * p.eps * p.eps), std::fabs(p.e_mol));
  const double decades = std::log10(e_far / opt.e_closest);
  const auto n = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(opt.points_per_decade)));

  double e_prev = -opt.e_closest;
  double b_prev = bracket(e_prev);
  bool found = false;
  double lo = 0.0, hi = 0.0, b_lo = 0.0, b_hi = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double e = -opt.e_closest * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(n));
    const double b = bracket(e);
    if (b == 0.0 || std::signbit(b) != std::signbit(b_prev)) {
      lo = e;
      hi = e_prev;
      b_lo = b;
      b_hi = b_prev;
      found = true;
      break;
    }
    e_prev = e;
    b_prev = b;
  }
  if (!found) throw Error(ErrorCode::no_bound_state, "no sign change of the pole condition below threshold");

  BoundState s;
  if (b_lo == 0.0) {
    s.energy = lo;
  } else {
    const auto tol = [&opt](double a, double b) {
      return std::fabs(b - a) <= opt.rel_tol * std::fmin(std::fabs(a), std::fabs(b));
    };
    std::uintmax_t max_iter = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(bracket, lo, hi, b_lo, b_hi, tol, max_iter);
    s.energy = 0.5 * (a + b);
  }
  s.q = std::sqrt(-p.mass * s.energy);

  const double open_per_beta2 = 2.0 * p.lambda * p.lambda *
                                detail::resolvent_product_integral(p, s.energy, s.energy, opt.quad_tol);
  s.beta2 = 1.0 / (1.0 + open_per_beta2);
  s.beta = std::sqrt(s.beta2);
  s.open_norm = open_per_beta2 * s.beta2;
  s.A_exact = amplitude_from_beta(p, s.beta);
  s.A_tail = -detail::tail_plateau(p, s) / (4.0 * pi);
  return s;
}

/// <Phi_open|Psi_open> of two bound states sharing Lambda, eps and m.
inline double open_overlap(const Params& p, const BoundState& s1, const BoundState& s2,
                           double tol = 1e-10) {
  return 2.0 * p.lambda * p.lambda * s1.beta * s2.beta *
         detail::resolvent_product_integral(p, s1.energy, s2.energy, tol);
}

struct IdentityReport {
  double beta_product = 0.0;    // beta1* beta2
  double molecular_term = 0.0;  // 4 pi R* A1* A2 with tail amplitudes
  double molecular_exact = 0.0; // same with A from beta
  double open = 0.0;            // <Phi_open|Psi_open>
  double total = 0.0;           // open + beta1* beta2
  double residual1 = 0.0;       // |beta* beta - 4pi R* A* A| / |beta* beta|
  double residual2 = 0.0;       // |total - (open + 4pi R* A* A)| / |total|
  double residual_exact = 0.0;  // residual1 with A from beta
};

/// Checks <Phi_tot|Psi_tot> = <Phi_open|Psi_open> + 4 pi R* A_Phi* A_Psi.
inline IdentityReport product_identity_check(const Params& p1, const BoundState& s1,
                                             const Params& p2, const BoundState& s2) {
  if (p1.lambda != p2.lambda || p1.eps != p2.eps || p1.mass != p2.mass) {
    throw Error(ErrorCode::parameter_mismatch, "states must share Lambda, eps and mass");
  }
  const double rstar = rstar_from_lambda(p1.lambda, p1.mass);
  IdentityReport r;
  r.beta_product = s1.beta * s2.beta;
  r.molecular_term = 4.0 * pi * rstar * s1.A_tail * s2.A_tail;
  r.molecular_exact = 4.0 * pi * rstar * s1.A_exact * s2.A_exact;
  r.open = open_overlap(p1, s1, s2);
  r.total = r.open + r.beta_product;
  r.residual1 = std::fabs(r.beta_product - r.molecular_term) / std::fabs(r.beta_product);
  r.residual2 = std::fabs(r.total - (r.open + r.molecular_term)) / std::fabs(r.total);
  r.residual_exact = std::fabs(r.beta_product - r.molecular_exact) / std::fabs(r.beta_product);
  return r;
}

}  // namespace resokit::two_channel

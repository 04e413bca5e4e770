#pragma once

// Modified scalar product of generalized contact models.
//
// For two eigenstates with source amplitudes A1, A2 and energies E1 != E2 the
// usual product reduces to (2 pi hbar^2/mu) A1* A2 (g(E1)-g(E2))/(E1-E2). The
// modified product subtracts that term, making non-degenerate eigenstates
// orthogonal. The same subtraction written through the regularized matrix
// elements Reg <k|(p^2/2mu)^n|Psi> = -(2 pi hbar^2 A/mu) E^(n-1) gives a
// finite double sum over the coefficients of g. Natural units, 2 pi hbar^2/mu = 4 pi.

#include <cmath>
#include <complex>
#include <numbers>
#include <string_view>

#include "resokit/error.hpp"
#include "resokit/phase_shift_model.hpp"

namespace resokit {

enum class StateKind { bound, scattering };

constexpr std::string_view to_string(StateKind k) {
  return k == StateKind::bound ? "bound" : "scattering";
}

class ContactEigenstate {
 public:
  static ContactEigenstate bound(double energy, std::complex<double> amplitude) {
    if (!(energy < 0.0)) throw Error(ErrorCode::invalid_input, "bound state needs E < 0");
    return ContactEigenstate(energy, amplitude, StateKind::bound);
  }

  static ContactEigenstate scattering(double energy, std::complex<double> amplitude) {
    if (!(energy >= 0.0)) throw Error(ErrorCode::invalid_input, "scattering state needs E >= 0");
    return ContactEigenstate(energy, amplitude, StateKind::scattering);
  }

  double energy() const { return energy_; }
  std::complex<double> amplitude() const { return amplitude_; }
  StateKind kind() const { return kind_; }

  /// sqrt(-m E)/hbar; bound states only.
  double q() const {
    if (kind_ != StateKind::bound) throw Error(ErrorCode::kind_mismatch, "q of a scattering state");
    return std::sqrt(-energy_);
  }

 private:
  ContactEigenstate(double energy, std::complex<double> amplitude, StateKind kind)
      : energy_(energy), amplitude_(amplitude), kind_(kind) {}

  double energy_;
  std::complex<double> amplitude_;
  StateKind kind_;
};

inline constexpr double contact_prefactor = 4.0 * std::numbers::pi;  // 2 pi hbar^2 / mu

struct DegeneracyTolerance {
  double relative = 1e-8;
  double energy_floor = 1e-12;
};

/// <Phi|Psi> of two bound-type wavefunctions -A exp(-q r)/r.
inline std::complex<double> plain_overlap_bound(const ContactEigenstate& s1,
                                                const ContactEigenstate& s2) {
  if (s1.kind() != StateKind::bound || s2.kind() != StateKind::bound) {
    throw Error(ErrorCode::kind_mismatch, "closed-form overlap needs two bound states");
  }
  return std::conj(s1.amplitude()) * s2.amplitude() * (4.0 * std::numbers::pi / (s1.q() + s2.q()));
}

/// (g(E1)-g(E2))/(E1-E2), or g' at the midpoint inside the degeneracy window.
inline double energy_quotient(const PhaseShiftModel& model, double e1, double e2,
                              const DegeneracyTolerance& tol = {}) {
  const double scale = std::fmax(std::fmax(std::fabs(e1), std::fabs(e2)), tol.energy_floor);
  if (std::fabs(e1 - e2) < tol.relative * scale) {
    return model.g_prime(0.5 * (e1 + e2));
  }
  return model.divided_difference(e1, e2);
}

/// (Phi|Psi)_0 = <Phi|Psi> - (2 pi hbar^2/mu) A1* A2 (g(E1)-g(E2))/(E1-E2).
inline std::complex<double> modified_product(const PhaseShiftModel& model,
                                             const ContactEigenstate& s1,
                                             const ContactEigenstate& s2,
                                             std::complex<double> plain,
                                             const DegeneracyTolerance& tol = {}) {
  const double quotient = energy_quotient(model, s1.energy(), s2.energy(), tol);
  return plain - contact_prefactor * std::conj(s1.amplitude()) * s2.amplitude() * quotient;
}

/// Reg_{k->inf} <k|(p^2/2mu)^n|Psi>; zero for n = 0.
inline std::complex<double> reg_matrix_element(const ContactEigenstate& s, unsigned n) {
  if (n == 0) return {0.0, 0.0};
  return -contact_prefactor * s.amplitude() * std::pow(s.energy(), static_cast<int>(n) - 1);
}

/// Same product written as the finite double sum over the coefficients of g.
inline std::complex<double> modified_product_series(const PhaseShiftModel& model,
                                                    const ContactEigenstate& s1,
                                                    const ContactEigenstate& s2,
                                                    std::complex<double> plain) {
  const auto coeffs = model.coeffs();
  std::complex<double> sum{0.0, 0.0};
  for (unsigned n = 1; n < coeffs.size(); ++n) {
    if (coeffs[n] == 0.0) continue;
    std::complex<double> inner{0.0, 0.0};
    for (unsigned p = 1; p <= n; ++p) {
      inner += std::conj(reg_matrix_element(s1, n - p + 1)) * reg_matrix_element(s2, p);
    }
    sum += coeffs[n] * inner;
  }
  return plain - sum / contact_prefactor;
}

/// The degree-1 model whose bound states sit exactly at q1 and q2.
inline PhaseShiftModel construct_two_pole_model(double q1, double q2) {
  if (!(q1 > 0.0) || !(q2 > 0.0)) {
    throw Error(ErrorCode::invalid_input, "two-pole model needs q1, q2 > 0");
  }
  // c0 + c1 E_i = -q_i with E_i = -q_i^2.
  const double e1 = -q1 * q1;
  const double e2 = -q2 * q2;
  const double det = e2 - e1;
  if (det == 0.0) throw Error(ErrorCode::singular_system, "pole energies coincide");
  const double c0 = (-q1 * e2 + q2 * e1) / det;
  const double c1 = (-q2 + q1) / det;
  return PhaseShiftModel({c0, c1});
}

}  // namespace resokit

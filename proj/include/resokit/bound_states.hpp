#pragma once

// Bound states of a one-channel contact model: poles of f_s at k = i q,
// i.e. positive roots of h(q) = g(-q^2) + q. Natural units (hbar = m = 1,
// mu = 1/2), so hbar^2/mu = 2.

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "resokit/error.hpp"
#include "resokit/phase_shift_model.hpp"

namespace resokit {

enum class NormSign { positive, negative };

constexpr std::string_view to_string(NormSign s) {
  return s == NormSign::positive ? "positive" : "negative";
}

struct BoundState {
  double q = 0.0;       // decay constant, k = i q
  double energy = 0.0;  // -q^2
  double A2 = 0.0;      // |A_phi|^2
  NormSign norm_sign = NormSign::positive;
};

struct Normalization {
  double A2 = 0.0;
  NormSign sign = NormSign::positive;
};

struct BoundStateSearch {
  double q_min = 1e-8;
  std::size_t points_per_decade = 512;
  double rel_tol = 1e-12;
};

struct Diagnostics {
  std::vector<std::string> warnings;
};

/// |A_phi|^2 = (1/4pi) 2 / (1/q - (hbar^2/mu) g'(E_phi)).
/// A non-positive denominator is reported through `sign`, not rejected.
inline Normalization normalization(const PhaseShiftModel& model, double q) {
  const double energy = -q * q;
  const double denom = 1.0 / q - 2.0 * model.g_prime(energy);
  Normalization n;
  n.A2 = 2.0 / (4.0 * std::numbers::pi * denom);
  n.sign = denom > 0.0 ? NormSign::positive : NormSign::negative;
  return n;
}

inline Normalization normalization(const PhaseShiftModel& model, const BoundState& state) {
  return normalization(model, state.q);
}

namespace detail {

inline double pole_function(const PhaseShiftModel& model, double q) {
  return model.g(-q * q) + q;
}

inline std::vector<double> geometric_grid(double lo, double hi, std::size_t per_decade) {
  std::vector<double> grid;
  if (!(hi > lo)) {
    grid.push_back(hi);
    return grid;
  }
  const double decades = std::log10(hi / lo);
  const auto n = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(per_decade)));
  grid.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    grid.push_back(lo * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(n)));
  }
  grid.back() = hi;
  return grid;
}

/// Bracketing refinement to relative tolerance `rel_tol`.
template <class F>
double refine_root(F&& f, double lo, double hi, double flo, double fhi, double rel_tol) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  const auto tol = [rel_tol](double a, double b) {
    return std::fabs(b - a) <= rel_tol * std::fmin(std::fabs(a), std::fabs(b));
  };
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
  return 0.5 * (a + b);
}

/// Newton steps on h(q), h'(q) = 1 - 2 q g'(-q^2), kept only while |h| drops.
inline double polish_root(const PhaseShiftModel& model, double q) {
  double hq = pole_function(model, q);
  for (int i = 0; i < 4 && hq != 0.0; ++i) {
    const double slope = 1.0 - 2.0 * q * model.g_prime(-q * q);
    if (slope == 0.0) break;
    const double next = q - hq / slope;
    const double h_next = pole_function(model, next);
    if (!(next > 0.0) || !(std::fabs(h_next) < std::fabs(hq))) break;
    q = next;
    hq = h_next;
  }
  return q;
}

}  // namespace detail

/// All bound states with q in (0, q_max], sorted by increasing q.
inline std::vector<BoundState> find_bound_states(const PhaseShiftModel& model, double q_max,
                                                 Diagnostics* diag = nullptr,
                                                 const BoundStateSearch& search = {}) {
  if (!(q_max > 0.0)) throw Error(ErrorCode::invalid_input, "q_max must be positive");
  const auto h = [&model](double q) { return detail::pole_function(model, q); };
  const auto grid = detail::geometric_grid(std::fmin(search.q_min, q_max), q_max,
                                           search.points_per_decade);

  std::vector<BoundState> states;
  double q_prev = grid.front();
  double h_prev = h(q_prev);
  if (h_prev == 0.0) states.push_back({q_prev, -q_prev * q_prev});
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double q = grid[i];
    const double hq = h(q);
    if (hq == 0.0) {
      states.push_back({q, -q * q});
    } else if (h_prev != 0.0 && std::signbit(hq) != std::signbit(h_prev)) {
      const double root = detail::refine_root(h, q_prev, q, h_prev, hq, search.rel_tol);
      const double polished = detail::polish_root(model, root);
      states.push_back({polished, -polished * polished});
    }
    q_prev = q;
    h_prev = hq;
  }

  for (auto& s : states) {
    const auto n = normalization(model, s.q);
    s.A2 = n.A2;
    s.norm_sign = n.sign;
    if (diag && std::fabs(s.q - q_max) <= 1e-12 * q_max) {
      diag->warnings.push_back("RootAtGridBoundary: root at q_max = " + std::to_string(q_max));
    }
  }
  return states;
}

/// phi(r) = -A_phi exp(-q r) / r with A_phi = sqrt(|A2|), real positive.
inline double wavefunction(const BoundState& state, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::invalid_input, "wavefunction needs r > 0");
  return -std::sqrt(std::fabs(state.A2)) * std::exp(-state.q * r) / r;
}

/// Closed-form usual norm <phi|phi> = 4 pi |A|^2 / (2 q).
inline double plain_norm(const BoundState& state) {
  return 4.0 * std::numbers::pi * state.A2 / (2.0 * state.q);
}

/// |(phi|phi)_0 - 1| with (phi|phi)_0 = <phi|phi> - (2 pi hbar^2/mu) |A|^2 g'(E).
inline double modified_norm_check(const PhaseShiftModel& model, const BoundState& state) {
  const double modified =
      plain_norm(state) - 4.0 * std::numbers::pi * state.A2 * model.g_prime(state.energy);
  return std::fabs(modified - 1.0);
}

}  // namespace resokit

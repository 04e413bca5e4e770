#include "verify.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "resokit/bound_states.hpp"
#include "resokit/error.hpp"
#include "resokit/inner_product.hpp"
#include "resokit/io.hpp"
#include "resokit/phase_shift_model.hpp"
#include "resokit/scattering.hpp"
#include "resokit/two_channel.hpp"
#include "resokit/units.hpp"

namespace resokit::verify {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;
constexpr double pi = std::numbers::pi;

// Pole of the effective-range model (a, R*) = (1, 1): q^2 + q - 1 = 0.
const double zero_range_q = 0.5 * (std::sqrt(5.0) - 1.0);
// 4 pi |A|^2 = 2 R* q / (1 + 2 R* q) at R* = 1.
const double zero_range_fraction = 2.0 * zero_range_q / (1.0 + 2.0 * zero_range_q);

template <class F>
Criterion timed(int id, std::string name, double time_limit, F&& body) {
  Criterion c;
  c.id = id;
  c.name = std::move(name);
  c.time_limit = time_limit;
  const auto start = Clock::now();
  try {
    body(c);
  } catch (const Error& e) {
    c.passed = false;
    c.details["error"] = e.what();
  }
  c.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (c.seconds > c.time_limit) {
    c.passed = false;
    c.details["timeout"] = true;
  }
  return c;
}

PhaseShiftModel random_model(io::Rng& rng, std::size_t min_degree, std::size_t max_degree, double span) {
  const std::size_t degree = min_degree + rng.index(max_degree - min_degree + 1);
  std::vector<double> c(degree + 1);
  for (auto& v : c) v = rng.uniform(-span, span);
  if (c.back() == 0.0) c.back() = span;
  return PhaseShiftModel(c);
}

json coeffs_json(const PhaseShiftModel& m) {
  return json(std::vector<double>(m.coeffs().begin(), m.coeffs().end()));
}

ContactEigenstate as_eigenstate(const BoundState& s) {
  return ContactEigenstate::bound(s.energy, std::sqrt(std::fabs(s.A2)));
}

// Adaptive Gauss-Kronrod evaluation of the loop integral straight from its
// defining integral; the principal value at E > 0 is folded around k0.
double loop_integral_quadrature(const two_channel::Params& p, double energy) {
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double alpha = 0.5 * p.eps * p.eps;
  const double m = p.mass;
  const double inf = std::numeric_limits<double>::infinity();
  const double cutoff = 1.0 / p.eps;
  double total = 0.0;
  if (energy < 0.0) {
    const double kappa2 = -m * energy;
    const auto f = [&](double k) { return -m * k * k * std::exp(-alpha * k * k) / (kappa2 + k * k); };
    const double kappa = std::sqrt(kappa2);
    std::vector<double> cuts{0.0, std::min(kappa, cutoff), std::max(kappa, cutoff)};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i + 1] > cuts[i]) total += Quad::integrate(f, cuts[i], cuts[i + 1], 15, 1e-12);
    }
    total += Quad::integrate(f, cuts.back(), inf, 15, 1e-12);
  } else if (energy == 0.0) {
    const auto f = [&](double k) { return -m * std::exp(-alpha * k * k); };
    total = Quad::integrate(f, 0.0, cutoff, 15, 1e-12) + Quad::integrate(f, cutoff, inf, 15, 1e-12);
  } else {
    const double k0 = std::sqrt(m * energy);
    const auto h = [&](double k) { return m * k * k * std::exp(-alpha * k * k) / (k0 + k); };
    const auto folded = [&](double t) { return (h(k0 - t) - h(k0 + t)) / t; };
    const auto outer = [&](double k) { return h(k) / (k0 - k); };
    total = Quad::integrate(folded, 0.0, k0, 15, 1e-12);
    const double far = std::max(2.0 * k0, k0 + 4.0 * cutoff);
    if (far > 2.0 * k0) total += Quad::integrate(outer, 2.0 * k0, far, 15, 1e-12);
    total += Quad::integrate(outer, far, inf, 15, 1e-12);
  }
  return total / (2.0 * pi * pi);
}

struct SequencePoint {
  double eps = 0.0;
  two_channel::Params params;
  two_channel::BoundState state;
  two_channel::EffectiveParams effective;
  two_channel::IdentityReport identity;
};

// The (a, R*) = (1, 1) sequence shared by criteria 8 and 9.
const std::vector<SequencePoint>& zero_range_sequence() {
  static const std::vector<SequencePoint> seq = [] {
    std::vector<SequencePoint> out;
    for (double eps : {0.2, 0.1, 0.05, 0.025}) {
      SequencePoint pt;
      pt.eps = eps;
      pt.params = two_channel::params_for(1.0, 1.0, eps);
      pt.state = two_channel::bound_state(pt.params);
      pt.effective = two_channel::effective_params(pt.params);
      pt.identity = two_channel::product_identity_check(pt.params, pt.state, pt.params, pt.state);
      out.push_back(pt);
    }
    return out;
  }();
  return seq;
}

}  // namespace

Group parse_group(std::string_view name) {
  if (name == "all") return Group::all;
  if (name == "unitarity") return Group::unitarity;
  if (name == "orthogonality") return Group::orthogonality;
  if (name == "mapping") return Group::mapping;
  if (name == "identity") return Group::identity;
  if (name == "feshbach") return Group::feshbach;
  throw Error(ErrorCode::invalid_input, "unknown verify group '" + std::string(name) + "'");
}

Criterion one_channel_unitarity(const Options& opt) {
  return timed(1, "one-channel unitarity", 1.0, [&](Criterion& c) {
    io::Rng rng(opt.seed);
    io::SweepPlan grid{io::SweepVariable::k, 1e-3, 1e2, 50, io::SweepScale::log};
    const auto ks = grid.values();
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const auto model = random_model(rng, 0, 6, 2.0);
      for (double k : ks) {
        const double r = unitarity_residual(model, k);
        if (!(r <= worst)) {
          worst = r;
          c.details["worst_model"] = coeffs_json(model);
          c.details["worst_k"] = k;
        }
      }
    }
    c.value = worst;
    c.threshold = 1e-13;
    c.passed = worst < c.threshold;
  });
}

Criterion two_channel_unitarity(const Options& opt) {
  return timed(2, "two-channel unitarity", 10.0, [&](Criterion& c) {
    io::Rng rng(opt.seed + 2);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      two_channel::Params p;
      p.eps = rng.log_uniform(0.02, 2.0);
      p.mass = rng.uniform(0.5, 2.0);
      p.lambda = rng.log_uniform(0.1, 10.0);
      p.e_mol = rng.uniform(-5.0, 5.0) / (p.mass * p.eps * p.eps);
      io::SweepPlan grid{io::SweepVariable::k, 1e-3, 1.0 / p.eps, 40, io::SweepScale::log};
      for (double k0 : grid.values()) {
        const double energy = k0 * k0 / p.mass;
        const std::complex<double> inv = 1.0 / two_channel::amplitude(p, energy);
        const double r = std::fabs(inv.imag() + k0) / k0;
        if (!(r <= worst)) {
          worst = r;
          c.details["worst"] = {{"lambda", p.lambda}, {"emol", p.e_mol}, {"eps", p.eps},
                                {"mass", p.mass}, {"k0", k0}};
        }
      }
    }
    c.value = worst;
    c.threshold = 1e-12;
    c.passed = worst < c.threshold;
  });
}

Criterion orthogonality(const Options& opt) {
  return timed(3, "orthogonality of two-pole bound states", 1.0, [&](Criterion& c) {
    io::Rng rng(opt.seed + 3);
    double worst = 0.0;
    int pairs = 0;
    while (pairs < 100) {
      const double q1 = rng.log_uniform(0.05, 5.0);
      const double q2 = rng.log_uniform(0.05, 5.0);
      if (std::fabs(q1 - q2) < 1e-2 * std::max(q1, q2)) continue;
      const auto model = construct_two_pole_model(q1, q2);
      const auto states = find_bound_states(model, 2.0 * std::max(q1, q2));
      if (states.size() != 2) {
        throw Error(ErrorCode::no_bound_state,
                    "two-pole model returned " + std::to_string(states.size()) + " bound states");
      }
      const auto s1 = as_eigenstate(states[0]);
      const auto s2 = as_eigenstate(states[1]);
      const auto plain = plain_overlap_bound(s1, s2);
      const auto modified = modified_product(model, s1, s2, plain);
      const double r = std::abs(modified) / std::abs(plain);
      if (!(r <= worst)) {
        worst = r;
        c.details["worst"] = {{"model", coeffs_json(model)},
                              {"states", {states[0].q, states[1].q}},
                              {"plain", std::abs(plain)},
                              {"modified", std::abs(modified)},
                              {"residual", r}};
      }
      ++pairs;
    }
    c.value = worst;
    c.threshold = 1e-12;
    c.passed = worst < c.threshold;
  });
}

Criterion series_quotient_equivalence(const Options& opt) {
  return timed(4, "series and quotient forms agree", 1.0, [&](Criterion& c) {
    io::Rng rng(opt.seed + 4);
    const auto draw_state = [&rng](double energy) {
      const std::complex<double> amp{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      return energy < 0.0 ? ContactEigenstate::bound(energy, amp)
                          : ContactEigenstate::scattering(energy, amp);
    };
    double worst = 0.0;
    int near_degenerate = 0;
    for (int i = 0; i < 500; ++i) {
      const auto model = random_model(rng, 1, 6, 2.0);
      double e1 = rng.uniform(-1.5, 2.0);
      if (std::fabs(e1) < 0.05) e1 = std::copysign(0.05, e1);
      double e2 = rng.uniform(-1.5, 2.0);
      if (i % 4 == 0) {
        e2 = e1 * (1.0 + rng.log_uniform(1e-15, 1e-6));
        ++near_degenerate;
      }
      const auto s1 = draw_state(e1);
      const auto s2 = draw_state(e2);
      const std::complex<double> plain{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      const auto quotient = modified_product(model, s1, s2, plain);
      const auto series = modified_product_series(model, s1, s2, plain);
      // Both forms subtract 4 pi A1* A2 times the divided difference of g.
      const auto sub_q = plain - quotient;
      const auto sub_s = plain - series;
      const double r = std::abs(sub_q - sub_s) / std::max(std::abs(sub_q), std::abs(sub_s));
      if (!(r <= worst)) {
        worst = r;
        c.details["worst"] = {{"model", coeffs_json(model)}, {"e1", e1}, {"e2", e2}, {"residual", r}};
      }
    }
    c.details["near_degenerate_draws"] = near_degenerate;
    c.value = worst;
    c.threshold = 1e-12;
    c.passed = worst < c.threshold;
  });
}

Criterion normalization_consistency(const Options& opt) {
  return timed(5, "normalization self-consistency", 5.0, [&](Criterion& c) {
    double worst = 0.0;
    bool sub_checks = true;

    const auto wbp = PhaseShiftModel::wbp(1.0);
    const auto wbp_states = find_bound_states(wbp, 10.0);
    sub_checks = sub_checks && wbp_states.size() == 1;
    for (const auto& s : wbp_states) worst = std::max(worst, modified_norm_check(wbp, s));

    const auto er = PhaseShiftModel::from_effective_range(1.0, 1.0);
    const auto er_states = find_bound_states(er, 10.0);
    sub_checks = sub_checks && er_states.size() == 1;
    if (!er_states.empty()) {
      worst = std::max(worst, modified_norm_check(er, er_states[0]));
      // |A|^2 = q / (2 pi (1 + 2 R* q)) at R* = 1.
      const double expected = zero_range_q / (2.0 * pi * (1.0 + 2.0 * zero_range_q));
      const double err = std::fabs(er_states[0].A2 - expected) / expected;
      c.details["effective_range_A2"] = er_states[0].A2;
      c.details["effective_range_A2_error"] = err;
      sub_checks = sub_checks && err < 1e-12;
    }

    io::Rng rng(opt.seed + 5);
    int models = 0;
    int states = 0;
    int negative = 0;
    while (models < 50) {
      const auto model = random_model(rng, 1, 4, 2.0);
      const auto found = find_bound_states(model, 20.0);
      if (found.empty()) continue;
      ++models;
      for (const auto& s : found) {
        ++states;
        if (s.norm_sign == NormSign::negative) ++negative;
        const double r = modified_norm_check(model, s);
        if (!(r <= worst)) {
          worst = r;
          c.details["worst"] = {{"model", coeffs_json(model)}, {"q", s.q}, {"residual", r}};
        }
      }
    }
    c.details["random_states"] = states;
    c.details["negative_norm_states"] = negative;
    c.details["sub_checks"] = sub_checks;
    c.value = worst;
    c.threshold = 1e-10;
    c.passed = sub_checks && worst < c.threshold;
  });
}

Criterion loop_integral_agreement(const Options&) {
  return timed(6, "loop integral closed form vs quadrature", 30.0, [&](Criterion& c) {
    // Grid in the dimensionless y = k eps / sqrt(2). Re I(E > 0) changes sign
    // at y = 0.9241; relative error is meaningless there, so the positive
    // branch skips the window [0.7, 1.2].
    std::vector<double> negative_y;
    std::vector<double> positive_y;
    for (int i = 0; i < 15; ++i) negative_y.push_back(1e-3 * std::pow(1e4, i / 14.0));
    for (int i = 0; i < 8; ++i) positive_y.push_back(1e-3 * std::pow(700.0, i / 7.0));
    for (int i = 0; i < 7; ++i) positive_y.push_back(1.2 * std::pow(5.0, i / 6.0));

    double worst_negative = 0.0;
    double worst_positive = 0.0;
    for (double eps : {0.05, 0.1, 0.3, 1.0, 3.0}) {
      two_channel::Params p{1.0, 0.0, eps, 1.0};
      const double scale = 2.0 / (p.mass * eps * eps);  // E = y^2 * scale
      for (double y : negative_y) {
        const double energy = -y * y * scale;
        const double closed = two_channel::loop_integral(p, energy).real();
        const double oracle = loop_integral_quadrature(p, energy);
        worst_negative = std::max(worst_negative, std::fabs(closed - oracle) / std::fabs(oracle));
      }
      for (double y : positive_y) {
        const double energy = y * y * scale;
        const double closed = two_channel::loop_integral(p, energy).real();
        const double oracle = loop_integral_quadrature(p, energy);
        const double r = std::fabs(closed - oracle) / std::fabs(oracle);
        if (!(r <= worst_positive)) {
          worst_positive = r;
          c.details["worst_positive"] = {{"eps", eps}, {"E", energy}, {"closed", closed}, {"oracle", oracle}};
        }
      }
    }
    c.details["worst_negative_energy"] = worst_negative;
    c.details["worst_positive_energy"] = worst_positive;
    c.details["threshold_negative"] = 1e-10;
    c.details["threshold_positive"] = 1e-8;
    c.value = std::max(worst_negative / 1e-10, worst_positive / 1e-8);
    c.threshold = 1.0;  // value is the worst error in units of its threshold
    c.passed = worst_negative < 1e-10 && worst_positive < 1e-8;
  });
}

Criterion effective_parameter_mapping(const Options& opt) {
  return timed(7, "effective-parameter mapping", 30.0, [&](Criterion& c) {
    io::Rng rng(opt.seed + 7);
    double worst_fit = 0.0;
    double worst_coupling = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double eps = rng.log_uniform(0.02, 0.5);
      const double mass = rng.uniform(0.5, 2.0);
      const double rstar = rng.log_uniform(0.2, 5.0);
      const double a = rng.uniform(0.5, 5.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
      const auto p = two_channel::params_for(a, rstar, eps, mass);
      const auto eff = two_channel::effective_params(p, {1e-6, 1e-3, 41, 1.0});
      const double fit = std::max(eff.rel_error_a, eff.rel_error_rstar);
      if (!(fit <= worst_fit)) {
        worst_fit = fit;
        c.details["worst_fit"] = {{"a", a}, {"rstar", rstar}, {"eps", eps}, {"mass", mass},
                                  {"rel_error_a", eff.rel_error_a},
                                  {"rel_error_rstar", eff.rel_error_rstar}};
      }
      const double expected = 2.0 * pi / (mass * mass * p.lambda * p.lambda);
      worst_coupling = std::max(worst_coupling, std::fabs(eff.coupling_term - expected) / expected);
      // Rebuilding Lambda from the coupling term closes the loop.
      const double lambda_back = two_channel::lambda_from_rstar(eff.coupling_term, mass);
      worst_coupling = std::max(worst_coupling, std::fabs(lambda_back - p.lambda) / p.lambda);
    }
    c.details["worst_fit_error"] = worst_fit;
    c.details["worst_coupling_error"] = worst_coupling;
    c.value = worst_fit;
    c.threshold = 1e-6;
    c.passed = worst_fit < 1e-6 && worst_coupling < 1e-12;
  });
}

Criterion zero_range_limit(const Options&) {
  return timed(8, "zero-range limit", 120.0, [&](Criterion& c) {
    const auto& seq = zero_range_sequence();
    const double e0 = -zero_range_q * zero_range_q;
    std::vector<double> errors;
    json rows = json::array();
    double worst_a = 0.0;
    for (const auto& pt : seq) {
      errors.push_back(std::fabs(pt.state.energy - e0));
      worst_a = std::max(worst_a, std::fabs(pt.effective.a_fit - 1.0));
      rows.push_back({{"eps", pt.eps}, {"E", pt.state.energy}, {"error", errors.back()},
                      {"a_fit", pt.effective.a_fit}, {"rstar_fit", pt.effective.rstar_fit}});
    }
    bool ratios_ok = true;
    json ratios = json::array();
    for (std::size_t i = 1; i < errors.size(); ++i) {
      const double r = errors[i - 1] / errors[i];
      ratios.push_back(r);
      ratios_ok = ratios_ok && std::fabs(r - 2.0) <= 0.5;
    }

    // Least-squares quadratic in eps through R*_fit - 1; its linear
    // coefficient is the measured slope.
    std::array<std::array<double, 4>, 3> n{};
    for (const auto& pt : seq) {
      const std::array<double, 3> basis{1.0, pt.eps, pt.eps * pt.eps};
      for (int r = 0; r < 3; ++r) {
        for (int col = 0; col < 3; ++col) n[r][col] += basis[r] * basis[col];
        n[r][3] += basis[r] * (pt.effective.rstar_fit - 1.0);
      }
    }
    for (int col = 0; col < 3; ++col) {
      for (int r = 0; r < 3; ++r) {
        if (r == col) continue;
        const double f = n[r][col] / n[col][col];
        for (int k = col; k < 4; ++k) n[r][k] -= f * n[col][k];
      }
    }
    const double slope = n[1][3] / n[1][1];
    const double expected_slope = -std::sqrt(2.0 / pi);
    const double slope_error = std::fabs(slope / expected_slope - 1.0);

    c.details["sequence"] = rows;
    c.details["error_ratios"] = ratios;
    c.details["rstar_slope"] = slope;
    c.details["rstar_slope_error"] = slope_error;
    c.details["worst_a_deviation"] = worst_a;
    c.value = slope_error;
    c.threshold = 0.05;
    c.passed = ratios_ok && slope_error < 0.05 && worst_a < 1e-6;
  });
}

Criterion molecular_identity(const Options&) {
  return timed(9, "molecular-contribution identity", 120.0, [&](Criterion& c) {
    const auto& seq = zero_range_sequence();
    double worst_exact = 0.0;
    bool monotone = true;
    json rows = json::array();
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const auto& id = seq[i].identity;
      worst_exact = std::max(worst_exact, id.residual_exact);
      if (i > 0 && !(id.residual1 < seq[i - 1].identity.residual1)) monotone = false;
      rows.push_back({{"eps", seq[i].eps}, {"beta2", seq[i].state.beta2},
                      {"A2_tail", seq[i].state.A_tail * seq[i].state.A_tail},
                      {"residual1", id.residual1}, {"residual2", id.residual2},
                      {"residual_exact", id.residual_exact}});
    }
    const auto& last = seq.back();
    const double final_residual = last.identity.residual1;
    const double fraction_error = std::fabs(last.state.beta2 - zero_range_fraction) / zero_range_fraction;
    c.details["sequence"] = rows;
    c.details["exact_identity_worst"] = worst_exact;
    c.details["monotone"] = monotone;
    c.details["final_residual1"] = final_residual;
    c.details["beta2_limit"] = zero_range_fraction;
    c.details["beta2_error"] = fraction_error;
    c.value = final_residual;
    c.threshold = 0.02;
    c.passed = worst_exact < 64.0 * std::numeric_limits<double>::epsilon() && monotone &&
               final_residual < 0.02 && fraction_error < 0.02;
  });
}

std::vector<units::ResonanceData> synthetic_species() {
  static const char* table =
      "species,mass_amu,C6_au,B0_G,DeltaB_G,abg_a0,dmu_muB\n"
      "Na23,22.9897692820,1556,907,1,63,3.8\n"
      "Li7,7.016003437,1393.39,736.8,-192.3,-25,1.93\n"
      "Cs133,132.905451961,6890,-11.7,0.0283,1720,1.0\n";
  std::istringstream in(table);
  return io::parse_species(in, "<synthetic>");
}

Criterion feshbach_layer(const Options&) {
  return timed(10, "Feshbach layer", 1.0, [&](Criterion& c) {
    double worst_far = 0.0;
    double worst_round_trip = 0.0;
    bool zeros_exact = true;
    for (const auto& si_res : synthetic_species()) {
      for (const auto& system : {units::UnitSystem::si_units(), units::UnitSystem::atomic(),
                                 units::natural_units_for(si_res)}) {
        const auto res = units::convert(si_res, system);
        for (double sign : {-1.0, 1.0}) {
          const double field = res.b0 + sign * 1e6 * std::fabs(res.delta_b);
          const double a = units::scattering_length_of_field(res, field);
          worst_far = std::max(worst_far, std::fabs(a - res.a_bg) / std::fabs(res.a_bg));
        }
        zeros_exact = zeros_exact && units::scattering_length_of_field(res, res.b0 + res.delta_b) == 0.0;
        const double rstar = units::width_radius(res);
        const double hbar = res.units.hbar();
        const double product = rstar * res.mass * res.a_bg * res.dmu * res.delta_b / (hbar * hbar);
        worst_round_trip = std::max(worst_round_trip, std::fabs(product - 1.0));
      }
    }
    c.details["far_detuning_error"] = worst_far;
    c.details["zero_exact"] = zeros_exact;
    c.details["round_trip_error"] = worst_round_trip;
    c.value = worst_far;
    c.threshold = 1e-5;
    c.passed = worst_far < 1e-5 && zeros_exact && worst_round_trip < 1e-12;
  });
}

std::vector<Criterion> run(Group group, const Options& opt) {
  std::vector<Criterion> out;
  const auto want = [group](Group g) { return group == Group::all || group == g; };
  if (want(Group::unitarity)) {
    out.push_back(one_channel_unitarity(opt));
    out.push_back(two_channel_unitarity(opt));
  }
  if (want(Group::orthogonality)) {
    out.push_back(orthogonality(opt));
    out.push_back(series_quotient_equivalence(opt));
    out.push_back(normalization_consistency(opt));
  }
  if (want(Group::mapping)) {
    out.push_back(loop_integral_agreement(opt));
    out.push_back(effective_parameter_mapping(opt));
    out.push_back(zero_range_limit(opt));
  }
  if (want(Group::identity)) out.push_back(molecular_identity(opt));
  if (want(Group::feshbach)) out.push_back(feshbach_layer(opt));
  return out;
}

json to_json(const Criterion& c) {
  return {{"id", c.id},           {"name", c.name},       {"passed", c.passed},
          {"value", c.value},     {"threshold", c.threshold}, {"seconds", c.seconds},
          {"time_limit", c.time_limit}, {"details", c.details}};
}

}  // namespace resokit::verify

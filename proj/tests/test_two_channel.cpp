#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "resokit/bound_states.hpp"
#include "resokit/two_channel.hpp"

using namespace resokit;
namespace tc = resokit::two_channel;

namespace {

double rel(double got, double want) { return std::fabs(got - want) / std::fabs(want); }
constexpr double pi = std::numbers::pi;

}  // namespace

TEST_CASE("loop integral matches frozen reference values") {
  const std::vector<std::tuple<double, double, double, double>> table{
      {0.0, 1.0, -0.063493635934240969786, 0.0},
      {1.0, 1.0, -0.017474816325065472334, -0.048266176315026953771},
      {-100.0, 0.3, -0.018249997760126510694, 0.0},
      {-3.0, 0.3, -0.11646742237760924144, 0.0},
      {-0.5, 0.3, -0.1637634629451311315, 0.0},
      {-1e-3, 0.3, -0.2091479279278703063, 0.0},
      {-1e-6, 0.3, -0.2115658946871009837, 0.0},
      {1e-3, 0.3, -0.21162640559478873123, -0.0025163473670449948266},
      {0.5, 0.3, -0.20226299088307654469, -0.0550178369992473393},
      {4.0, 0.3, -0.14397041598273164922, -0.13293738296351638464}};
  for (const auto& [e, eps, re, im] : table) {
    const auto got = tc::loop_integral({1.0, 0.0, eps, 1.0}, e);
    INFO("E = " << e << " eps = " << eps);
    CHECK(rel(got.real(), re) < 1e-14);
    if (im == 0.0) {
      CHECK(got.imag() == 0.0);
    } else {
      CHECK(rel(got.imag(), im) < 1e-14);
    }
  }
}

TEST_CASE("loop integral matches double-exponential quadrature, including mass scaling") {
  for (double mass : {1.0, 2.5}) {
    for (double eps : {0.07, 0.5, 2.0}) {
      for (double y : {-40.0, -3.0, -0.2, -1e-4, 0.0, 1e-4, 0.3, 2.0, 30.0}) {
        const double e = y / (mass * eps * eps);
        const double got = tc::loop_integral({1.0, 0.0, eps, mass}, e).real();
        INFO("mass = " << mass << " eps = " << eps << " E = " << e);
        CHECK(rel(got, oracle::loop_integral_real(e, eps, mass)) < 1e-11);
      }
    }
  }
}

TEST_CASE("two-channel amplitude at a reference point") {
  const tc::Params p{std::sqrt(2.0 * pi), 0.0, 0.1, 1.0};
  const auto f = tc::amplitude(p, 0.01);
  CHECK(rel(f.real(), -0.12516116110664513633) < 1e-13);
  CHECK(rel(f.imag(), 0.0015667771040057215723) < 1e-12);
  const auto eff = tc::effective_params(p);
  CHECK(rel(eff.a_eps, 0.12533141373155002512) < 1e-14);
  CHECK(rel(eff.inv_a_eps, 7.9788456080286535588) < 1e-14);
}

TEST_CASE("E_mol for a target scattering length") {
  tc::Params p{std::sqrt(2.0 * pi), 0.0, 0.1, 1.0};
  p.e_mol = tc::emol_for_target_a(1.0, p);
  CHECK(rel(p.e_mol, 6.9788456080286535588) < 1e-14);
  CHECK(rel(tc::effective_params(p).a_eps, 1.0) < 1e-13);
  CHECK_THROWS_AS(tc::emol_for_target_a(0.0, p), Error);
}

TEST_CASE("R* and Lambda are inverse maps") {
  for (double mass : {0.5, 1.0, 3.0}) {
    for (double rstar : {0.01, 1.0, 40.0}) {
      CHECK(rel(tc::rstar_from_lambda(tc::lambda_from_rstar(rstar, mass), mass), rstar) < 1e-15);
    }
  }
  CHECK_THROWS_AS(tc::lambda_from_rstar(-1.0, 1.0), Error);
}

TEST_CASE("closed-form effective parameters agree with the low-energy fit") {
  for (double eps : {0.03, 0.2}) {
    for (double mass : {1.0, 1.7}) {
      const auto p = tc::params_for(-2.0, 0.7, eps, mass);
      const auto eff = tc::effective_params(p);
      CHECK(eff.rel_error_a < 1e-8);
      CHECK(eff.rel_error_rstar < 1e-6);
      CHECK(rel(eff.coupling_term, 0.7) < 1e-14);
      CHECK(rel(eff.a_eps, -2.0) < 1e-13);
    }
  }
}

TEST_CASE("zero-range model carries the same (a, R*)") {
  const auto p = tc::params_for(1.0, 1.0, 0.05);
  const auto m = tc::zero_range_model(p);
  CHECK(rel(m.scattering_length(), 1.0) < 1e-13);
  CHECK(rel(m.width_radius(), 1.0) < 1e-14);
}

TEST_CASE("bound state: norm split, identities and wavefunction") {
  const auto p = tc::params_for(1.0, 1.0, 0.1);
  const auto s = tc::bound_state(p);
  CHECK(s.energy < 0.0);
  CHECK(std::fabs(tc::detail::denominator(p, s.energy).real()) < 1e-13);
  // Norm from an independent quadrature of |psi|^2.
  const double open = 2.0 * p.lambda * p.lambda * s.beta2 * oracle::resolvent_square(s.energy, p.eps, p.mass);
  CHECK(std::fabs(open - s.open_norm) < 1e-10);
  CHECK(std::fabs(s.open_norm + s.beta2 - 1.0) < 1e-14);
  // beta^2 = 4 pi R* A^2 with A from beta holds to rounding.
  const double rstar = tc::rstar_from_lambda(p.lambda, p.mass);
  CHECK(rel(4.0 * pi * rstar * s.A_exact * s.A_exact, s.beta2) < 1e-14);
  // Tail amplitude approaches A from beta.
  CHECK(rel(s.A_tail, s.A_exact) < 0.02);
  CHECK(tc::open_wavefunction(p, s, 1.0) < 0.0);
  const auto report = tc::product_identity_check(p, s, p, s);
  CHECK(report.residual_exact < 1e-14);
  CHECK(std::fabs(report.total - 1.0) < 1e-12);
}

TEST_CASE("bound-state energy converges linearly to the effective-range pole") {
  const double e0 = -std::pow(0.5 * (std::sqrt(5.0) - 1.0), 2);
  const double coarse = std::fabs(tc::bound_state(tc::params_for(1.0, 1.0, 0.08)).energy - e0);
  const double fine = std::fabs(tc::bound_state(tc::params_for(1.0, 1.0, 0.04)).energy - e0);
  CHECK(coarse / fine == Catch::Approx(2.0).margin(0.5));
}

TEST_CASE("two-channel errors") {
  CHECK_THROWS_AS(tc::validate({1.0, 0.0, 0.0, 1.0}), Error);
  CHECK_THROWS_AS(tc::validate({0.0, 0.0, 1.0, 1.0}), Error);
  // Far above threshold the molecule cannot bind.
  const tc::Params unbound{0.1, 1e4, 0.5, 1.0};
  CHECK_THROWS_MATCHES(tc::bound_state(unbound), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::no_bound_state;
                       }));
  const auto p1 = tc::params_for(1.0, 1.0, 0.1);
  const auto p2 = tc::params_for(1.0, 2.0, 0.1);
  const auto s1 = tc::bound_state(p1);
  const auto s2 = tc::bound_state(p2);
  CHECK_THROWS_MATCHES(tc::product_identity_check(p1, s1, p2, s2), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::parameter_mismatch;
                       }));
}

TEST_CASE("open overlap of a state with itself is its open norm") {
  const auto p = tc::params_for(1.0, 1.0, 0.1);
  const auto s = tc::bound_state(p);
  CHECK(std::fabs(tc::open_overlap(p, s, s) - s.open_norm) < 1e-12);
}

TEST_CASE("loop integral near the zero of its real part, in absolute terms") {
  const double eps = 0.3;
  const double scale = std::fabs(tc::loop_integral({1.0, 0.0, eps, 1.0}, 0.0).real());
  for (double y : {0.85, 0.92, 0.9241388730, 0.93, 1.0}) {
    const double e = 2.0 * y * y / (eps * eps);
    const double got = tc::loop_integral({1.0, 0.0, eps, 1.0}, e).real();
    INFO("y = " << y);
    CHECK(std::fabs(got - oracle::loop_integral_real(e, eps)) < 1e-12 * scale);
  }
}

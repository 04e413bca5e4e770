#pragma once

// Unit systems and the magnetic Feshbach-resonance parameterization.
//
// A UnitSystem records the SI value of its length, energy, field and mass
// units together with the value of hbar expressed in it. Three modes exist:
//
//   si       metre, joule, tesla, kilogram; hbar = 1.054571817e-34
//   atomic   bohr, hartree, atomic field unit, electron mass; hbar = 1
//   natural  hbar = 1 and the atom mass = 1, lengths in a chosen reference
//            length (bohr by default), fields in gauss. The energy unit is
//            hbar^2/(m L^2), so the relative energy of a pair is E = k^2.
//
// Contact-model modules work in natural units only; conversion happens at the
// boundary through convert().

#include <cmath>
#include <string>
#include <string_view>

#include "resokit/error.hpp"

namespace resokit::units {

namespace si {
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double electron_mass = 9.1093837015e-31;      // kg
inline constexpr double bohr = 5.29177210903e-11;        // m
inline constexpr double hartree = 4.3597447222071e-18;   // J
inline constexpr double bohr_magneton = 9.2740100783e-24;  // J/T
inline constexpr double gauss = 1e-4;                    // T
}  // namespace si

enum class Mode { natural, si, atomic };

constexpr std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::natural: return "natural";
    case Mode::si: return "si";
    case Mode::atomic: return "atomic";
  }
  return "unknown";
}

inline Mode parse_mode(std::string_view text) {
  if (text == "natural") return Mode::natural;
  if (text == "si") return Mode::si;
  if (text == "atomic") return Mode::atomic;
  throw Error(ErrorCode::invalid_input, "unknown unit mode '" + std::string(text) + "'");
}

enum class Dimension {
  length,
  energy,
  field,
  mass,
  moment,  // energy per field
  c6,      // energy * length^6
};

class UnitSystem {
 public:
  static UnitSystem si_units() {
    return UnitSystem(Mode::si, 1.0, 1.0, 1.0, 1.0, si::hbar);
  }

  static UnitSystem atomic() {
    // Field and mass units follow from hartree, bohr and mu_B so that hbar = 1
    // and mu_B = 1/2 hold exactly; the rounded CODATA values disagree at 1e-9.
    const double field = si::hartree / (2.0 * si::bohr_magneton);
    const double mass = si::hbar * si::hbar / (si::hartree * si::bohr * si::bohr);
    return UnitSystem(Mode::atomic, si::bohr, si::hartree, field, mass, 1.0);
  }

  /// hbar = 1, atom mass = 1, lengths measured in `length_m` metres.
  static UnitSystem natural(double mass_kg, double length_m = si::bohr,
                            double field_T = si::gauss) {
    if (!(mass_kg > 0.0) || !(length_m > 0.0) || !(field_T > 0.0)) {
      throw Error(ErrorCode::invalid_input, "natural unit scales must be positive");
    }
    const double energy = si::hbar * si::hbar / (mass_kg * length_m * length_m);
    return UnitSystem(Mode::natural, length_m, energy, field_T, mass_kg, 1.0);
  }

  Mode mode() const { return mode_; }
  double hbar() const { return hbar_; }

  /// SI value of one unit of the given dimension.
  double unit_in_si(Dimension dim) const {
    switch (dim) {
      case Dimension::length: return length_;
      case Dimension::energy: return energy_;
      case Dimension::field: return field_;
      case Dimension::mass: return mass_;
      case Dimension::moment: return energy_ / field_;
      case Dimension::c6: return energy_ * std::pow(length_, 6);
    }
    return 1.0;
  }

  bool operator==(const UnitSystem&) const = default;

 private:
  UnitSystem(Mode mode, double length, double energy, double field, double mass, double hbar)
      : mode_(mode), length_(length), energy_(energy), field_(field), mass_(mass), hbar_(hbar) {}

  Mode mode_;
  double length_;
  double energy_;
  double field_;
  double mass_;
  double hbar_;
};

/// Converts `value` of dimension `dim` from system `from` into system `to`.
inline double convert(double value, Dimension dim, const UnitSystem& from, const UnitSystem& to) {
  if (from == to) return value;
  return value * (from.unit_in_si(dim) / to.unit_in_si(dim));
}

/// Parameters of one magnetic Feshbach resonance, expressed in `units`.
struct ResonanceData {
  std::string species;
  double a_bg = 0.0;     // background scattering length
  double delta_b = 0.0;  // resonance width
  double b0 = 0.0;       // resonance position
  double dmu = 0.0;      // differential magnetic moment (energy per field)
  double c6 = 0.0;       // London constant
  double mass = 0.0;     // atom mass
  UnitSystem units = UnitSystem::si_units();
};

inline void validate(const ResonanceData& res) {
  if (res.delta_b == 0.0) {
    throw Error(ErrorCode::degenerate_resonance, "resonance width DeltaB must be non-zero");
  }
  if (!(res.mass > 0.0)) throw Error(ErrorCode::invalid_input, "mass must be positive");
  if (!(res.c6 > 0.0)) throw Error(ErrorCode::invalid_input, "C6 must be positive");
}

inline ResonanceData convert(const ResonanceData& res, const UnitSystem& to) {
  ResonanceData out = res;
  const UnitSystem& from = res.units;
  out.a_bg = convert(res.a_bg, Dimension::length, from, to);
  out.delta_b = convert(res.delta_b, Dimension::field, from, to);
  out.b0 = convert(res.b0, Dimension::field, from, to);
  out.dmu = convert(res.dmu, Dimension::moment, from, to);
  out.c6 = convert(res.c6, Dimension::c6, from, to);
  out.mass = convert(res.mass, Dimension::mass, from, to);
  out.units = to;
  return out;
}

/// The natural system attached to this resonance's atom: hbar = m = 1.
inline UnitSystem natural_units_for(const ResonanceData& res, double length_m = si::bohr) {
  return UnitSystem::natural(convert(res.mass, Dimension::mass, res.units, UnitSystem::si_units()),
                             length_m);
}

/// a(B) = a_bg (1 - DeltaB / (B - B0)).
inline double scattering_length_of_field(const ResonanceData& res, double field) {
  const double detuning = field - res.b0;
  if (detuning == 0.0) {
    throw Error(ErrorCode::pole_at_resonance, "scattering length diverges at B = B0");
  }
  // Written as (B - (B0 + DeltaB)) / (B - B0) so the zero at B = B0 + DeltaB is exact.
  return res.a_bg * ((field - (res.b0 + res.delta_b)) / detuning);
}

/// Width radius R* = hbar^2 / (m a_bg dmu DeltaB).
inline double width_radius(const ResonanceData& res) {
  const double denom = res.mass * res.a_bg * res.dmu * res.delta_b;
  if (denom == 0.0) {
    throw Error(ErrorCode::degenerate_resonance, "a_bg * dmu * DeltaB vanishes");
  }
  const double hbar = res.units.hbar();
  return hbar * hbar / denom;
}

/// van der Waals length (mu C6 / hbar^2)^(1/4), mu = mass/2 (identical atoms).
inline double vdw_length(const ResonanceData& res) {
  if (!(res.c6 > 0.0)) throw Error(ErrorCode::invalid_input, "C6 must be positive");
  if (!(res.mass > 0.0)) throw Error(ErrorCode::invalid_input, "mass must be positive");
  const double hbar = res.units.hbar();
  const double reduced_mass = 0.5 * res.mass;
  return std::sqrt(std::sqrt(reduced_mass * res.c6 / (hbar * hbar)));
}

enum class ResonanceClass { broad, narrow };

constexpr std::string_view to_string(ResonanceClass c) {
  return c == ResonanceClass::narrow ? "narrow" : "broad";
}

/// Narrow iff |R*| / R_vdW > threshold.
inline ResonanceClass classify_resonance(const ResonanceData& res, double threshold = 1.0) {
  const double ratio = std::fabs(width_radius(res)) / vdw_length(res);
  return ratio > threshold ? ResonanceClass::narrow : ResonanceClass::broad;
}

}  // namespace resokit::units

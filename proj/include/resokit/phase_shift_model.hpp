#pragma once

// One-channel contact models defined by g(E) = k cot(delta_s(k)), stored as a
// polynomial in the relative energy. Natural units: hbar = m = 1, E = k^2.

#include <cmath>
#include <cctype>
#include <charconv>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "resokit/error.hpp"

namespace resokit {

class PhaseShiftModel {
 public:
  PhaseShiftModel() : coeffs_{0.0} {}

  /// g(E) = sum_n coeffs[n] E^n. Trailing zeros are dropped.
  explicit PhaseShiftModel(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    for (double c : coeffs_) {
      if (!std::isfinite(c)) throw Error(ErrorCode::invalid_input, "non-finite coefficient");
    }
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(0.0);
  }

  /// g(E) = -1/a - R* k^2.
  static PhaseShiftModel from_effective_range(double a, double rstar) {
    if (a == 0.0 || !std::isfinite(a) || !std::isfinite(rstar)) {
      throw Error(ErrorCode::invalid_input, "effective-range model needs finite a != 0");
    }
    return PhaseShiftModel({-1.0 / a, -rstar});
  }

  /// Wigner-Bethe-Peierls model, g = -1/a.
  static PhaseShiftModel wbp(double a) { return from_effective_range(a, 0.0); }

  std::span<const double> coeffs() const { return coeffs_; }
  std::size_t degree() const { return coeffs_.size() - 1; }

  double coeff(std::size_t n) const { return n < coeffs_.size() ? coeffs_[n] : 0.0; }

  double g(double energy) const {
    double r = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * energy + *it;
    return r;
  }

  double g_prime(double energy) const {
    double r = 0.0;
    for (std::size_t n = coeffs_.size() - 1; n >= 1; --n) {
      r = r * energy + static_cast<double>(n) * coeffs_[n];
    }
    return r;
  }

  /// (g(e1) - g(e2)) / (e1 - e2), evaluated by deflating g at e2 (synthetic
  /// division) and evaluating the quotient at e1. Exact algebraically for
  /// any e1, e2 and free of the cancellation of the naive quotient; equals
  /// g'(e1) when e1 == e2.
  double divided_difference(double e1, double e2) const {
    // g(x) = (x - e2) Q(x) + g(e2); the Horner partial sums at e2 are Q's
    // coefficients, highest degree first.
    double quotient = 0.0;
    double partial = 0.0;
    for (std::size_t n = coeffs_.size() - 1; n >= 1; --n) {
      partial = partial * e2 + coeffs_[n];
      quotient = quotient * e1 + partial;
    }
    return quotient;
  }

  /// a = -1/c0.
  double scattering_length() const {
    if (coeffs_[0] == 0.0) {
      throw Error(ErrorCode::invalid_input, "c0 = 0: scattering length is infinite");
    }
    return -1.0 / coeffs_[0];
  }

  /// R* = -c1 (meaningful for the effective-range case).
  double width_radius() const { return -coeff(1); }

  /// r_e from k cot(delta) = -1/a + r_e k^2 / 2; equals -2 R*.
  double effective_range() const { return 2.0 * coeff(1); }

  /// Energy scale hbar^2/(mu r_e^2) below which the contact description is
  /// meaningful. Documented only; nothing enforces it.
  double validity_scale() const {
    const double re = effective_range();
    if (re == 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 / (re * re);
  }

  bool operator==(const PhaseShiftModel&) const = default;

 private:
  std::vector<double> coeffs_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::parse_error, "invalid number '" + std::string(text) + "'");
  }
  return value;
}

inline std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_double(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

/// Parses `g = [c0, c1, ...]` or `a=<val> rstar=<val>` (rstar optional).
inline PhaseShiftModel parse_model(std::string_view text) {
  using detail::trim;
  text = trim(text);
  if (text.starts_with("g")) {
    const auto open = text.find('[');
    const auto close = text.rfind(']');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
      throw Error(ErrorCode::parse_error, "expected g = [c0, c1, ...]");
    }
    auto coeffs = detail::parse_list(text.substr(open + 1, close - open - 1));
    if (coeffs.empty()) throw Error(ErrorCode::parse_error, "empty coefficient list");
    return PhaseShiftModel(std::move(coeffs));
  }
  double a = std::numeric_limits<double>::quiet_NaN();
  double rstar = 0.0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    const std::string_view token = text.substr(pos, end - pos);
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::parse_error, "expected key=value, got '" + std::string(token) + "'");
    }
    const auto key = token.substr(0, eq);
    const double value = detail::parse_double(token.substr(eq + 1));
    if (key == "a") {
      a = value;
    } else if (key == "rstar") {
      rstar = value;
    } else {
      throw Error(ErrorCode::parse_error, "unknown model key '" + std::string(key) + "'");
    }
    pos = end;
  }
  if (std::isnan(a)) throw Error(ErrorCode::parse_error, "model literal needs a=<value>");
  return PhaseShiftModel::from_effective_range(a, rstar);
}

}  // namespace resokit

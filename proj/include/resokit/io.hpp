#pragma once

// Input/output plumbing: species CSV ingestion, `key = value` config files,
// locale-independent CSV tables, sweep grids and the deterministic RNG used
// by the randomized checks.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "resokit/error.hpp"
#include "resokit/phase_shift_model.hpp"
#include "resokit/units.hpp"

namespace resokit::io {

inline constexpr std::string_view species_header = "species,mass_amu,C6_au,B0_G,DeltaB_G,abg_a0,dmu_muB";

namespace detail {

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string where(std::string_view source, std::size_t line, std::size_t column) {
  std::string s(source);
  s += ":" + std::to_string(line);
  if (column > 0) s += ":" + std::to_string(column);
  return s;
}

}  // namespace detail

/// Parses species rows into SI ResonanceData. Comment (`#`) and blank lines
/// are skipped; errors carry `source:line[:column]`.
inline std::vector<units::ResonanceData> parse_species(std::istream& in,
                                                       std::string_view source = "<species>") {
  using resokit::detail::trim;
  namespace si = units::si;
  std::vector<units::ResonanceData> rows;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      std::string compact;
      for (char c : line) {
        if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
      }
      if (compact != species_header) {
        throw Error(ErrorCode::parse_error,
                    detail::where(source, line_no, 0) + ": expected header '" +
                        std::string(species_header) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = detail::split(line, ',');
    if (fields.size() != 7) {
      throw Error(ErrorCode::parse_error, detail::where(source, line_no, 0) + ": expected 7 fields, got " +
                                              std::to_string(fields.size()));
    }
    std::array<double, 6> v{};
    for (std::size_t i = 1; i < 7; ++i) {
      try {
        v[i - 1] = resokit::detail::parse_double(fields[i]);
      } catch (const Error& e) {
        throw Error(ErrorCode::parse_error, detail::where(source, line_no, i + 1) + ": " + e.what());
      }
    }
    units::ResonanceData r;
    r.species = std::string(trim(fields[0]));
    r.mass = v[0] * si::atomic_mass_unit;
    r.c6 = v[1] * si::hartree * std::pow(si::bohr, 6);
    r.b0 = v[2] * si::gauss;
    r.delta_b = v[3] * si::gauss;
    r.a_bg = v[4] * si::bohr;
    r.dmu = v[5] * si::bohr_magneton;
    r.units = units::UnitSystem::si_units();
    const std::array<double, 6> converted{r.mass, r.c6, r.b0, r.delta_b, r.a_bg, r.dmu};
    for (std::size_t i = 0; i < converted.size(); ++i) {
      if (!std::isfinite(converted[i])) {
        throw Error(ErrorCode::unit_error, detail::where(source, line_no, i + 2) +
                                               ": value not representable in SI units");
      }
    }
    try {
      units::validate(r);
    } catch (const Error& e) {
      throw Error(e.code(), detail::where(source, line_no, 0) + ": " + e.what());
    }
    rows.push_back(std::move(r));
  }
  if (!header_seen) {
    throw Error(ErrorCode::parse_error, std::string(source) + ": missing species header");
  }
  return rows;
}

inline std::vector<units::ResonanceData> load_species(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_input, "cannot open species file " + path.string());
  return parse_species(in, path.string());
}

/// `key = value` lines; `#` starts a comment line. Later keys override earlier ones.
inline std::map<std::string, std::string> parse_config(std::istream& in,
                                                       std::string_view source = "<config>") {
  using resokit::detail::trim;
  std::map<std::string, std::string> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::parse_error, detail::where(source, line_no, 0) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorCode::parse_error, detail::where(source, line_no, 0) + ": empty key");
    out[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

inline std::map<std::string, std::string> load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_input, "cannot open config file " + path.string());
  return parse_config(in, path.string());
}

/// 17 significant digits with '.' as decimal point, independent of locale.
inline std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline std::string format_cell(const Cell& cell) {
  if (const double* d = std::get_if<double>(&cell)) return format_double(*d);
  return std::get<std::string>(cell);
}

inline void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

/// Reads a table written by write_csv; numeric-looking cells become doubles.
inline Table read_csv(std::istream& in) {
  Table t;
  std::string raw;
  if (!std::getline(in, raw)) throw Error(ErrorCode::parse_error, "empty CSV input");
  for (auto c : detail::split(raw, ',')) t.columns.emplace_back(c);
  while (std::getline(in, raw)) {
    if (raw.empty()) continue;
    std::vector<Cell> row;
    for (auto c : detail::split(raw, ',')) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec == std::errc() && ptr == c.data() + c.size() && !c.empty()) {
        row.emplace_back(v);
      } else {
        row.emplace_back(std::string(c));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

enum class SweepVariable { k, energy, field, eps };
enum class SweepScale { linear, log };

struct SweepPlan {
  SweepVariable variable = SweepVariable::k;
  double min = 0.0;
  double max = 1.0;
  int steps = 2;
  SweepScale scale = SweepScale::linear;

  void validate() const {
    if (!(min < max)) throw Error(ErrorCode::invalid_input, "sweep needs min < max");
    if (steps < 2) throw Error(ErrorCode::invalid_input, "sweep needs steps >= 2");
    if (scale == SweepScale::log && !(min > 0.0)) {
      throw Error(ErrorCode::invalid_input, "log sweep needs min > 0");
    }
  }

  /// Grid values; endpoints exact.
  std::vector<double> values() const {
    validate();
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
      const double t = static_cast<double>(i) / (steps - 1);
      v[static_cast<std::size_t>(i)] = scale == SweepScale::log
                                           ? min * std::pow(max / min, t)
                                           : min + (max - min) * t;
    }
    v.front() = min;
    v.back() = max;
    return v;
  }
};

/// Deterministic uniform draws: identical sequences on every platform for a
/// given seed (std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi) { return lo * std::pow(hi / lo, uniform()); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

inline constexpr std::uint64_t default_seed = 20111104;

}  // namespace resokit::io

#pragma once

// The invariant battery behind `resokit verify`. Each criterion is one
// numbered check with a pinned threshold; the acceptance suite runs the same
// battery and adds its own independent oracles on top.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "resokit/units.hpp"

namespace resokit::verify {

enum class Group { all, unitarity, orthogonality, mapping, identity, feshbach };

Group parse_group(std::string_view name);

struct Criterion {
  int id = 0;
  std::string name;
  bool passed = false;
  double value = 0.0;      // worst observed residual / error
  double threshold = 0.0;  // pass iff value < threshold (plus any sub-checks in details)
  double seconds = 0.0;
  double time_limit = 0.0;
  nlohmann::json details;
};

struct Options {
  std::uint64_t seed = 20111104;
};

Criterion one_channel_unitarity(const Options& opt);        // 1
Criterion two_channel_unitarity(const Options& opt);        // 2
Criterion orthogonality(const Options& opt);                // 3
Criterion series_quotient_equivalence(const Options& opt);  // 4
Criterion normalization_consistency(const Options& opt);    // 5
Criterion loop_integral_agreement(const Options& opt);      // 6
Criterion effective_parameter_mapping(const Options& opt);  // 7
Criterion zero_range_limit(const Options& opt);             // 8
Criterion molecular_identity(const Options& opt);           // 9
Criterion feshbach_layer(const Options& opt);               // 10

/// Synthetic species used by criterion 10 (SI units).
std::vector<units::ResonanceData> synthetic_species();

std::vector<Criterion> run(Group group, const Options& opt);

nlohmann::json to_json(const Criterion& c);

}  // namespace resokit::verify

#pragma once

#include <span>
#include <string>
#include <vector>

#include "frmsm/types.hpp"

namespace frmsm {

struct PolarMinutia {
  double r = 0.0;      // pixels from the reference minutia
  double phi = 0.0;    // degrees, direction from the reference
  double theta = 0.0;  // degrees, orientation relative to the reference
};

struct MatchConfig {
  double r_tol = 10.0;
  double phi_tol = 15.0;
  double theta_tol = 20.0;
  bool require_same_type = true;
  double decision_threshold = 0.3;
};

void validate(const MatchConfig& cfg);

enum class Decision { Match, NonMatch };

struct MatchResult {
  std::size_t matched = 0;
  std::size_t nt = 0;
  std::size_t ni = 0;
  double score = 0.0;
  // Reference pair (template index, input index) that gave the best count;
  // (-1, -1) when no pair had compatible types.
  int ref_template = -1;
  int ref_input = -1;
  Decision decision = Decision::NonMatch;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

/// Polar coordinates of every minutia about `ref_index`. `rotate_offset` is
/// added to each radial angle; the reference itself maps to (0, 0, 0).
std::vector<PolarMinutia> polar_transform(const MinutiaeSet& set, std::size_t ref_index,
                                          double rotate_offset = 0.0);

/// Orientation difference between the template and input references, in [0,360).
double rotateval(const Minutia& template_ref, const Minutia& input_ref);

/// Greedy one-to-one pairing. Template points are visited in ascending r;
/// each claims the closest unclaimed input point inside every tolerance,
/// closeness being the sum of the differences scaled by their tolerances.
std::size_t count_matches(std::span<const PolarMinutia> tpl, std::span<const PolarMinutia> inp,
                          std::span<const MinutiaType> tpl_types,
                          std::span<const MinutiaType> inp_types, const MatchConfig& cfg);

/// Best score over all reference pairs: matched / max(NT, NI).
MatchResult match(const MinutiaeSet& tpl, const MinutiaeSet& inp, const MatchConfig& cfg = {});

double score_of(std::size_t matched, std::size_t nt, std::size_t ni);

// Single-line, key-sorted JSON.
std::string to_json(const MatchResult& result);

}  // namespace frmsm

#include "frmsm/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

#include "frmsm/angles.hpp"
#include "frmsm/error.hpp"

namespace frmsm {

void validate(const MatchConfig& cfg) {
  const auto bad = [](double v) { return !(v >= 0.0) || !std::isfinite(v); };
  if (bad(cfg.r_tol) || bad(cfg.phi_tol) || bad(cfg.theta_tol)) {
    throw Error(ErrorCode::InvalidConfig, "match tolerances must be finite and non-negative");
  }
  if (!(cfg.decision_threshold >= 0.0 && cfg.decision_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "decision threshold must be in [0,1]");
  }
}

std::vector<PolarMinutia> polar_transform(const MinutiaeSet& set, std::size_t ref_index,
                                          double rotate_offset) {
  if (set.empty()) throw Error(ErrorCode::EmptySet, "polar transform of an empty set");
  if (ref_index >= set.size()) {
    throw Error(ErrorCode::BadIndex, "reference index " + std::to_string(ref_index) +
                                         " out of range for " + std::to_string(set.size()) +
                                         " minutiae");
  }
  const Minutia& ref = set[ref_index];
  std::vector<PolarMinutia> out;
  out.reserve(set.size());
  for (std::size_t j = 0; j < set.size(); ++j) {
    if (j == ref_index) {
      out.push_back({0.0, 0.0, 0.0});
      continue;
    }
    const Minutia& m = set[j];
    const double d_row = m.row - ref.row;
    const double d_col = m.col - ref.col;
    out.push_back({std::hypot(d_row, d_col),
                   normalize_degrees(direction_degrees(d_row, d_col) + rotate_offset),
                   normalize_degrees(m.theta - ref.theta)});
  }
  return out;
}

double rotateval(const Minutia& template_ref, const Minutia& input_ref) {
  return normalize_degrees(template_ref.theta - input_ref.theta);
}

std::size_t count_matches(std::span<const PolarMinutia> tpl, std::span<const PolarMinutia> inp,
                          std::span<const MinutiaType> tpl_types,
                          std::span<const MinutiaType> inp_types, const MatchConfig& cfg) {
  if (tpl_types.size() != tpl.size() || inp_types.size() != inp.size()) {
    throw Error(ErrorCode::InvalidArgument, "type list length differs from point list length");
  }
  std::vector<std::size_t> order(tpl.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return tpl[a].r < tpl[b].r; });

  const auto scaled = [](double diff, double tol) { return tol > 0.0 ? diff / tol : 0.0; };
  std::vector<bool> claimed(inp.size(), false);
  std::size_t count = 0;
  for (const std::size_t t : order) {
    std::size_t best = inp.size();
    double best_cost = 0.0;
    for (std::size_t i = 0; i < inp.size(); ++i) {
      if (claimed[i]) continue;
      if (cfg.require_same_type && tpl_types[t] != inp_types[i]) continue;
      const double dr = std::fabs(tpl[t].r - inp[i].r);
      const double dphi = circular_distance(tpl[t].phi, inp[i].phi);
      const double dtheta = circular_distance(tpl[t].theta, inp[i].theta);
      if (dr > cfg.r_tol || dphi > cfg.phi_tol || dtheta > cfg.theta_tol) continue;
      const double cost =
          scaled(dr, cfg.r_tol) + scaled(dphi, cfg.phi_tol) + scaled(dtheta, cfg.theta_tol);
      if (best == inp.size() || cost < best_cost) {
        best = i;
        best_cost = cost;
      }
    }
    if (best != inp.size()) {
      claimed[best] = true;
      ++count;
    }
  }
  return count;
}

double score_of(std::size_t matched, std::size_t nt, std::size_t ni) {
  const std::size_t denom = std::max(nt, ni);
  return denom == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(denom);
}

MatchResult match(const MinutiaeSet& tpl, const MinutiaeSet& inp, const MatchConfig& cfg) {
  validate(cfg);
  if (tpl.empty()) throw Error(ErrorCode::EmptyTemplate, "template has no minutiae");
  if (inp.empty()) throw Error(ErrorCode::EmptyInput, "input has no minutiae");

  std::vector<MinutiaType> tpl_types, inp_types;
  for (const auto& m : tpl.minutiae) tpl_types.push_back(m.type);
  for (const auto& m : inp.minutiae) inp_types.push_back(m.type);

  MatchResult result;
  result.nt = tpl.size();
  result.ni = inp.size();
  for (std::size_t k = 0; k < tpl.size(); ++k) {
    const auto tpl_polar = polar_transform(tpl, k, 0.0);
    for (std::size_t m = 0; m < inp.size(); ++m) {
      if (cfg.require_same_type && tpl[k].type != inp[m].type) continue;
      const auto inp_polar = polar_transform(inp, m, rotateval(tpl[k], inp[m]));
      const std::size_t count = count_matches(tpl_polar, inp_polar, tpl_types, inp_types, cfg);
      if (result.ref_template < 0 || count > result.matched) {
        result.matched = count;
        result.ref_template = static_cast<int>(k);
        result.ref_input = static_cast<int>(m);
      }
    }
  }
  result.score = score_of(result.matched, result.nt, result.ni);
  result.decision = result.score > cfg.decision_threshold ? Decision::Match : Decision::NonMatch;
  return result;
}

std::string to_json(const MatchResult& result) {
  const nlohmann::json j = {
      {"score", result.score},
      {"matched", result.matched},
      {"nt", result.nt},
      {"ni", result.ni},
      {"decision", result.decision == Decision::Match ? "match" : "non-match"},
      {"ref_pair", {result.ref_template, result.ref_input}},
  };
  return j.dump();
}

}  // namespace frmsm

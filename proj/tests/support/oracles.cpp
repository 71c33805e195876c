#include "oracles.hpp"

#include <cmath>
#include <queue>

namespace frmsm::testing {

int crossing_number_half_sum(const std::array<int, 8>& ring) {
  int sum = 0;
  for (int i = 0; i < 8; ++i) sum += std::abs(ring[i] - ring[(i + 1) % 8]);
  return sum / 2;
}

std::size_t count_components8(const BinaryImage& img) {
  std::vector<char> seen(static_cast<std::size_t>(img.width()) * img.height(), 0);
  const auto id = [&](int r, int c) { return static_cast<std::size_t>(r) * img.width() + c; };
  std::size_t count = 0;
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      if (!img.at(r, c) || seen[id(r, c)]) continue;
      ++count;
      std::queue<std::pair<int, int>> q;
      q.push({r, c});
      seen[id(r, c)] = 1;
      while (!q.empty()) {
        const auto [cr, cc] = q.front();
        q.pop();
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int nr = cr + dr, nc = cc + dc;
            if (!img.contains(nr, nc) || !img.at(nr, nc) || seen[id(nr, nc)]) continue;
            seen[id(nr, nc)] = 1;
            q.push({nr, nc});
          }
        }
      }
    }
  }
  return count;
}

bool has_ridge_block(const BinaryImage& img) {
  for (int r = 0; r + 1 < img.height(); ++r) {
    for (int c = 0; c + 1 < img.width(); ++c) {
      if (img.at(r, c) && img.at(r + 1, c) && img.at(r, c + 1) && img.at(r + 1, c + 1)) return true;
    }
  }
  return false;
}

bool is_subset(const BinaryImage& inner, const BinaryImage& outer) {
  for (std::size_t i = 0; i < inner.pixels().size(); ++i) {
    if (inner.pixels()[i] && !outer.pixels()[i]) return false;
  }
  return true;
}

namespace {

double angle_gap(double a, double b) {
  double d = std::fmod(std::fabs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

std::size_t best_from(std::size_t t, const std::vector<std::vector<bool>>& ok,
                      std::vector<bool>& used) {
  if (t == ok.size()) return 0;
  std::size_t best = best_from(t + 1, ok, used);  // leave template t unpaired
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (used[i] || !ok[t][i]) continue;
    used[i] = true;
    best = std::max(best, 1 + best_from(t + 1, ok, used));
    used[i] = false;
  }
  return best;
}

}  // namespace

std::size_t optimal_pairing(const std::vector<PolarMinutia>& tpl,
                            const std::vector<PolarMinutia>& inp,
                            const std::vector<MinutiaType>& tpl_types,
                            const std::vector<MinutiaType>& inp_types,
                            const OracleTolerance& tol) {
  std::vector<std::vector<bool>> ok(tpl.size(), std::vector<bool>(inp.size(), false));
  for (std::size_t t = 0; t < tpl.size(); ++t) {
    for (std::size_t i = 0; i < inp.size(); ++i) {
      ok[t][i] = std::fabs(tpl[t].r - inp[i].r) <= tol.r_tol &&
                 angle_gap(tpl[t].phi, inp[i].phi) <= tol.phi_tol &&
                 angle_gap(tpl[t].theta, inp[i].theta) <= tol.theta_tol &&
                 (!tol.require_same_type || tpl_types[t] == inp_types[i]);
    }
  }
  std::vector<bool> used(inp.size(), false);
  return best_from(0, ok, used);
}

}  // namespace frmsm::testing

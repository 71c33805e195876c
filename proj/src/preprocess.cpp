#include "frmsm/preprocess.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <string>

#include "frmsm/error.hpp"

namespace frmsm {

namespace detail {

namespace {

bool ring_adjacent8(int a, int b) {
  return std::abs(kRingRow[a] - kRingRow[b]) <= 1 && std::abs(kRingCol[a] - kRingCol[b]) <= 1;
}

bool ring_adjacent4(int a, int b) {
  return std::abs(kRingRow[a] - kRingRow[b]) + std::abs(kRingCol[a] - kRingCol[b]) == 1;
}

// Counts connected groups of ring positions whose bit equals `value`; with
// `need_edge_neighbour` only groups containing N, E, S or W are counted.
int ring_components(unsigned code, unsigned value, bool four_connected,
                    bool need_edge_neighbour) {
  std::array<int, 8> label{};
  label.fill(-1);
  int count = 0;
  for (int start = 0; start < 8; ++start) {
    if (((code >> start) & 1u) != value || label[start] >= 0) continue;
    std::array<int, 8> stack{};
    int top = 0;
    stack[top++] = start;
    label[start] = start;
    bool touches_edge = false;
    while (top > 0) {
      const int cur = stack[--top];
      if (cur % 2 == 0) touches_edge = true;
      for (int next = 0; next < 8; ++next) {
        if (((code >> next) & 1u) != value || label[next] >= 0) continue;
        const bool adj = four_connected ? ring_adjacent4(cur, next) : ring_adjacent8(cur, next);
        if (adj) {
          label[next] = start;
          stack[top++] = next;
        }
      }
    }
    if (!need_edge_neighbour || touches_edge) ++count;
  }
  return count;
}

std::array<bool, 256> build_simple_table() {
  std::array<bool, 256> table{};
  for (unsigned code = 0; code < 256; ++code) {
    table[code] = ring_components(code, 1u, false, false) == 1 &&
                  ring_components(code, 0u, true, true) == 1;
  }
  return table;
}

}  // namespace

unsigned ring_code(const BinaryImage& img, int row, int col) {
  unsigned code = 0;
  for (int i = 0; i < 8; ++i) {
    if (img.get(row + kRingRow[i], col + kRingCol[i])) code |= 1u << i;
  }
  return code;
}

bool is_simple(unsigned code) {
  static const std::array<bool, 256> table = build_simple_table();
  return table[code & 0xFFu];
}

}  // namespace detail

BinaryImage binarize(const GrayImage& img, const BinarizeConfig& cfg) {
  if (cfg.threshold < 0 || cfg.threshold > 255) {
    throw Error(ErrorCode::InvalidConfig,
                "binarize threshold must be in [0,255], got " + std::to_string(cfg.threshold));
  }
  std::vector<std::uint8_t> px(img.pixels().size());
  std::transform(img.pixels().begin(), img.pixels().end(), px.begin(), [&](std::uint8_t v) {
    return static_cast<std::uint8_t>(v < cfg.threshold ? 1 : 0);
  });
  return BinaryImage(img.width(), img.height(), std::move(px));
}

int mean_threshold(const GrayImage& img) {
  const auto& px = img.pixels();
  if (px.empty()) return 128;
  const std::uint64_t sum = std::accumulate(px.begin(), px.end(), std::uint64_t{0});
  return static_cast<int>((sum + px.size() / 2) / px.size());
}

BinaryImage whiten_boundary(const BinaryImage& img, int margin) {
  if (margin < 0) throw Error(ErrorCode::InvalidArgument, "margin must be non-negative");
  if (2 * margin >= std::min(img.width(), img.height()) && margin > 0) {
    throw Error(ErrorCode::MarginTooLarge,
                "margin " + std::to_string(margin) + " leaves no interior in a " +
                    std::to_string(img.width()) + "x" + std::to_string(img.height()) + " image");
  }
  BinaryImage out = img;
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      if (r < margin || c < margin || r >= img.height() - margin || c >= img.width() - margin) {
        out.set(r, c, 0);
      }
    }
  }
  return out;
}

namespace {

enum class Subcycle { SouthEast, NorthWest, Blocks };

bool in_ridge_block(const BinaryImage& img, int r, int c) {
  for (int dr = -1; dr <= 0; ++dr) {
    for (int dc = -1; dc <= 0; ++dc) {
      if (img.get(r + dr, c + dc) && img.get(r + dr, c + dc + 1) && img.get(r + dr + 1, c + dc) &&
          img.get(r + dr + 1, c + dc + 1)) {
        return true;
      }
    }
  }
  return false;
}

bool deletable(const BinaryImage& img, int r, int c, Subcycle sub) {
  const unsigned code = detail::ring_code(img, r, c);
  const int neighbours = std::popcount(code);
  if (neighbours < 2 || !detail::is_simple(code)) return false;
  const bool n = code & 1u, e = code & 4u, s = code & 16u, w = code & 64u;
  switch (sub) {
    case Subcycle::SouthEast:
      return neighbours <= 6 && !(n && e && s) && !(e && s && w);
    case Subcycle::NorthWest:
      return neighbours <= 6 && !(n && e && w) && !(n && s && w);
    case Subcycle::Blocks:
      return in_ridge_block(img, r, c);
  }
  return false;
}

struct Schedule {
  bool reverse_scan;
  bool northwest_first;
};

bool run_subcycle(BinaryImage& img, Subcycle sub, bool reverse_scan) {
  std::vector<PixelPos> marked;
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      if (img.at(r, c) && deletable(img, r, c, sub)) marked.push_back({r, c});
    }
  }
  if (reverse_scan) std::reverse(marked.begin(), marked.end());
  bool changed = false;
  for (const auto& p : marked) {
    const unsigned code = detail::ring_code(img, p.row, p.col);
    if (std::popcount(code) >= 2 && detail::is_simple(code) &&
        (sub != Subcycle::Blocks || in_ridge_block(img, p.row, p.col))) {
      img.set(p.row, p.col, 0);
      changed = true;
    }
  }
  return changed;
}

int crossings(unsigned code) {
  int rises = 0;
  for (int i = 0; i < 8; ++i) {
    if (!((code >> i) & 1u) && ((code >> ((i + 1) % 8)) & 1u)) ++rises;
  }
  return rises;
}

// A spur is a single ridge pixel whose only neighbour is a junction; it is
// boundary noise, and as an end pixel it is always simple.
bool is_spur(const BinaryImage& img, int r, int c) {
  const unsigned code = detail::ring_code(img, r, c);
  if (std::popcount(code) != 1) return false;
  const int i = std::countr_zero(code);
  const int qr = r + detail::kRingRow[i], qc = c + detail::kRingCol[i];
  return crossings(detail::ring_code(img, qr, qc)) >= 3;
}

bool prune_spurs(BinaryImage& img, bool reverse_scan) {
  std::vector<PixelPos> marked;
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      if (img.at(r, c) && is_spur(img, r, c)) marked.push_back({r, c});
    }
  }
  if (reverse_scan) std::reverse(marked.begin(), marked.end());
  bool changed = false;
  for (const auto& p : marked) {
    if (is_spur(img, p.row, p.col)) {
      img.set(p.row, p.col, 0);
      changed = true;
    }
  }
  return changed;
}

bool has_ridge_block(const BinaryImage& img) {
  for (int r = 0; r + 1 < img.height(); ++r) {
    for (int c = 0; c + 1 < img.width(); ++c) {
      if (img.at(r, c) && img.at(r, c + 1) && img.at(r + 1, c) && img.at(r + 1, c + 1)) {
        return true;
      }
    }
  }
  return false;
}

BinaryImage thin_with(BinaryImage img, Schedule schedule, int limit) {
  const Subcycle first = schedule.northwest_first ? Subcycle::NorthWest : Subcycle::SouthEast;
  const Subcycle second = schedule.northwest_first ? Subcycle::SouthEast : Subcycle::NorthWest;
  for (int pass = 0; pass < limit; ++pass) {
    bool changed = run_subcycle(img, first, schedule.reverse_scan);
    changed |= run_subcycle(img, second, schedule.reverse_scan);
    changed |= run_subcycle(img, Subcycle::Blocks, schedule.reverse_scan);
    // Spurs are only judged on a converged skeleton; while ridges are still
    // thick, junction tests are meaningless.
    if (!changed) changed = prune_spurs(img, schedule.reverse_scan);
    if (!changed) return img;
  }
  throw Error(ErrorCode::IterationLimitExceeded,
              "thinning did not converge within " + std::to_string(limit) + " passes");
}

}  // namespace

BinaryImage thin(const BinaryImage& img, const ThinConfig& cfg) {
  const int limit = cfg.max_iterations.value_or(2 * std::max(img.width(), img.height()));
  if (limit < 1) throw Error(ErrorCode::InvalidConfig, "max_iterations must be at least 1");

  const BinaryImage whitened = whiten_boundary(img, cfg.boundary_margin);
  // Four ridges meeting diagonally can freeze into a 2x2 block that no single
  // deletion can break without disconnecting an arm. Such blocks depend on
  // the deletion order, so other schedules are tried before accepting one.
  constexpr Schedule kSchedules[] = {{false, false}, {true, false}, {false, true}, {true, true}};
  BinaryImage first;
  for (const Schedule& s : kSchedules) {
    BinaryImage out = thin_with(whitened, s, limit);
    if (!has_ridge_block(out)) return out;
    if (first.pixels().empty()) first = std::move(out);
  }
  return first;
}

}  // namespace frmsm

#pragma once

#include <cstdint>
#include <vector>

namespace frmsm {

struct PixelPos {
  int row = 0;
  int col = 0;

  friend bool operator==(const PixelPos&, const PixelPos&) = default;
};

// Numeric values are the type codes of the minutiae data matrix.
enum class MinutiaType : int {
  Termination = 1,
  Bifurcation = 3,
};

struct Minutia {
  int row = 0;
  int col = 0;
  double theta = 0.0;  // degrees in [0,360), counter-clockwise from +col
  MinutiaType type = MinutiaType::Termination;
  // Set when the bifurcation valley could not be traced and theta fell back to 0.
  bool degenerate_angle = false;

  PixelPos pos() const { return {row, col}; }

  friend bool operator==(const Minutia& a, const Minutia& b) {
    return a.row == b.row && a.col == b.col && a.theta == b.theta && a.type == b.type;
  }
};

// Ordered minutiae of one impression. Source dimensions are zero when the set
// was read from a data-matrix file that does not carry them.
struct MinutiaeSet {
  std::vector<Minutia> minutiae;
  int source_width = 0;
  int source_height = 0;

  std::size_t size() const { return minutiae.size(); }
  bool empty() const { return minutiae.empty(); }
  const Minutia& operator[](std::size_t i) const { return minutiae[i]; }
};

}  // namespace frmsm

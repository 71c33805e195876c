#pragma once

#include <optional>

#include "frmsm/imaging.hpp"

namespace frmsm {

struct BinarizeConfig {
  int threshold = 128;  // intensity < threshold is ridge
};

struct ThinConfig {
  int boundary_margin = 5;
  // Full thinning passes allowed before giving up; defaults to 2*max(width, height).
  std::optional<int> max_iterations;
};

BinaryImage binarize(const GrayImage& img, const BinarizeConfig& cfg);

// Rounded mean intensity; the automatic alternative to a fixed threshold.
int mean_threshold(const GrayImage& img);

// Clears a frame `margin` pixels wide on every side.
BinaryImage whiten_boundary(const BinaryImage& img, int margin);

// Reduces every ridge to a one-pixel-wide, 8-connected skeleton.
//
// The boundary frame is cleared first. Each pass runs two directional
// subcycles with the neighbourhood conditions of Zhang-Suen thinning, then a
// cleanup subcycle that breaks up any remaining 2x2 ridge blocks. Candidates
// are marked against the raster as it stood at the start of the subcycle and
// then deleted in row-major order, re-checking before each deletion that the
// pixel is still a simple point. Deleting one simple point at a time cannot
// split, merge, or erase a component, or open a hole, so topology is kept
// exactly. Passes repeat until one deletes nothing.
BinaryImage thin(const BinaryImage& img, const ThinConfig& cfg = {});

namespace detail {

// Bit i of a ring code is set when neighbour i is ridge. Neighbours run
// clockwise from north: N, NE, E, SE, S, SW, W, NW.
inline constexpr int kRingRow[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
inline constexpr int kRingCol[8] = {0, 1, 1, 1, 0, -1, -1, -1};

unsigned ring_code(const BinaryImage& img, int row, int col);

// True when removing the centre pixel preserves (8,4) topology locally.
bool is_simple(unsigned code);

}  // namespace detail

}  // namespace frmsm

#pragma once

#include <cmath>
#include <numbers>

namespace frmsm {

// Maps any angle in degrees onto [0,360).
inline double normalize_degrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r = 0.0;
  return r;
}

// Shortest way around the circle between two angles, in [0,180].
inline double circular_distance(double a, double b) {
  const double d = std::fabs(normalize_degrees(a) - normalize_degrees(b));
  return d > 180.0 ? 360.0 - d : d;
}

// Direction of the vector (d_row, d_col) in image coordinates: the row axis
// points down, so angles open counter-clockwise from +col as seen on screen.
inline double direction_degrees(double d_row, double d_col) {
  return normalize_degrees(std::atan2(-d_row, d_col) * 180.0 / std::numbers::pi);
}

// Rounds to the 0.01 degree resolution of the data-matrix text format.
inline double quantize_degrees(double deg) {
  return normalize_degrees(std::round(normalize_degrees(deg) * 100.0) / 100.0);
}

}  // namespace frmsm

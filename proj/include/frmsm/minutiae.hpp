#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "frmsm/imaging.hpp"
#include "frmsm/types.hpp"

namespace frmsm {

struct ExtractConfig {
  // Width of the whitened frame; terminations closer than this to the frame
  // are ridge ends created by the frame itself and are dropped.
  int margin = 5;
  // Pixels followed along a ridge when estimating a termination angle.
  int trace_len = 10;
  // Side of the square window re-thinned around a bifurcation.
  int valley_window = 21;
};

/// Half the sum of absolute differences between cyclically adjacent
/// neighbours of (row, col). 1 marks a ridge ending, 2 an ordinary ridge
/// pixel, 3 or more a bifurcation.
int crossing_number(const BinaryImage& skel, int row, int col);

MinutiaeSet extract(const BinaryImage& skel, const ExtractConfig& cfg = {});

/// Direction from a ridge ending into its ridge, following at most
/// `trace_len` pixels or until the path reaches a non-ordinary pixel.
double termination_angle(const BinaryImage& skel, PixelPos at, int trace_len = 10);

/// Orientation of the valley that ends between the two branches. The window
/// around the junction is negated, so that valley becomes a ridge ending, and
/// re-thinned. The nearest valley ending inside the narrowest angle between
/// the junction's arms is then measured like a termination.
double bifurcation_angle(const BinaryImage& skel, PixelPos at, const ExtractConfig& cfg = {});

struct DataMatrixRow {
  int row = 0;
  int col = 0;
  double theta = 0.0;
  int type = 1;

  friend bool operator==(const DataMatrixRow&, const DataMatrixRow&) = default;
};

std::vector<DataMatrixRow> to_data_matrix(const MinutiaeSet& set);

// CSV with header `row,col,theta,type`, theta printed to two decimals.
std::string format_csv(const MinutiaeSet& set);
MinutiaeSet parse_csv(std::string_view text, const std::string& source_name = "<csv>");
void save_csv(const MinutiaeSet& set, const std::filesystem::path& path);
MinutiaeSet load_csv(const std::filesystem::path& path);

}  // namespace frmsm

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "frmsm/types.hpp"

namespace frmsm {

/// 8-bit grayscale raster, row-major.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, std::uint8_t fill = 0);
  GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t at(int row, int col) const { return pixels_[index(row, col)]; }
  void set(int row, int col, std::uint8_t v) { pixels_[index(row, col)] = v; }
  bool contains(int row, int col) const {
    return row >= 0 && col >= 0 && row < height_ && col < width_;
  }

  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Two-valued raster: 1 = ridge (foreground), 0 = background. Reads outside
/// the raster return 0 so neighbourhood scans need no bounds special-casing.
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int width, int height, std::uint8_t fill = 0);
  BinaryImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }

  std::uint8_t at(int row, int col) const { return pixels_[index(row, col)]; }
  std::uint8_t get(int row, int col) const {
    return contains(row, col) ? pixels_[index(row, col)] : 0;
  }
  void set(int row, int col, std::uint8_t v) { pixels_[index(row, col)] = v ? 1 : 0; }
  bool contains(int row, int col) const {
    return row >= 0 && col >= 0 && row < height_ && col < width_;
  }

  std::size_t count() const;
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Netpbm graymap I/O. Both plain (P2) and raw (P5) are read; P5 is written.
// A maxval other than 255 is rescaled to [0,255] by rounded integer proportion.
GrayImage load_image(const std::filesystem::path& path);
GrayImage decode_pgm(const std::vector<std::uint8_t>& bytes, const std::string& source_name);
void save_image(const GrayImage& img, const std::filesystem::path& path);
// Binary rasters are written as 0 -> 0, 1 -> 255.
void save_image(const BinaryImage& img, const std::filesystem::path& path);

GrayImage to_gray(const BinaryImage& img);
// Intensities >= 128 become 1; inverse of to_gray.
BinaryImage from_gray(const GrayImage& img);

BinaryImage invert(const BinaryImage& img);

inline constexpr int kMarkerRadius = 2;

// Draws a hollow 5x5 square on each termination and a hollow 5x5 diamond on
// each bifurcation, intensity 0, clipped to the raster.
GrayImage draw_overlay(const GrayImage& img, const MinutiaeSet& minutiae);
void render_overlay(const GrayImage& img, const MinutiaeSet& minutiae,
                    const std::filesystem::path& path);

}  // namespace frmsm

#include "frmsm/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "frmsm/error.hpp"

namespace frmsm {

namespace {

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive, got " +
                                                std::to_string(width) + "x" +
                                                std::to_string(height));
  }
}

std::size_t area(int width, int height) {
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

// Tokenizer over the textual part of a Netpbm header.
class PgmReader {
 public:
  PgmReader(const std::vector<std::uint8_t>& bytes, const std::string& name)
      : bytes_(bytes), name_(name) {}

  std::size_t offset() const { return pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::MalformedHeader,
                name_ + ": " + what + " at byte offset " + std::to_string(pos_));
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long read_uint(const char* field) {
    skip_space_and_comments();
    if (at_end() || !std::isdigit(bytes_[pos_])) fail(std::string("expected ") + field);
    unsigned long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + static_cast<unsigned long>(bytes_[pos_] - '0');
      if (v > 0xFFFFFFFFul) fail(std::string(field) + " out of range");
      ++pos_;
    }
    return v;
  }

  // Exactly one whitespace byte separates maxval from a raw raster.
  void single_space() {
    if (at_end() || !std::isspace(bytes_[pos_])) fail("expected whitespace after maxval");
    ++pos_;
  }

  std::uint8_t byte() { return bytes_[pos_++]; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::vector<std::uint8_t>& bytes_;
  const std::string& name_;
  std::size_t pos_ = 0;
};

std::uint8_t rescale(unsigned long v, unsigned long maxval) {
  if (maxval == 255) return static_cast<std::uint8_t>(v);
  return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
}

void write_pgm(int width, int height, const std::vector<std::uint8_t>& pixels,
               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, path.string() + ": cannot open for writing");
  const std::string header =
      "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::Io, path.string() + ": write failed");
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  pixels_.assign(area(width, height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width, height);
  if (pixels_.size() != area(width, height)) {
    throw Error(ErrorCode::InvalidArgument, "pixel count does not match dimensions");
  }
}

BinaryImage::BinaryImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  pixels_.assign(area(width, height), fill ? 1 : 0);
}

BinaryImage::BinaryImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dims(width, height);
  if (pixels_.size() != area(width, height)) {
    throw Error(ErrorCode::InvalidArgument, "pixel count does not match dimensions");
  }
  if (std::any_of(pixels_.begin(), pixels_.end(), [](std::uint8_t v) { return v > 1; })) {
    throw Error(ErrorCode::InvalidArgument, "binary image values must be 0 or 1");
  }
}

std::size_t BinaryImage::count() const {
  return static_cast<std::size_t>(std::count(pixels_.begin(), pixels_.end(), 1));
}

GrayImage decode_pgm(const std::vector<std::uint8_t>& bytes, const std::string& source_name) {
  if (bytes.size() < 2 || bytes[0] != 'P') {
    throw Error(ErrorCode::UnsupportedFormat, source_name + ": not a PGM file (byte offset 0)");
  }
  const bool plain = bytes[1] == '2';
  if (!plain && bytes[1] != '5') {
    throw Error(ErrorCode::UnsupportedFormat,
                source_name + ": unsupported Netpbm variant P" +
                    std::string(1, static_cast<char>(bytes[1])) + " (byte offset 1)");
  }

  PgmReader in(bytes, source_name);
  in.byte();
  in.byte();
  const auto width = in.read_uint("width");
  const auto height = in.read_uint("height");
  const auto maxval = in.read_uint("maxval");
  if (width == 0 || height == 0) in.fail("zero image dimension");
  if (width > 1u << 16 || height > 1u << 16) in.fail("image dimension too large");
  if (maxval == 0 || maxval > 65535) in.fail("maxval out of range");

  const auto n = static_cast<std::size_t>(width) * height;
  std::vector<std::uint8_t> pixels(n);
  if (plain) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = in.read_uint("pixel value");
      if (v > maxval) in.fail("pixel value exceeds maxval");
      pixels[i] = rescale(v, maxval);
    }
  } else {
    in.single_space();
    const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
    if (in.remaining() < n * sample_bytes) {
      in.fail("truncated raster: need " + std::to_string(n * sample_bytes) + " bytes, have " +
              std::to_string(in.remaining()));
    }
    for (std::size_t i = 0; i < n; ++i) {
      unsigned long v = in.byte();
      if (sample_bytes == 2) v = (v << 8) | in.byte();
      if (v > maxval) in.fail("pixel value exceeds maxval");
      pixels[i] = rescale(v, maxval);
    }
  }
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

GrayImage load_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, path.string() + ": no such file");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string() + ": cannot open");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_pgm(bytes, path.string());
}

void save_image(const GrayImage& img, const std::filesystem::path& path) {
  write_pgm(img.width(), img.height(), img.pixels(), path);
}

void save_image(const BinaryImage& img, const std::filesystem::path& path) {
  write_pgm(img.width(), img.height(), to_gray(img).pixels(), path);
}

GrayImage to_gray(const BinaryImage& img) {
  std::vector<std::uint8_t> px(img.pixels().size());
  std::transform(img.pixels().begin(), img.pixels().end(), px.begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v ? 255 : 0); });
  return GrayImage(img.width(), img.height(), std::move(px));
}

BinaryImage from_gray(const GrayImage& img) {
  std::vector<std::uint8_t> px(img.pixels().size());
  std::transform(img.pixels().begin(), img.pixels().end(), px.begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v >= 128 ? 1 : 0); });
  return BinaryImage(img.width(), img.height(), std::move(px));
}

BinaryImage invert(const BinaryImage& img) {
  std::vector<std::uint8_t> px(img.pixels().size());
  std::transform(img.pixels().begin(), img.pixels().end(), px.begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v ? 0 : 1); });
  return BinaryImage(img.width(), img.height(), std::move(px));
}

GrayImage draw_overlay(const GrayImage& img, const MinutiaeSet& minutiae) {
  for (const auto& m : minutiae.minutiae) {
    if (!img.contains(m.row, m.col)) {
      throw Error(ErrorCode::OutOfBounds, "minutia at (" + std::to_string(m.row) + "," +
                                              std::to_string(m.col) + ") outside " +
                                              std::to_string(img.width()) + "x" +
                                              std::to_string(img.height()) + " raster");
    }
  }
  GrayImage out = img;
  for (const auto& m : minutiae.minutiae) {
    for (int dr = -kMarkerRadius; dr <= kMarkerRadius; ++dr) {
      for (int dc = -kMarkerRadius; dc <= kMarkerRadius; ++dc) {
        const bool on_marker =
            m.type == MinutiaType::Termination
                ? std::max(std::abs(dr), std::abs(dc)) == kMarkerRadius
                : std::abs(dr) + std::abs(dc) == kMarkerRadius;
        if (on_marker && out.contains(m.row + dr, m.col + dc)) out.set(m.row + dr, m.col + dc, 0);
      }
    }
  }
  return out;
}

void render_overlay(const GrayImage& img, const MinutiaeSet& minutiae,
                    const std::filesystem::path& path) {
  save_image(draw_overlay(img, minutiae), path);
}

}  // namespace frmsm

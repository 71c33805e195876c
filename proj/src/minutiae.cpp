#include "frmsm/minutiae.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>

#include "frmsm/angles.hpp"
#include "frmsm/error.hpp"
#include "frmsm/preprocess.hpp"

namespace frmsm {

namespace {

using detail::kRingCol;
using detail::kRingRow;

// Crossing number per ring code, counted as 0->1 transitions around the ring.
std::array<int, 256> build_crossing_table() {
  std::array<int, 256> table{};
  for (unsigned code = 0; code < 256; ++code) {
    int rises = 0;
    for (int i = 0; i < 8; ++i) {
      const unsigned cur = (code >> i) & 1u;
      const unsigned next = (code >> ((i + 1) % 8)) & 1u;
      if (!cur && next) ++rises;
    }
    table[code] = rises;
  }
  return table;
}

int crossing_from_code(unsigned code) {
  static const std::array<int, 256> table = build_crossing_table();
  return table[code & 0xFFu];
}

std::string where(int row, int col) {
  return "(" + std::to_string(row) + "," + std::to_string(col) + ")";
}

bool interior(const BinaryImage& img, int row, int col) {
  return row >= 1 && col >= 1 && row < img.height() - 1 && col < img.width() - 1;
}

void require_thin(const BinaryImage& skel) {
  for (int r = 0; r + 1 < skel.height(); ++r) {
    for (int c = 0; c + 1 < skel.width(); ++c) {
      if (skel.at(r, c) && skel.at(r, c + 1) && skel.at(r + 1, c) && skel.at(r + 1, c + 1)) {
        throw Error(ErrorCode::NotThinned, "2x2 ridge block at " + where(r, c));
      }
    }
  }
}

// Edge-adjacent neighbours are tried before diagonal ones; on a one-pixel
// skeleton this picks the same path whichever way the raster is rotated.
constexpr std::array<int, 8> kTraceOrder = {0, 2, 4, 6, 1, 3, 5, 7};

// Follows the ridge from `from` for up to `steps` pixels, never re-entering a
// visited pixel, and stops early on a pixel that is not an ordinary ridge
// pixel. Border pixels are never entered: inside a cropped window they are
// where the crop cut the ridge. Returns the last pixel reached.
PixelPos trace_ridge(const BinaryImage& skel, PixelPos from, std::set<std::pair<int, int>>& visited,
                     int steps) {
  PixelPos cur = from;
  for (int step = 0; step < steps; ++step) {
    bool moved = false;
    for (int i : kTraceOrder) {
      const PixelPos next{cur.row + kRingRow[i], cur.col + kRingCol[i]};
      if (!interior(skel, next.row, next.col) || !skel.at(next.row, next.col) ||
          visited.count({next.row, next.col})) {
        continue;
      }
      visited.insert({next.row, next.col});
      cur = next;
      moved = true;
      break;
    }
    if (!moved) break;
    if (crossing_from_code(detail::ring_code(skel, cur.row, cur.col)) != 2) break;
  }
  return cur;
}

// Directions of the ridges leaving a junction, one per run of ridge pixels
// around its ring.
std::vector<double> arm_directions(const BinaryImage& skel, PixelPos at, int trace_len) {
  const unsigned code = detail::ring_code(skel, at.row, at.col);
  const auto on = [&](int i) { return ((code >> ((i + 8) % 8)) & 1u) != 0; };
  std::vector<std::vector<int>> runs;
  for (int i = 0; i < 8; ++i) {
    if (!on(i) || on(i - 1)) continue;
    std::vector<int> run;
    for (int j = i; on(j) && static_cast<int>(run.size()) < 8; ++j) run.push_back(j % 8);
    runs.push_back(std::move(run));
  }
  std::vector<double> dirs;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    std::set<std::pair<int, int>> visited{{at.row, at.col}};
    for (std::size_t o = 0; o < runs.size(); ++o) {
      if (o == k) continue;
      for (int i : runs[o]) visited.insert({at.row + kRingRow[i], at.col + kRingCol[i]});
    }
    int first = runs[k].front();
    for (int i : runs[k]) {
      if (i % 2 == 0) {
        first = i;
        break;
      }
    }
    const PixelPos start{at.row + kRingRow[first], at.col + kRingCol[first]};
    visited.insert({start.row, start.col});
    const PixelPos end = trace_ridge(skel, start, visited, trace_len - 1);
    dirs.push_back(direction_degrees(end.row - at.row, end.col - at.col));
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

}  // namespace

int crossing_number(const BinaryImage& skel, int row, int col) {
  if (!interior(skel, row, col)) {
    throw Error(ErrorCode::OnBorder, "pixel " + where(row, col) + " has no full neighbourhood");
  }
  if (!skel.at(row, col)) throw Error(ErrorCode::NotRidgePixel, "pixel " + where(row, col));
  return crossing_from_code(detail::ring_code(skel, row, col));
}

double termination_angle(const BinaryImage& skel, PixelPos at, int trace_len) {
  if (crossing_number(skel, at.row, at.col) != 1) {
    throw Error(ErrorCode::NotTermination, "pixel " + where(at.row, at.col));
  }
  std::set<std::pair<int, int>> visited{{at.row, at.col}};
  const PixelPos end = trace_ridge(skel, at, visited, trace_len);
  return direction_degrees(end.row - at.row, end.col - at.col);
}

double bifurcation_angle(const BinaryImage& skel, PixelPos at, const ExtractConfig& cfg) {
  if (crossing_number(skel, at.row, at.col) < 3) {
    throw Error(ErrorCode::NotBifurcation, "pixel " + where(at.row, at.col));
  }
  const int half = std::max(cfg.valley_window / 2, 2);
  const int top = std::max(at.row - half, 0);
  const int left = std::max(at.col - half, 0);
  const int bottom = std::min(at.row + half, skel.height() - 1);
  const int right = std::min(at.col + half, skel.width() - 1);

  // Negative of the ridges dilated by one pixel, so valleys separated by a
  // diagonal ridge step do not touch through a corner.
  BinaryImage valleys(right - left + 1, bottom - top + 1);
  for (int r = top; r <= bottom; ++r) {
    for (int c = left; c <= right; ++c) {
      bool near_ridge = false;
      for (int dr = -1; dr <= 1 && !near_ridge; ++dr) {
        for (int dc = -1; dc <= 1 && !near_ridge; ++dc) near_ridge = skel.get(r + dr, c + dc);
      }
      valleys.set(r - top, c - left, near_ridge ? 0 : 1);
    }
  }
  const BinaryImage valley_skel = thin(valleys, ThinConfig{.boundary_margin = 0, .max_iterations = std::nullopt});

  // The valley between the two branches lies in the narrowest angle between
  // neighbouring arms; endings outside it belong to the outer valleys.
  const std::vector<double> arms = arm_directions(skel, at, cfg.trace_len);
  double sector_from = 0.0, sector_width = 360.0;
  for (std::size_t k = 0; k < arms.size(); ++k) {
    const double next = k + 1 < arms.size() ? arms[k + 1] : arms.front() + 360.0;
    if (next - arms[k] < sector_width) {
      sector_width = next - arms[k];
      sector_from = arms[k];
    }
  }

  const PixelPos centre{at.row - top, at.col - left};
  PixelPos best{};
  long best_dist = std::numeric_limits<long>::max();
  for (int r = 1; r + 1 < valley_skel.height(); ++r) {
    for (int c = 1; c + 1 < valley_skel.width(); ++c) {
      if (!valley_skel.at(r, c) || crossing_number(valley_skel, r, c) != 1) continue;
      const long dr = r - centre.row, dc = c - centre.col;
      if (normalize_degrees(direction_degrees(static_cast<double>(dr), static_cast<double>(dc)) -
                            sector_from) > sector_width) {
        continue;
      }
      const long dist = dr * dr + dc * dc;
      if (dist < best_dist) {
        best_dist = dist;
        best = {r, c};
      }
    }
  }
  if (best_dist == std::numeric_limits<long>::max()) {
    throw Error(ErrorCode::ValleyNotFound, "no valley ending near " + where(at.row, at.col));
  }
  return termination_angle(valley_skel, best, cfg.trace_len);
}

MinutiaeSet extract(const BinaryImage& skel, const ExtractConfig& cfg) {
  require_thin(skel);
  MinutiaeSet out;
  out.source_width = skel.width();
  out.source_height = skel.height();

  const int keep_out = 2 * cfg.margin;
  const auto near_frame = [&](int r, int c) {
    return r < keep_out || c < keep_out || r >= skel.height() - keep_out ||
           c >= skel.width() - keep_out;
  };

  // Row-major scan visits each pixel once, so coordinates are never repeated.
  for (int r = 1; r + 1 < skel.height(); ++r) {
    for (int c = 1; c + 1 < skel.width(); ++c) {
      if (!skel.at(r, c)) continue;
      const int cn = crossing_from_code(detail::ring_code(skel, r, c));
      if (cn == 1) {
        if (near_frame(r, c)) continue;
        const double theta = termination_angle(skel, {r, c}, cfg.trace_len);
        out.minutiae.push_back({r, c, quantize_degrees(theta), MinutiaType::Termination, false});
      } else if (cn >= 3) {
        Minutia m{r, c, 0.0, MinutiaType::Bifurcation, false};
        try {
          m.theta = quantize_degrees(bifurcation_angle(skel, {r, c}, cfg));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::ValleyNotFound) throw;
          m.degenerate_angle = true;
        }
        out.minutiae.push_back(m);
      }
    }
  }
  return out;
}

std::vector<DataMatrixRow> to_data_matrix(const MinutiaeSet& set) {
  std::vector<DataMatrixRow> rows;
  rows.reserve(set.size());
  for (const auto& m : set.minutiae) {
    rows.push_back({m.row, m.col, m.theta, static_cast<int>(m.type)});
  }
  return rows;
}

std::string format_csv(const MinutiaeSet& set) {
  std::string out = "row,col,theta,type\n";
  char line[96];
  for (const auto& row : to_data_matrix(set)) {
    std::snprintf(line, sizeof line, "%d,%d,%.2f,%d\n", row.row, row.col, row.theta, row.type);
    out += line;
  }
  return out;
}

namespace {

template <typename T>
T parse_field(std::string_view field, const std::string& source, int line_no, const char* name) {
  T value{};
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw Error(ErrorCode::MalformedCsv, source + ":" + std::to_string(line_no) + ": bad " + name +
                                             " '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

MinutiaeSet parse_csv(std::string_view text, const std::string& source_name) {
  MinutiaeSet set;
  std::set<std::pair<int, int>> seen;
  int line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != "row,col,theta,type") {
        throw Error(ErrorCode::MalformedCsv,
                    source_name + ":1: expected header 'row,col,theta,type'");
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    std::array<std::string_view, 4> fields;
    std::size_t n = 0;
    while (true) {
      const auto comma = line.find(',');
      if (n == fields.size()) {
        n = fields.size() + 1;
        break;
      }
      fields[n++] = line.substr(0, comma);
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (n != fields.size()) {
      throw Error(ErrorCode::MalformedCsv,
                  source_name + ":" + std::to_string(line_no) + ": expected 4 columns");
    }
    Minutia m;
    m.row = parse_field<int>(fields[0], source_name, line_no, "row");
    m.col = parse_field<int>(fields[1], source_name, line_no, "col");
    m.theta = parse_field<double>(fields[2], source_name, line_no, "theta");
    const int type = parse_field<int>(fields[3], source_name, line_no, "type");
    const std::string at = source_name + ":" + std::to_string(line_no) + ": ";
    if (m.row < 0 || m.col < 0) throw Error(ErrorCode::MalformedCsv, at + "negative coordinate");
    if (!(m.theta >= 0.0 && m.theta < 360.0)) {
      throw Error(ErrorCode::MalformedCsv, at + "theta outside [0,360)");
    }
    if (type != 1 && type != 3) throw Error(ErrorCode::MalformedCsv, at + "type must be 1 or 3");
    m.type = static_cast<MinutiaType>(type);
    if (!seen.insert({m.row, m.col}).second) {
      throw Error(ErrorCode::MalformedCsv, at + "duplicate minutia " + where(m.row, m.col));
    }
    set.minutiae.push_back(m);
  }
  if (!header_seen) {
    throw Error(ErrorCode::MalformedCsv, source_name + ": empty file, header missing");
  }
  return set;
}

void save_csv(const MinutiaeSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, path.string() + ": cannot open for writing");
  const auto text = format_csv(set);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::Io, path.string() + ": write failed");
}

MinutiaeSet load_csv(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, path.string() + ": no such file");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string() + ": cannot open");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_csv(text, path.string());
}

}  // namespace frmsm

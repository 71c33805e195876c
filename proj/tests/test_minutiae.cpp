#include <array>
#include <random>

#include "doctest.h"
#include "frmsm/angles.hpp"
#include "frmsm/error.hpp"
#include "frmsm/minutiae.hpp"
#include "frmsm/preprocess.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace frmsm;
namespace ft = frmsm::testing;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an frmsm::Error");
  return ErrorCode::InvalidArgument;
}

BinaryImage ring_image(unsigned code) {
  BinaryImage img(3, 3);
  img.set(1, 1, 1);
  for (int i = 0; i < 8; ++i) {
    img.set(1 + detail::kRingRow[i], 1 + detail::kRingCol[i], (code >> i) & 1u);
  }
  return img;
}

std::array<int, 8> ring_of(unsigned code) {
  std::array<int, 8> ring{};
  for (int i = 0; i < 8; ++i) ring[i] = (code >> i) & 1u;
  return ring;
}

// Stem from the west splitting into two parallel branches six rows apart;
// the valley between the branches ends at the fork and runs due east.
BinaryImage tuning_fork(int size, PixelPos fork) {
  BinaryImage img(size, size);
  ft::draw_line(img, fork.row, fork.col - 15, fork.row, fork.col);
  ft::draw_line(img, fork.row, fork.col, fork.row - 3, fork.col + 3);
  ft::draw_line(img, fork.row, fork.col, fork.row + 3, fork.col + 3);
  ft::draw_line(img, fork.row - 3, fork.col + 3, fork.row - 3, fork.col + 18);
  ft::draw_line(img, fork.row + 3, fork.col + 3, fork.row + 3, fork.col + 18);
  return img;
}

std::size_t count_type(const MinutiaeSet& set, MinutiaType t) {
  return static_cast<std::size_t>(std::count_if(
      set.minutiae.begin(), set.minutiae.end(), [&](const Minutia& m) { return m.type == t; }));
}

}  // namespace

TEST_CASE("crossing number examples") {
  CHECK(crossing_number(ring_image(0), 1, 1) == 0);
  CHECK(crossing_number(ring_image(0b01000100), 1, 1) == 2);  // E and W
  CHECK(crossing_number(ring_image(0b00000001), 1, 1) == 1);  // N only
  CHECK(crossing_number(ring_image(0b10100100), 1, 1) == 3);  // E, SW, NW
}

TEST_CASE("crossing number equals the half-sum for every neighbourhood") {
  for (unsigned code = 0; code < 256; ++code) {
    CAPTURE(code);
    CHECK(crossing_number(ring_image(code), 1, 1) == ft::crossing_number_half_sum(ring_of(code)));
  }
}

TEST_CASE("crossing number errors") {
  const BinaryImage img = ring_image(0xFF);
  CHECK(code_of([&] { crossing_number(img, 0, 1); }) == ErrorCode::OnBorder);
  CHECK(code_of([&] { crossing_number(img, 1, 2); }) == ErrorCode::OnBorder);
  CHECK(code_of([&] { crossing_number(ring_image(0), 0, 0); }) == ErrorCode::OnBorder);
  BinaryImage hole(5, 5, 1);
  hole.set(2, 2, 0);
  CHECK(code_of([&] { crossing_number(hole, 2, 2); }) == ErrorCode::NotRidgePixel);
}

TEST_CASE("extract a straight line") {
  BinaryImage img(40, 40);
  ft::draw_line(img, 20, 10, 20, 29);
  const MinutiaeSet set = extract(img);
  REQUIRE(set.size() == 2);
  CHECK(count_type(set, MinutiaType::Termination) == 2);
  CHECK(set[0] == Minutia{20, 10, 0.0, MinutiaType::Termination});
  CHECK(set[1] == Minutia{20, 29, 180.0, MinutiaType::Termination});
}

TEST_CASE("extract an empty skeleton") {
  CHECK(extract(BinaryImage(30, 30)).empty());
}

TEST_CASE("extract a Y") {
  BinaryImage img(50, 50);
  const PixelPos j{25, 22};
  ft::draw_line(img, j.row, j.col, j.row, j.col - 10);
  ft::draw_line(img, j.row, j.col, j.row - 10, j.col + 10);
  ft::draw_line(img, j.row, j.col, j.row + 10, j.col + 10);
  const MinutiaeSet set = extract(img);
  CHECK(count_type(set, MinutiaType::Termination) == 3);
  REQUIRE(count_type(set, MinutiaType::Bifurcation) == 1);
  for (const auto& m : set.minutiae) {
    if (m.type != MinutiaType::Bifurcation) continue;
    CHECK(m.pos() == j);
    // The valley between the two right-hand arms runs due east.
    CHECK(m.theta == doctest::Approx(0.0));
    CHECK_FALSE(m.degenerate_angle);
  }
}

TEST_CASE("extract drops terminations near the frame but keeps bifurcations") {
  BinaryImage img(40, 40);
  ft::draw_line(img, 20, 3, 20, 36);
  CHECK(extract(img, {.margin = 5}).empty());
  CHECK(extract(img, {.margin = 1}).size() == 2);
}

TEST_CASE("extract rejects a raster with a 2x2 ridge block") {
  BinaryImage img(20, 20);
  img.set(8, 8, 1);
  img.set(8, 9, 1);
  img.set(9, 8, 1);
  img.set(9, 9, 1);
  CHECK(code_of([&] { extract(img); }) == ErrorCode::NotThinned);
}

TEST_CASE("termination angles") {
  BinaryImage img(40, 40);
  ft::draw_line(img, 20, 12, 20, 28);
  CHECK(termination_angle(img, {20, 12}) == doctest::Approx(0.0));
  CHECK(termination_angle(img, {20, 28}) == doctest::Approx(180.0));

  BinaryImage vert(40, 40);
  ft::draw_line(vert, 12, 20, 28, 20);
  CHECK(termination_angle(vert, {28, 20}) == doctest::Approx(90.0));
  CHECK(termination_angle(vert, {12, 20}) == doctest::Approx(270.0));

  BinaryImage diag(40, 40);
  ft::draw_line(diag, 28, 12, 12, 28);
  CHECK(termination_angle(diag, {28, 12}) == doctest::Approx(45.0));

  CHECK(code_of([&] { termination_angle(img, {20, 20}); }) == ErrorCode::NotTermination);
}

TEST_CASE("termination angle stops at a junction") {
  BinaryImage img(40, 40);
  ft::draw_line(img, 20, 15, 20, 30);
  ft::draw_line(img, 20, 18, 10, 18);
  // The trace from (20,15) reaches the junction at column 18 after 3 steps.
  CHECK(termination_angle(img, {20, 15}, 10) == doctest::Approx(0.0));
  CHECK(termination_angle(img, {10, 18}, 10) == doctest::Approx(270.0));
}

TEST_CASE("termination angles follow quarter turns") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 30; ++i) {
    const BinaryImage skel = thin(ft::random_blobs(rng));
    const BinaryImage rot = ft::rotate_ccw(skel);
    for (const auto& m : extract(skel, {.margin = 0}).minutiae) {
      if (m.type != MinutiaType::Termination) continue;
      const PixelPos p = ft::rotate_ccw(m.pos(), skel.width());
      const double a = termination_angle(skel, m.pos());
      const double b = termination_angle(rot, p);
      CHECK(circular_distance(a + 90.0, b) < 1e-9);
    }
  }
}

TEST_CASE("bifurcation angle of a fork opening east") {
  const BinaryImage img = tuning_fork(60, {30, 25});
  CHECK(crossing_number(img, 30, 25) >= 3);
  CHECK(bifurcation_angle(img, {30, 25}) == doctest::Approx(0.0));

  BinaryImage rot = img;
  PixelPos p{30, 25};
  for (int k = 1; k <= 3; ++k) {
    p = ft::rotate_ccw(p, rot.width());
    rot = ft::rotate_ccw(rot);
    CAPTURE(k);
    CHECK(bifurcation_angle(rot, p) == doctest::Approx(90.0 * k));
  }
}

TEST_CASE("bifurcation angle errors") {
  BinaryImage img(40, 40);
  ft::draw_line(img, 20, 10, 20, 30);
  CHECK(code_of([&] { bifurcation_angle(img, {20, 20}); }) == ErrorCode::NotBifurcation);

  // A junction whose window holds no valley ending: ridges filling every
  // background pixel but a closed pocket.
  BinaryImage cross(30, 30);
  ft::draw_line(cross, 15, 0, 15, 29);
  ft::draw_line(cross, 0, 15, 29, 15);
  const MinutiaeSet set = extract(cross, {.margin = 0});
  for (const auto& m : set.minutiae) {
    if (m.type == MinutiaType::Bifurcation && m.degenerate_angle) CHECK(m.theta == 0.0);
  }
}

TEST_CASE("extract on synthetic fingerprints") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const GrayImage gray = ft::synth_fingerprint(seed);
    const BinaryImage skel = thin(binarize(gray, {}));
    const MinutiaeSet set = extract(skel);
    CAPTURE(seed);
    CHECK_FALSE(set.empty());
    for (const auto& m : set.minutiae) {
      CHECK(m.theta >= 0.0);
      CHECK(m.theta < 360.0);
      const int cn = crossing_number(skel, m.row, m.col);
      CHECK((m.type == MinutiaType::Termination ? cn == 1 : cn >= 3));
    }
  }
}

TEST_CASE("data matrix and CSV") {
  MinutiaeSet set;
  set.minutiae.push_back({12, 40, 33.25, MinutiaType::Termination});
  set.minutiae.push_back({7, 3, 270.0, MinutiaType::Bifurcation});

  const auto rows = to_data_matrix(set);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == DataMatrixRow{7, 3, 270.0, 3});

  const std::string text = format_csv(set);
  CHECK(text == "row,col,theta,type\n12,40,33.25,1\n7,3,270.00,3\n");
  CHECK(parse_csv(text).minutiae == set.minutiae);
  CHECK(format_csv(MinutiaeSet{}) == "row,col,theta,type\n");
  CHECK(parse_csv("row,col,theta,type\n").empty());
  CHECK(parse_csv("row,col,theta,type\r\n1,2,3.5,1\r\n").size() == 1);
}

TEST_CASE("CSV round trip through a file") {
  ft::TempDir dir;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    MinutiaeSet set = ft::random_minutiae(rng, 25, 300, 300, 4.0);
    for (auto& m : set.minutiae) m.theta = quantize_degrees(m.theta);
    save_csv(set, dir / "s.csv");
    CHECK(load_csv(dir / "s.csv").minutiae == set.minutiae);
  }
}

TEST_CASE("malformed CSV") {
  const char* bad[] = {
      "",
      "x,y,theta,type\n1,2,3,1\n",
      "row,col,theta,type\n1,2,3\n",
      "row,col,theta,type\n1,2,3,1,5\n",
      "row,col,theta,type\na,2,3,1\n",
      "row,col,theta,type\n-1,2,3,1\n",
      "row,col,theta,type\n1,2,360,1\n",
      "row,col,theta,type\n1,2,-0.5,1\n",
      "row,col,theta,type\n1,2,3,2\n",
      "row,col,theta,type\n1,2,3,1\n1,2,4,3\n",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK(code_of([&] { parse_csv(text); }) == ErrorCode::MalformedCsv);
  }
  ft::TempDir dir;
  CHECK(code_of([&] { load_csv(dir / "none.csv"); }) == ErrorCode::FileNotFound);
}

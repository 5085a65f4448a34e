#include <doctest.h>

#include "scribeforge/bezier.hpp"
#include "scribeforge/errors.hpp"

#include "../oracles.hpp"
#include "../support.hpp"

#include <cmath>

using namespace scribeforge;

TEST_CASE("bernstein examples") {
  CHECK(bernstein(0, 0, 0.37) == 1.0);
  CHECK(bernstein(0, 1, 0.0) == 1.0);
  CHECK(bernstein(1, 1, 0.0) == 0.0);
  CHECK(bernstein(2, 5, 0.3) == doctest::Approx(10 * 0.09 * 0.343).epsilon(1e-12));
  CHECK(bernstein(2, 5, 0.3) == doctest::Approx(0.3087).epsilon(1e-12));
  CHECK(bernstein(3, 3, 1.0) == 1.0);
  CHECK(bernstein(0, 3, 1.0) == 0.0);
  CHECK_THROWS_AS(bernstein(4, 3, 0.5), InvalidArgument);
  CHECK_THROWS_AS(bernstein(-1, 3, 0.5), InvalidArgument);
  CHECK_THROWS_AS(bernstein(1, 3, 1.5), InvalidArgument);
}

TEST_CASE("bernstein partition of unity") {
  double worst = 0.0;
  for (int n = 0; n <= 20; ++n) {
    for (int i = 0; i <= 1000; ++i) {
      const double s = i / 1000.0;
      double sum = 0.0;
      for (int j = 0; j <= n; ++j) {
        sum += bernstein(j, n, s);
      }
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("bezier_point examples") {
  const ControlPolygon line({{0, 0}, {4, 0}});
  CHECK(bezier_point(line, 0.25).x == doctest::Approx(1.0));
  const ControlPolygon quad({{0, 0}, {2, 2}, {4, 0}});
  const auto mid = bezier_point(quad, 0.5);
  CHECK(mid.x == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mid.y == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bezier_point(quad, 0.0) == Point2{0, 0});
  CHECK(bezier_point(quad, 1.0) == Point2{4, 0});

  CHECK_THROWS_AS(ControlPolygon({{0, 0}}), InvalidArgument);
  CHECK_THROWS_AS(ControlPolygon({{0, 0}, {NAN, 1}}), InvalidArgument);
  CHECK_THROWS_AS(bezier_point(quad, 1.01), InvalidArgument);
}

namespace {

ControlPolygon random_polygon(RngState& rng, std::size_t max_points = 12) {
  std::vector<Point2> pts(static_cast<std::size_t>(rng.uniform_int(2, static_cast<std::int64_t>(max_points))));
  for (auto& p : pts) {
    p = Point2{rng.uniform_real(-100, 100), rng.uniform_real(-100, 100)};
  }
  return ControlPolygon(pts);
}

} // namespace

TEST_CASE("bezier_point agrees with de Casteljau") {
  RngState rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const auto poly = random_polygon(rng);
    const std::vector<Point2> pts(poly.points().begin(), poly.points().end());
    const double s = rng.uniform_real();
    const auto a = bezier_point(poly, s);
    const auto b = oracle::de_casteljau(pts, s);
    REQUIRE(std::abs(a.x - b.x) < 1e-9);
    REQUIRE(std::abs(a.y - b.y) < 1e-9);
  }
}

TEST_CASE("endpoint, hull and affine properties") {
  RngState rng(22);
  for (int trial = 0; trial < 300; ++trial) {
    const auto poly = random_polygon(rng);
    const auto pts = poly.points();
    const auto p0 = bezier_point(poly, 0.0);
    const auto p1 = bezier_point(poly, 1.0);
    REQUIRE(std::abs(p0.x - pts.front().x) < 1e-12);
    REQUIRE(std::abs(p0.y - pts.front().y) < 1e-12);
    REQUIRE(std::abs(p1.x - pts.back().x) < 1e-12);
    REQUIRE(std::abs(p1.y - pts.back().y) < 1e-12);

    const auto hull = oracle::convex_hull({pts.begin(), pts.end()});
    for (const auto& p : sample_curve(poly, 101)) {
      REQUIRE(oracle::in_hull(hull, p, 1e-9));
    }

    const double k = rng.uniform_real(0.1, 5.0);
    const Point2 shift{rng.uniform_real(-50, 50), rng.uniform_real(-50, 50)};
    std::vector<Point2> moved;
    for (const auto& p : pts) {
      moved.push_back(Point2{k * p.x + shift.x, k * p.y + shift.y});
    }
    const double s = rng.uniform_real();
    const auto a = bezier_point(ControlPolygon(moved), s);
    const auto b = bezier_point(poly, s);
    REQUIRE(std::abs(a.x - (k * b.x + shift.x)) < 1e-9);
    REQUIRE(std::abs(a.y - (k * b.y + shift.y)) < 1e-9);
  }
}

TEST_CASE("sample_curve examples") {
  const ControlPolygon line({{0, 0}, {4, 0}});
  const auto xs = sample_curve(line, 5);
  REQUIRE(xs.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(xs[static_cast<std::size_t>(i)].x == doctest::Approx(i));
  }
  const auto ends = sample_curve(line, 2);
  CHECK(ends[0] == Point2{0, 0});
  CHECK(ends[1] == Point2{4, 0});
  CHECK_THROWS_AS(sample_curve(line, 1), InvalidArgument);
}

TEST_CASE("rasterize_stroke examples") {
  const auto blank = new_blank(20, 9, 255);
  const std::vector<Point2> horizontal{{-2, 4}, {25, 4}};
  CHECK(rasterize_stroke(blank, horizontal, 1.0, 0.0, 0) == blank);

  const auto row = rasterize_stroke(blank, horizontal, 1.0, 1.0, 0);
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 20; ++x) {
      REQUIRE(row.at(x, y) == (y == 4 ? 0 : 255));
    }
  }

  // One disc for a single point path.
  const std::vector<Point2> dot{{5, 5}};
  const auto disc = rasterize_stroke(blank, dot, 3.0, 1.0, 0);
  int dark = 0;
  for (auto v : disc.pixels()) {
    dark += v == 0;
  }
  CHECK(dark == 9); // 3x3 block: the diagonal neighbours sit at sqrt(2) < 1.5

  CHECK_THROWS_AS(rasterize_stroke(blank, std::vector<Point2>{}, 1.0, 1.0, 0), InvalidArgument);
}

TEST_CASE("overlapping segments composite once") {
  const auto blank = new_blank(30, 10, 255);
  // A path that doubles back over itself many times.
  std::vector<Point2> path;
  for (int i = 0; i < 10; ++i) {
    path.push_back(Point2{2, 5});
    path.push_back(Point2{27, 5});
  }
  const auto out = rasterize_stroke(blank, path, 3.0, 0.5, 0);
  const Luminance expected = blend_ink(255, 0.5, 0);
  for (auto v : out.pixels()) {
    REQUIRE((v == 255 || v == expected));
  }
}

TEST_CASE("stroke coverage matches the distance oracle") {
  RngState rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const int w = 64;
    const int h = 48;
    std::vector<Point2> path(static_cast<std::size_t>(rng.uniform_int(1, 8)));
    for (auto& p : path) {
      p = Point2{rng.uniform_real(-10, w + 10), rng.uniform_real(-10, h + 10)};
    }
    const double thickness = rng.uniform_real(1.0, 6.0);
    const auto got = stroke_coverage(w, h, path, thickness);
    const auto want = oracle::stroke_pixels(w, h, path, thickness);
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (want[i] != 2) {
        REQUIRE(got[i] == want[i]);
      }
    }
  }
}

TEST_CASE("a stroke never darkens past one composite") {
  RngState rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = rng.uniform_real();
    std::vector<Point2> path(20);
    for (auto& p : path) {
      p = Point2{rng.uniform_real(0, 40), rng.uniform_real(0, 20)};
    }
    const auto out = rasterize_stroke(new_blank(40, 20, 255), path, 3.0, a, 0);
    const Luminance floor = blend_ink(255, a, 0);
    for (auto v : out.pixels()) {
      REQUIRE(v >= floor);
    }
  }
}

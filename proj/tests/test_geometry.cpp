#include "doctest.h"
#include "semihol/geometry.hpp"
#include "semihol/interface.hpp"

using namespace semihol;

namespace {
std::vector<std::pair<double, double>> rect_path(double x0, double x1, double t0, double t1) {
  return {{x0, t0}, {x1, t0}, {x1, t1}, {x0, t1}};
}
}  // namespace

TEST_CASE("primal rectangle columns") {
  auto dom = build_domain(Lattice{1.0}, DomainKind::primal, rect_path(0, 3, 0, 2));
  int blacks = 0, whites = 0;
  for (const auto& [k, span] : dom.columns) {
    REQUIRE(span.intervals.size() == 1);
    CHECK(span.intervals[0].lo == 0.0);
    CHECK(span.intervals[0].hi == 2.0);
    (Lattice::is_black(k) ? blacks : whites)++;
  }
  CHECK(blacks == 4);
  CHECK(whites == 3);
  CHECK(dom.interior_length(1) == doctest::Approx(2.0));
  CHECK(dom.interior_length(0) == 0.0);
  CHECK(dom.interior_length(6) == 0.0);
  CHECK(dom.interior_length(2) == doctest::Approx(2.0));
}

TEST_CASE("point classification on the rectangle") {
  auto dom = build_domain(Lattice{1.0}, DomainKind::primal, rect_path(0, 3, 0, 2));
  auto c1 = dom.classify(0, 1.0);
  CHECK(c1.color == PointColor::black);
  CHECK(c1.position == PointPosition::vertical_boundary);
  auto c2 = dom.classify(2, 0.0);
  CHECK(c2.color == PointColor::black);
  CHECK(c2.position == PointPosition::horizontal_boundary);
  auto c3 = dom.classify(3, 1.0);
  CHECK(c3.color == PointColor::white);
  CHECK(c3.position == PointPosition::interior);
  CHECK(dom.classify(3, 5.0).position == PointPosition::exterior);
  CHECK(dom.classify(-4, 1.0).position == PointPosition::exterior);
}

TEST_CASE("classification is exhaustive and exclusive") {
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 1.0);
  for (int k = dom.min_col() - 1; k <= dom.max_col() + 1; ++k) {
    for (double t : {-0.5, 0.0, 0.25, 0.75, 1.0, 1.5, 2.0, 2.5}) {
      auto c = dom.classify(k, t);
      int kinds = (c.position == PointPosition::interior) +
                  (c.position == PointPosition::vertical_boundary) +
                  (c.position == PointPosition::horizontal_boundary) +
                  (c.position == PointPosition::exterior);
      CHECK(kinds == 1);
    }
  }
  for (const auto& [k, ivs] : dom.interior) {
    for (const auto& iv : ivs) {
      double mid = 0.5 * (iv.lo + iv.hi);
      bool wn = dom.classify(k - 1, mid).position != PointPosition::exterior;
      bool en = dom.classify(k + 1, mid).position != PointPosition::exterior;
      CHECK(wn);
      CHECK(en);
    }
  }
}

TEST_CASE("dobrushin rectangle marks and arcs") {
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 0.8);
  REQUIRE(dom.marks.has_value());
  CHECK(dom.marks->a.medial_index == -1);
  CHECK(dom.marks->a.t == 1.0);
  CHECK(dom.marks->b.medial_index == 6);
  CHECK(dom.marks->b.t == 0.8);
  CHECK(dom.marks->a_start == Dir::down);
  CHECK(dom.marks->b_arrive == Dir::up);

  auto [black, white] = dom.boundary_arcs();
  CHECK(black.verticals.size() == 2);
  for (const auto& v : black.verticals) CHECK(v.color == PointColor::black);
  CHECK(white.verticals.size() == 2);
  for (const auto& v : white.verticals) CHECK(v.color == PointColor::white);
  bool top_black = false, bottom_white = false;
  for (const auto& h : black.horizontals)
    if (h.t == 2.0) top_black = true;
  for (const auto& h : white.horizontals)
    if (h.t == 0.0) bottom_white = true;
  CHECK(top_black);
  CHECK(bottom_white);
}

TEST_CASE("rebuild is idempotent") {
  auto dom = make_dobrushin_rect(0.5, 5, 1.5, 0.7, 0.9);
  auto dom2 = rebuild_domain(dom);
  REQUIRE(dom2.columns.size() == dom.columns.size());
  for (const auto& [k, span] : dom.columns) {
    REQUIRE(dom2.columns.count(k) == 1);
    const auto& other = dom2.columns.at(k).intervals;
    REQUIRE(other.size() == span.intervals.size());
    for (size_t i = 0; i < other.size(); ++i) {
      CHECK(other[i].lo == span.intervals[i].lo);
      CHECK(other[i].hi == span.intervals[i].hi);
    }
  }
  CHECK(dom2.marks->a.medial_index == dom.marks->a.medial_index);
}

TEST_CASE("invalid inputs are rejected") {
  Lattice latt{1.0};
  CHECK_THROWS_AS(build_domain(latt, DomainKind::primal,
                               {{0, 0}, {1.3, 0}, {1.3, 1}, {0, 1}}),
                  Error);
  CHECK_THROWS_AS(build_domain(latt, DomainKind::primal, rect_path(0.5, 2.5, 0, 1)), Error);
  CHECK_THROWS_AS(build_domain(latt, DomainKind::dobrushin, rect_path(0, 3, 0, 2)), Error);
  CHECK_THROWS_AS(build_domain(latt, DomainKind::primal,
                               {{0, 0}, {2, 0}, {2, 2}, {1, 2}, {1, -1}, {0, -1}}),
                  Error);
}

TEST_CASE("neighbour assumption violation") {
  // A slab with two half-step-wide tabs: the tab walls mix parities, so the
  // vertical boundary there has exterior points on both horizontal sides.
  Lattice latt{1.0};
  std::vector<std::pair<double, double>> path = {
      {0, 1}, {-0.5, 1}, {-0.5, 0}, {2.5, 0}, {2.5, 1}, {2, 1}, {2, 0.2}, {0, 0.2}};
  auto marks = std::make_pair(MedialPoint{-1, 1.0}, MedialPoint{4, 1.0});
  try {
    build_domain(latt, DomainKind::dobrushin, path, marks);
    FAIL("expected ViolatedNeighborAssumption");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ViolatedNeighborAssumption);
  }
}

TEST_CASE("swapped dobrushin marks are rejected") {
  auto dom = make_dobrushin_rect(1.0, 3, 2.0, 1.0, 1.2);
  std::vector<std::pair<double, double>> xy;
  for (const auto& v : dom.path) xy.push_back({dom.lattice.column_x(v.x_half), v.t});
  auto swapped = std::make_pair(dom.marks->b, dom.marks->a);
  CHECK_THROWS_AS(build_domain(dom.lattice, DomainKind::dobrushin, xy, swapped), Error);
}

TEST_CASE("medial intervals of the dobrushin rectangle") {
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 0.8);
  auto m = dom.medial_intervals(-1);
  REQUIRE(m.size() == 1);
  CHECK(m[0].lo == 0.0);
  CHECK(m[0].hi == 1.0);
  auto mi = dom.medial_intervals(1);
  REQUIRE(mi.size() == 1);
  CHECK(mi[0].lo == 0.0);
  CHECK(mi[0].hi == 2.0);
  CHECK(dom.medial_intervals(7).empty());
}

TEST_CASE("adjacent marks leave one arc minimal") {
  // Both jogs sit on a small bump at the bottom: the black arc is just the
  // bump, the white arc wraps everything else.
  Lattice latt{1.0};
  std::vector<std::pair<double, double>> path = {
      {0.5, 0.5}, {0.5, 2}, {2.5, 2}, {2.5, 0.5}, {2.0, 0.5}, {2.0, 0}, {1.0, 0}, {1.0, 0.5}};
  auto marks = std::make_pair(MedialPoint{4, 0.5}, MedialPoint{1, 0.5});
  auto dom = build_domain(latt, DomainKind::dobrushin, path, marks);
  REQUIRE(dom.marks.has_value());
  auto [black, white] = dom.boundary_arcs();
  CHECK(black.verticals.size() == 2);
  int black_pieces = 0;
  for (const auto& h : black.horizontals)
    if (h.k_hi - h.k_lo > 1) ++black_pieces;
  CHECK(black_pieces == 1);
  CHECK(white.verticals.size() == 2);
  Configuration cfg;
  auto tr = trace_arrangement(dom, cfg);
  CHECK(tr.loop_count() == 0);
  CHECK(tr.interface.back().dir == Dir::right);
}

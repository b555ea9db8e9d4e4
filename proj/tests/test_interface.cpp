#include "doctest.h"
#include "semihol/interface.hpp"

using namespace semihol;

namespace {

long mod4(long q) {
  long r = q % 4;
  return r < 0 ? r + 4 : r;
}

// W must be congruent to -arg(dir) mod 2pi, i.e. quarters = -dir mod 4.
bool winding_convention_ok(const Pass& p) {
  return mod4(p.winding_quarters) == mod4(-long(int(p.dir)));
}

}  // namespace

TEST_CASE("empty configuration traces a unique snake") {
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 1.0);
  Configuration cfg;
  auto tr = trace_arrangement(dom, cfg);
  CHECK(tr.loop_count() == 0);
  REQUIRE(!tr.interface.empty());
  CHECK(tr.interface.front().kind == TraceSegment::Kind::vertical);
  CHECK(tr.interface.front().medial == -1);
  CHECK(tr.interface.front().dir == Dir::down);
  CHECK(tr.interface.back().kind == TraceSegment::Kind::exit);
  CHECK(tr.interface.back().dir == Dir::right);
  // The snake visits every medial line exactly once.
  int vruns = 0;
  for (const auto& s : tr.interface)
    if (s.kind == TraceSegment::Kind::vertical) ++vruns;
  CHECK(vruns == 8);
}

TEST_CASE("single bridge makes exactly two quarter turns at the hop") {
  auto dom = make_dobrushin_rect(1.0, 2, 2.0, 1.0, 1.0);
  Configuration cfg;
  cfg.bridges[1] = {0.5};
  auto tr = trace_arrangement(dom, cfg);
  // Find the hop crossing the white column at the bridge.
  int hop_idx = -1;
  for (size_t i = 0; i < tr.interface.size(); ++i)
    if (tr.interface[i].kind == TraceSegment::Kind::hop && tr.interface[i].col == 1 &&
        tr.interface[i].t == 0.5)
      hop_idx = int(i);
  REQUIRE(hop_idx > 0);
  CHECK(std::abs(tr.turn_after[hop_idx - 1]) == 1);
  CHECK(std::abs(tr.turn_after[hop_idx]) == 1);
  CHECK(tr.turn_after[hop_idx - 1] == tr.turn_after[hop_idx]);
  // Cross-check the loop count.
  auto cc = count_components(dom, cfg, BoundaryMode::dobrushin_wired);
  CHECK(tr.loop_count() == cc.loops);
}

TEST_CASE("loop counts agree with union-find over random configurations") {
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 1.4);
  SplitMix64 rng(101);
  for (int rep = 0; rep < 1000; ++rep) {
    auto cfg = sample_poisson(dom, 0.7, 0.7, rng);
    auto tr = trace_arrangement(dom, cfg);
    auto cc = count_components(dom, cfg, BoundaryMode::dobrushin_wired);
    REQUIRE(tr.loop_count() == cc.loops);
    for (const auto& loop : tr.loops) REQUIRE(std::abs(loop.total_quarters) == 4);
  }
}

TEST_CASE("total interface turning does not depend on the configuration") {
  auto dom = make_dobrushin_rect(1.0, 5, 2.0, 0.6, 1.5);
  SplitMix64 rng(55);
  Configuration empty;
  long expected = trace_arrangement(dom, empty).total_turn_quarters();
  for (int rep = 0; rep < 300; ++rep) {
    auto cfg = sample_poisson(dom, 0.9, 0.9, rng);
    auto tr = trace_arrangement(dom, cfg);
    REQUIRE(tr.total_turn_quarters() == expected);
  }
}

TEST_CASE("winding of every pass matches its direction modulo full turns") {
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 1.0);
  SplitMix64 rng(77);
  for (int rep = 0; rep < 200; ++rep) {
    auto cfg = sample_poisson(dom, 0.7, 0.7, rng);
    auto tr = trace_arrangement(dom, cfg);
    for (int k = dom.min_col(); k <= dom.max_col(); ++k) {
      for (double t : {0.21, 0.77, 1.13, 1.69}) {
        auto rec = passes_at(tr, {k, t});
        for (const auto& p : rec.passes) REQUIRE(winding_convention_ok(p));
      }
      if (auto* pts = cfg.column_points(k)) {
        for (double t : *pts) {
          auto rec = passes_at(tr, {k, t});
          for (const auto& p : rec.passes) {
            REQUIRE(!is_vertical(p.dir));
            REQUIRE(winding_convention_ok(p));
          }
        }
      }
    }
  }
}

TEST_CASE("pass at the exit segment has zero winding") {
  auto dom = make_dobrushin_rect(1.0, 3, 2.0, 1.0, 1.0);
  Configuration cfg;
  auto tr = trace_arrangement(dom, cfg);
  const auto& last = tr.interface.back();
  CHECK(tr.suffix_turn[tr.interface.size() - 1] == 0);
  CHECK(last.dir == Dir::right);
  // One turn before the exit: +-pi/2.
  CHECK(std::abs(tr.turn_after[tr.interface.size() - 2]) == 1);
}

TEST_CASE("unvisited points report no passes") {
  auto dom = make_dobrushin_rect(1.0, 3, 2.0, 1.0, 1.0);
  Configuration cfg;
  auto tr = trace_arrangement(dom, cfg);
  auto rec = passes_at(tr, {2, 5.0});
  CHECK(rec.passes.empty());
}

TEST_CASE("coincident event times are rejected") {
  auto dom = make_dobrushin_rect(1.0, 3, 2.0, 1.0, 1.0);
  Configuration cfg;
  cfg.cuts[2] = {0.5};
  cfg.bridges[1] = {0.5};
  CHECK_THROWS_AS(trace_arrangement(dom, cfg), Error);
}

TEST_CASE("winding to exit converts quarters to radians") {
  auto dom = make_dobrushin_rect(1.0, 3, 2.0, 1.0, 1.0);
  Configuration cfg;
  auto tr = trace_arrangement(dom, cfg);
  auto rec = passes_at(tr, {2, 0.5});
  REQUIRE(!rec.passes.empty());
  for (const auto& p : rec.passes)
    CHECK(winding_to_exit(tr, p) == doctest::Approx(p.winding_quarters * kPi / 2));
  Pass foreign;
  foreign.segment_index = 10000;
  CHECK_THROWS_AS(winding_to_exit(tr, foreign), Error);
}

TEST_CASE("reversed traversal negates every turn") {
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 1.4);
  SplitMix64 rng(2042);
  auto cfg = sample_poisson(dom, 0.7, 0.7, rng);
  auto tr = trace_arrangement(dom, cfg);
  for (size_t i = 0; i + 1 < tr.interface.size(); ++i) {
    Dir d1 = tr.interface[i].dir, d2 = tr.interface[i + 1].dir;
    int fwd = quarter_turn(d1, d2);
    int bwd = quarter_turn(opposite(d2), opposite(d1));
    CHECK(fwd == tr.turn_after[i]);
    CHECK(bwd == -fwd);
  }
}

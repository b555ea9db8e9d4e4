#include <set>

#include "doctest.h"
#include "semihol/configuration.hpp"
#include "semihol/stats.hpp"

using namespace semihol;

namespace {

// Independent component-count oracle: enumerate elementary segments, build the
// adjacency graph by brute force, and BFS.  Interval topology, wired mode.
int flood_fill_black_components(const SemiDiscreteDomain& dom, const Configuration& cfg) {
  struct Seg {
    int col;
    double lo, hi;
    bool wired = false;
  };
  std::vector<Seg> segs;
  for (const auto& [k, span] : dom.columns) {
    if (!Lattice::is_black(k)) continue;
    for (const auto& iv : span.intervals) {
      std::vector<double> b{iv.lo};
      if (auto it = cfg.cuts.find(k); it != cfg.cuts.end())
        for (double t : it->second)
          if (t > iv.lo && t < iv.hi) b.push_back(t);
      b.push_back(iv.hi);
      for (size_t i = 0; i + 1 < b.size(); ++i) segs.push_back({k, b[i], b[i + 1]});
    }
  }
  for (auto& s : segs) {
    for (const auto& ve : dom.vertical_edges)
      if (ve.color == PointColor::black && ve.k == s.col && s.hi > ve.span.lo && s.lo < ve.span.hi)
        s.wired = true;
    for (const auto& he : dom.horizontal_edges) {
      if (he.k_hi - he.k_lo == 1 || he.color != PointColor::black) continue;
      if (he.k_lo <= s.col && s.col <= he.k_hi && (s.lo == he.t || s.hi == he.t)) s.wired = true;
    }
  }
  int n = int(segs.size());
  std::vector<std::vector<int>> adj(n + 1);  // node n = wired boundary block
  auto connect = [&](int a, int b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (int i = 0; i < n; ++i)
    if (segs[i].wired) connect(i, n);
  for (const auto& [k, ts] : cfg.bridges)
    for (double t : ts)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (segs[i].col == k - 1 && segs[j].col == k + 1 && t >= segs[i].lo && t <= segs[i].hi &&
              t >= segs[j].lo && t <= segs[j].hi)
            connect(i, j);
  std::vector<char> seen(n + 1, 0);
  int comps = 0;
  for (int s = 0; s <= n; ++s) {
    if (seen[s]) continue;
    ++comps;
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
  }
  return comps;
}

}  // namespace

TEST_CASE("zero rate gives the empty configuration") {
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 1.0);
  SplitMix64 rng(7);
  auto cfg = sample_poisson(dom, 0.0, 0.0, rng);
  CHECK(cfg.size() == 0);
}

TEST_CASE("poisson mean count matches the analytic value") {
  // Periodic strip, 4 columns of length 2: total black length 8.
  auto dom = make_primal_rect(1.0, 2, 8, 0.0, 2.0);
  double rate = 1.0 / std::sqrt(2.0);
  const int n = 100000;
  SplitMix64 rng(2024);
  long total = 0;
  std::vector<long> hist(40, 0);
  for (int i = 0; i < n; ++i) {
    auto cfg = sample_poisson_periodic(dom, rate, 0.0, 2.0, rng);
    size_t c = cfg.cut_count();
    total += long(c);
    if (c < hist.size()) ++hist[c];
  }
  double lambda = 8.0 / std::sqrt(2.0);  // = 5.657
  double mean = double(total) / n;
  double se = std::sqrt(lambda / n);
  CHECK(std::abs(mean - lambda) < 3 * se);
  // Chi-squared goodness of fit against the Poisson pmf.
  std::vector<double> probs(hist.size());
  double p = std::exp(-lambda);
  for (size_t k = 0; k < probs.size(); ++k) {
    probs[k] = p;
    p *= lambda / double(k + 1);
  }
  auto gof = chi2_gof(hist, probs, n);
  CHECK(gof.p_value > 0.001);
}

TEST_CASE("fixed seed reproduces the configuration") {
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 1.0);
  SplitMix64 r1(99), r2(99);
  auto c1 = sample_poisson(dom, 0.7, 0.7, r1);
  auto c2 = sample_poisson(dom, 0.7, 0.7, r2);
  CHECK(c1 == c2);
}

TEST_CASE("duality is an involution") {
  auto dom = make_primal_rect(1.0, 0, 6, 0.0, 2.0);
  Configuration cfg;
  cfg.bridges[1] = {0.4};
  auto dual = dual_configuration(dom, cfg);
  CHECK(dual.cuts.at(1) == std::vector<double>{0.4});
  CHECK(dual.bridge_count() == 0);
  Configuration empty;
  CHECK(dual_configuration(dom, empty).size() == 0);

  SplitMix64 rng(5);
  auto c = sample_poisson(dom, 0.6, 0.9, rng);
  c.cuts.erase(0);
  c.cuts.erase(6);
  auto dd = dual_configuration(dom, dual_configuration(dom, c));
  CHECK(dd == c);

  Configuration bad;
  bad.cuts[0] = {1.0};
  CHECK_THROWS_AS(dual_configuration(dom, bad), Error);
}

TEST_CASE("periodic component count of the four-site sample") {
  // Hand-checked periodic configuration with five primal components.
  auto dom = make_primal_rect(1.0, 2, 8, 0.0, 1.0);  // columns x=1..4
  Configuration cfg;
  cfg.topology = TimeTopology::periodic;
  cfg.beta = 1.0;
  cfg.cuts[2] = {0.25, 0.75};
  cfg.cuts[4] = {0.5};
  cfg.cuts[8] = {0.3, 0.6, 0.9};
  cfg.bridges[3] = {0.4};
  cfg.bridges[7] = {0.5};
  auto cc = count_components(dom, cfg, BoundaryMode::periodic);
  CHECK(cc.k_black == 5);
}

TEST_CASE("wired empty configuration is a single component per colour") {
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 1.0);
  Configuration cfg;
  auto cc = count_components(dom, cfg, BoundaryMode::dobrushin_wired);
  CHECK(cc.k_black == 1);
  CHECK(cc.k_white == 1);
  CHECK(cc.loops == 0);
}

TEST_CASE("dobrushin sample with five loops") {
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 1.0);
  Configuration cfg;
  cfg.cuts[2] = {0.3, 0.5};
  cfg.cuts[4] = {0.2, 0.7};
  cfg.bridges[3] = {0.9};
  auto cc = count_components(dom, cfg, BoundaryMode::dobrushin_wired);
  CHECK(cc.k_black == 5);
  CHECK(cc.k_white == 2);
  CHECK(cc.loops == 5);
}

TEST_CASE("toggle is an involution and changes the loop count by one") {
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 1.0);
  SplitMix64 rng(31);
  for (int rep = 0; rep < 200; ++rep) {
    auto cfg = sample_poisson(dom, 0.7, 0.7, rng);
    LatticePoint z;
    do {
      int k = int(uniform_index(rng, dom.max_col() - dom.min_col() + 1)) + dom.min_col();
      z = {k, uniform_in(rng, 0.0, 2.0)};
    } while (dom.classify(z).position != PointPosition::interior);
    auto t1 = toggle(dom, cfg, z);
    CHECK(toggle(dom, t1, z) == cfg);
    int l0 = count_components(dom, cfg, BoundaryMode::dobrushin_wired).loops;
    int l1 = count_components(dom, t1, BoundaryMode::dobrushin_wired).loops;
    CHECK(std::abs(l1 - l0) == 1);
  }
  CHECK_THROWS_AS(toggle(dom, Configuration{}, LatticePoint{0, 1.5}), Error);
}

TEST_CASE("euler relation is constant over random configurations") {
  auto dom = make_dobrushin_rect(1.0, 5, 2.0, 0.8, 1.3);
  SplitMix64 rng(47);
  long expected = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    auto cfg = sample_poisson(dom, 0.8, 0.6, rng);
    auto cc = count_components(dom, cfg, BoundaryMode::dobrushin_wired);
    long e = long(cc.k_black) - long(cfg.cut_count()) - long(cc.k_white) + long(cfg.bridge_count());
    if (rep == 0) expected = e;
    REQUIRE(e == expected);
  }
}

TEST_CASE("union-find agrees with flood fill on small configurations") {
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 1.0);
  SplitMix64 rng(13);
  for (int rep = 0; rep < 300; ++rep) {
    Configuration cfg;
    while (true) {
      cfg = sample_poisson(dom, 0.45, 0.45, rng);
      if (cfg.size() <= 10) break;
    }
    auto cc = count_components(dom, cfg, BoundaryMode::dobrushin_wired);
    CHECK(cc.k_black == flood_fill_black_components(dom, cfg));
  }
}

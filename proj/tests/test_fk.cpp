#include "doctest.h"
#include "semihol/fk_observable.hpp"

using namespace semihol;

namespace {

LatticePoint random_interior_point(const SemiDiscreteDomain& dom, SplitMix64& rng) {
  while (true) {
    int span = dom.max_col() - dom.min_col() + 1;
    int k = int(uniform_index(rng, span)) + dom.min_col();
    double tmax = 0;
    for (const auto& [kk, s] : dom.columns)
      for (const auto& iv : s.intervals) tmax = std::max(tmax, iv.hi);
    LatticePoint z{k, uniform_in(rng, 0.0, tmax)};
    if (dom.classify(z).position == PointPosition::interior) return z;
  }
}

}  // namespace

TEST_CASE("pathwise turn identity holds on random configurations") {
  SplitMix64 rng(2718);
  std::vector<SemiDiscreteDomain> doms;
  doms.push_back(make_dobrushin_rect(1.0, 4, 2.0, 1.0, 1.0));
  doms.push_back(make_dobrushin_rect(1.0, 3, 1.5, 0.4, 1.1));
  doms.push_back(make_dobrushin_rect(0.5, 5, 1.0, 0.3, 0.6));
  int checked = 0;
  double max_res = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const auto& dom = doms[rep % doms.size()];
    double rate = 1.0 / (dom.lattice.delta * std::sqrt(2.0));
    auto cfg = sample_poisson(dom, rate, rate, rng);
    for (int zrep = 0; zrep < 2; ++zrep) {
      LatticePoint z = random_interior_point(dom, rng);
      for (Dir alpha : {Dir::up, Dir::down}) {
        auto r = pathwise_turn_identity(dom, cfg, z, alpha);
        max_res = std::max(max_res, r.residual);
        ++checked;
      }
    }
  }
  CHECK(checked >= 1000);
  CHECK(max_res < 1e-9);
}

TEST_CASE("turn identity when the interface passes in one direction only") {
  // A loop next to z leaves only one vertical pass on the interface; both
  // sides of the identity then reduce to a single winding phase.
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 1.0);
  SplitMix64 rng(999);
  int found = 0;
  for (int rep = 0; rep < 500 && found < 10; ++rep) {
    auto cfg = sample_poisson(dom, 0.8, 0.8, rng);
    LatticePoint z = random_interior_point(dom, rng);
    auto tr = trace_arrangement(dom, cfg);
    auto rec = passes_at(tr, z);
    bool has_up = rec.first(Dir::up), has_dn = rec.first(Dir::down);
    if (has_up == has_dn) continue;
    ++found;
    auto r = pathwise_turn_identity(dom, cfg, z, has_up ? Dir::up : Dir::down);
    CHECK(std::abs(r.lhs) == doctest::Approx(1.0));
    CHECK(std::abs(r.rhs) == doctest::Approx(1.0));
    CHECK(r.residual < 1e-12);
  }
  CHECK(found == 10);
}

TEST_CASE("winding relations between a configuration and its toggle") {
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 1.4);
  SplitMix64 rng(515);
  int checked = 0;
  for (int rep = 0; rep < 400; ++rep) {
    auto cfg = sample_poisson(dom, 0.7, 0.7, rng);
    LatticePoint z = random_interior_point(dom, rng);
    auto r = check_winding_relations(dom, cfg, z);
    REQUIRE(r.ok);
    if (r.checked) ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("vertical-derivative kernel identity holds for generic spin") {
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 1.0);
  SplitMix64 rng(808);
  for (double sigma : {0.5, 1.0 / 3.0, 1.0, 0.37}) {
    double max_res = 0;
    for (int rep = 0; rep < 150; ++rep) {
      auto cfg = sample_poisson(dom, 0.7, 0.7, rng);
      LatticePoint z = random_interior_point(dom, rng);
      for (Dir alpha : {Dir::up, Dir::down}) {
        auto r = pathwise_kernel_identity(dom, cfg, z, alpha, sigma);
        max_res = std::max(max_res, r.residual);
      }
    }
    CHECK(max_res < 1e-9);
  }
}

TEST_CASE("field estimation basics") {
  auto dom = make_dobrushin_rect(1.0, 3, 1.0, 0.5, 0.5);
  ChainParams p;
  p.seed = 12;
  p.burn_in = 40;
  p.thinning = 2;
  p.n_samples = 400;
  p.n_chains = 4;
  FieldOptions o;
  o.grid_spacing = 0.25;
  o.boundary_margin = 0.2;
  auto f = fk_field(dom, p, o);
  REQUIRE(!f.grid.empty());
  for (size_t i = 0; i < f.grid.size(); ++i) {
    const auto& st = f.sites[i];
    // Values lie on their lines: the up piece on e^{-i pi/4} R, etc.
    Complex up = st.phi_up.est.mean;
    CHECK(std::abs(proj_up(up) - up) < 1e-12 + 3 * std::abs(st.phi_up.est.std_error));
    Complex dn = st.phi_dn.est.mean;
    CHECK(std::abs(proj_down(dn) - dn) < 1e-12 + 3 * std::abs(st.phi_dn.est.std_error));
    Complex rt = st.phi_rt.est.mean;
    CHECK(std::abs(rt.imag()) < 1e-12);  // right pieces are real
    Complex lt = st.phi_lt.est.mean;
    CHECK(std::abs(lt.real()) < 1e-12);  // left pieces are imaginary
    // |F| <= 2 and F decomposes exactly.
    CHECK(std::abs(st.F.mean) <= 2.0);
    CHECK(std::abs(st.F.mean - (up + dn)) < 1e-14);
    CHECK(std::abs(proj_up(st.F.mean) - up) < 1e-13);
    // Vertical boundary sites have exactly zero horizontal pieces.
    if (f.grid[i].position == PointPosition::vertical_boundary) {
      CHECK(st.phi_lt.est.mean == Complex{0, 0});
      CHECK(st.phi_rt.est.mean == Complex{0, 0});
    }
  }
  // Pathwise pair equality: the up piece agrees across black/white pairs.
  for (size_t i = 0; i < f.grid.size(); ++i) {
    const auto& s = f.grid[i];
    if (s.color != PointColor::black) continue;
    const SiteStats* east = f.at(s.z.col + 1, s.row);
    if (!east) continue;
    CHECK(std::abs(f.sites[i].phi_up.est.mean - east->phi_up.est.mean) < 1e-14);
  }
}

TEST_CASE("estimator identities are exact under common random numbers") {
  auto dom = make_dobrushin_rect(1.0, 3, 1.0, 0.5, 0.5);
  ChainParams p;
  p.seed = 77;
  p.burn_in = 40;
  p.thinning = 2;
  p.n_samples = 300;
  p.n_chains = 4;
  FieldOptions o;
  o.grid_spacing = 0.25;
  o.boundary_margin = 0.2;
  auto f = fk_field(dom, p, o);
  auto rep = check_phi_dots(f);
  REQUIRE(!rep.turn_eq.empty());
  for (const auto& c : rep.turn_eq) CHECK(std::abs(c.residual) < 1e-12);
  for (const auto& c : rep.phi_dots) CHECK(std::abs(c.residual) < 1e-12);
  // The finite-difference route is a statistical cross-check only.
  CHECK(rep.max_z_fd < 6.0);
}

TEST_CASE("parafermionic field reduces to the critical one at q=2") {
  auto dom = make_dobrushin_rect(1.0, 3, 1.0, 0.5, 0.5);
  ChainParams p;
  p.seed = 3;
  p.burn_in = 20;
  p.thinning = 1;
  p.n_samples = 100;
  p.n_chains = 2;
  FieldOptions o;
  o.grid_spacing = 0.25;
  o.boundary_margin = 0.2;
  auto a = fk_field(dom, p, o);
  auto b = parafermionic_field(dom, 2.0, p, o);
  REQUIRE(a.grid.size() == b.grid.size());
  for (size_t i = 0; i < a.grid.size(); ++i) {
    CHECK(a.sites[i].F.mean == b.sites[i].F.mean);
    CHECK(a.sites[i].phi_lt.est.mean == b.sites[i].phi_lt.est.mean);
  }
  // q=4 has unit phases per full quarter turn: sigma = 1.
  CHECK(b.sigma == 0.5);
  auto c = parafermionic_field(dom, 4.0, p, o);
  CHECK(c.sigma == doctest::Approx(1.0));
  // The up piece agrees across pairs for every q.
  for (size_t i = 0; i < c.grid.size(); ++i) {
    const auto& s = c.grid[i];
    if (s.color != PointColor::black) continue;
    const SiteStats* east = c.at(s.z.col + 1, s.row);
    if (!east) continue;
    CHECK(std::abs(c.sites[i].phi_up.est.mean - east->phi_up.est.mean) < 1e-14);
  }
}

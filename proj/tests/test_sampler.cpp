#include "doctest.h"
#include "semihol/sampler.hpp"
#include "semihol/interface.hpp"

using namespace semihol;

TEST_CASE("weight spec constants") {
  auto w = make_weight_spec(2.0, 1.0);
  CHECK(w.base_rate == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(w.sigma == 0.5);
  auto w4 = make_weight_spec(4.0, 1.0);
  CHECK(w4.sigma == doctest::Approx(1.0));
  auto w1 = make_weight_spec(1.0, 2.0);
  CHECK(w1.sigma == doctest::Approx(1.0 / 3.0));
  CHECK(w1.base_rate == doctest::Approx(0.5));
  CHECK_THROWS_AS(make_weight_spec(5.0, 1.0), Error);
  CHECK_THROWS_AS(make_weight_spec(0.0, 1.0), Error);
}

TEST_CASE("importance estimate of a constant is exact") {
  auto dom = make_dobrushin_rect(1.0, 3, 1.5, 0.7, 0.7);
  auto w = make_weight_spec(2.0, 1.0);
  auto est = importance_estimate(dom, w, [](const Configuration&) { return Complex{1, 0}; },
                                 2000, 11);
  CHECK(est.mean.real() == doctest::Approx(1.0));
  CHECK(est.std_error.real() == doctest::Approx(0.0));
}

TEST_CASE("detailed balance on enumerated states") {
  // pi(xi) q(xi->xi') a(xi->xi') == pi(xi') q(xi'->xi) a(xi'->xi) for a
  // birth/death pair, with pi ~ lambda^n (sqrt q)^L and the implemented
  // acceptance ratios.
  auto dom = make_dobrushin_rect(1.0, 3, 1.0, 0.5, 0.5);
  auto w = make_weight_spec(2.0, 1.0);
  double D = 0;
  for (const auto& [k, ivs] : dom.interior)
    for (const auto& iv : ivs) D += iv.length();
  double lam = w.base_rate;
  for (double m : {0.5, 0.3, 0.7}) {
    for (int variant = 0; variant < 3; ++variant) {
      Configuration base;
      if (variant == 1) base.bridges[1] = {0.31};
      if (variant == 2) base.cuts[2] = {0.63};
      LatticePoint z{variant == 0 ? 3 : 2, 0.47};
      if (dom.classify(z).position != PointPosition::interior) continue;
      Configuration bigger = toggle(dom, base, z);
      int l0 = count_components(dom, base, BoundaryMode::dobrushin_wired).loops;
      int l1 = count_components(dom, bigger, BoundaryMode::dobrushin_wired).loops;
      double n = double(base.size());
      double sq = std::sqrt(w.q);
      double mix = (1.0 - m) / m;
      double a_birth = std::min(1.0, mix * lam * D / (n + 1) * std::pow(sq, l1 - l0));
      double a_death = std::min(1.0, (n + 1) / (mix * lam * D) * std::pow(sq, l0 - l1));
      // Unnormalized flow in both directions.
      double pi0 = std::pow(lam, n) * std::pow(sq, l0);
      double pi1 = std::pow(lam, n + 1) * std::pow(sq, l1);
      double flow01 = pi0 * (m / D) * a_birth;
      double flow10 = pi1 * ((1 - m) / (n + 1)) * a_death;
      CHECK(flow01 == doctest::Approx(flow10).epsilon(1e-12));
    }
  }
}

TEST_CASE("q=1 chain reproduces the poisson point count law") {
  auto dom = make_dobrushin_rect(1.0, 3, 1.0, 0.5, 0.5);
  auto w = make_weight_spec(1.0, 1.0);
  ChainParams p;
  p.seed = 4242;
  p.burn_in = 50;
  p.thinning = 2;
  p.n_samples = 20000;
  McmcChain chain(dom, w, p.seed);
  chain.advance(p.burn_in);
  double lam_tot = w.base_rate * chain.domain_length();
  std::vector<long> hist(30, 0);
  for (int i = 0; i < p.n_samples; ++i) {
    chain.advance(p.thinning);
    size_t n = chain.config().size();
    if (n < hist.size()) ++hist[n];
  }
  std::vector<double> probs(hist.size());
  double pr = std::exp(-lam_tot);
  for (size_t k = 0; k < probs.size(); ++k) {
    probs[k] = pr;
    pr *= lam_tot / double(k + 1);
  }
  // Thinned samples remain correlated; test against a generous 0.1% level.
  auto gof = chi2_gof(hist, probs, p.n_samples);
  CHECK(gof.p_value > 0.001);
}

TEST_CASE("cross-estimator agreement for the mean loop count") {
  auto dom = make_dobrushin_rect(1.0, 3, 1.0, 0.5, 0.5);
  auto w = make_weight_spec(2.0, 1.0);
  auto f = [&](const Configuration& c) {
    return Complex(double(count_components(dom, c, BoundaryMode::dobrushin_wired).loops), 0.0);
  };
  auto imp = importance_estimate(dom, w, f, 40000, 7);
  ChainParams p;
  p.seed = 9;
  p.burn_in = 100;
  p.thinning = 3;
  p.n_samples = 20000;
  auto mc = mcmc_expectation(dom, w, p, f);
  double z = mc.z_against(imp.mean, imp.std_error);
  CHECK(z < 3.0);
}

TEST_CASE("fixed seed reproduces the chain stream") {
  auto dom = make_dobrushin_rect(1.0, 3, 1.0, 0.5, 0.5);
  auto w = make_weight_spec(2.0, 1.0);
  McmcChain c1(dom, w, 31337), c2(dom, w, 31337);
  c1.advance(25);
  c2.advance(25);
  CHECK(c1.config() == c2.config());
}

TEST_CASE("parallel and serial chain runs are identical") {
  auto dom = make_dobrushin_rect(1.0, 3, 1.0, 0.5, 0.5);
  auto w = make_weight_spec(2.0, 1.0);
  ChainParams p;
  p.seed = 5;
  p.burn_in = 20;
  p.thinning = 1;
  p.n_samples = 50;
  p.n_chains = 4;
  auto collect = [&](bool parallel) {
    std::vector<std::vector<size_t>> counts(p.n_chains);
    run_chains(dom, w, p,
               [&](int c, int, McmcChain& mc) { counts[c].push_back(mc.config().size()); },
               parallel);
    return counts;
  };
  CHECK(collect(true) == collect(false));
}

TEST_CASE("too few samples for batch means") {
  std::vector<Complex> tiny(5, Complex{1, 0});
  CHECK_THROWS_AS(batch_means(tiny), Error);
}

TEST_CASE("checkpoint state restores the chain") {
  auto dom = make_dobrushin_rect(1.0, 3, 1.0, 0.5, 0.5);
  auto w = make_weight_spec(2.0, 1.0);
  McmcChain c1(dom, w, 404);
  c1.advance(30);
  Configuration snap = c1.config();
  std::uint64_t st = c1.rng().state();
  long sw = c1.sweeps_done();
  c1.advance(10);
  McmcChain c2(dom, w, 1);
  c2.set_state(snap, st, sw);
  c2.advance(10);
  CHECK(c1.config() == c2.config());
  CHECK(c1.sweeps_done() == c2.sweeps_done());
}

TEST_CASE("point-count probabilities agree between the two estimators") {
  auto dom = make_dobrushin_rect(1.0, 3, 1.0, 0.5, 0.5);
  auto w = make_weight_spec(2.0, 1.0);
  auto empty_indicator = [](const Configuration& c) {
    return Complex(c.size() == 0 ? 1.0 : 0.0, 0.0);
  };
  auto imp = importance_estimate(dom, w, empty_indicator, 30000, 21);
  ChainParams p;
  p.seed = 22;
  p.burn_in = 100;
  p.thinning = 3;
  p.n_samples = 15000;
  auto mc = mcmc_expectation(dom, w, p, empty_indicator);
  CHECK(mc.z_against(imp.mean, imp.std_error) < 3.0);
}

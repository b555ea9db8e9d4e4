#include "semihol/sampler.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace semihol {

WeightSpec make_weight_spec(double q, double delta) {
  if (!(q > 0) || q > 4.0)
    throw Error(ErrorCode::SigmaOutOfRange, "q must lie in (0, 4] for a real spin");
  WeightSpec w;
  w.q = q;
  w.base_rate = 1.0 / (delta * std::sqrt(q));
  w.sigma = (q == 2.0) ? 0.5 : 2.0 / kPi * std::asin(0.5 * std::sqrt(q));
  return w;
}

void ChainParams::validate() const {
  if (burn_in < 0 || thinning < 0 || n_samples < 1 || n_chains < 1 || move_mix <= 0 ||
      move_mix >= 1)
    throw Error(ErrorCode::SchemaError, "invalid chain parameters");
}

McmcChain::McmcChain(const SemiDiscreteDomain& dom, const WeightSpec& w, std::uint64_t seed)
    : dom_(dom), w_(w), rng_(SplitMix64::stream(seed, 0)) {
  for (const auto& [k, ivs] : dom.interior) {
    for (const auto& iv : ivs) {
      cells_.push_back({k, iv, total_len_});
      total_len_ += iv.length();
    }
  }
  if (total_len_ <= 0) throw Error(ErrorCode::InvalidConfig, "domain has no interior length");
  loops_ = recount(cfg_);
}

int McmcChain::recount(const Configuration& c) const {
  return count_components(dom_, c, BoundaryMode::dobrushin_wired).loops;
}

LatticePoint McmcChain::propose_point() {
  double u = uniform01(rng_) * total_len_;
  // Binary search over cumulative cell lengths.
  std::size_t lo = 0, hi = cells_.size();
  while (lo + 1 < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (cells_[mid].cum_lo <= u)
      lo = mid;
    else
      hi = mid;
  }
  const Cell& cell = cells_[lo];
  double t = cell.iv.lo + (u - cell.cum_lo);
  if (t >= cell.iv.hi) t = std::nextafter(cell.iv.hi, cell.iv.lo);
  return {cell.col, t};
}

void McmcChain::step() {
  ++proposals_;
  double lambda_d = w_.base_rate * total_len_;
  std::size_t n = cfg_.size();
  double sq = std::sqrt(w_.q);
  // Proposal-asymmetry factor; 1 at the default symmetric mix.
  double mix_ratio = (1.0 - move_mix) / move_mix;
  if (uniform01(rng_) < move_mix) {
    // Birth.
    LatticePoint z = propose_point();
    Configuration next = toggle(dom_, cfg_, z);
    int l2 = recount(next);
    double ratio = mix_ratio * lambda_d / double(n + 1) * std::pow(sq, l2 - loops_);
    if (uniform01(rng_) < std::min(1.0, ratio)) {
      cfg_ = std::move(next);
      loops_ = l2;
      ++accepts_;
    }
  } else {
    if (n == 0) return;
    // Death of a uniformly chosen point.
    std::uint64_t pick = uniform_index(rng_, n);
    int col = 0;
    double t = 0;
    std::uint64_t seen = 0;
    bool found = false;
    for (const auto* m : {&cfg_.cuts, &cfg_.bridges}) {
      for (const auto& [k, v] : *m) {
        if (!found && pick < seen + v.size()) {
          col = k;
          t = v[pick - seen];
          found = true;
        }
        seen += v.size();
      }
    }
    Configuration next = toggle(dom_, cfg_, {col, t});
    int l2 = recount(next);
    double ratio = double(n) / (mix_ratio * lambda_d) * std::pow(sq, l2 - loops_);
    if (uniform01(rng_) < std::min(1.0, ratio)) {
      cfg_ = std::move(next);
      loops_ = l2;
      ++accepts_;
    }
  }
}

void McmcChain::sweep() {
  int n = std::max(1, int(std::lround(w_.base_rate * total_len_)));
  for (int i = 0; i < n; ++i) step();
  ++sweeps_;
}

void McmcChain::advance(int n_sweeps) {
  for (int i = 0; i < n_sweeps; ++i) sweep();
}

double McmcChain::acceptance_rate() const {
  return proposals_ ? double(accepts_) / double(proposals_) : 0.0;
}

void McmcChain::set_state(const Configuration& cfg, std::uint64_t rng_state, long sweeps) {
  cfg_ = cfg;
  rng_.set_state(rng_state);
  sweeps_ = sweeps;
  loops_ = recount(cfg_);
}

WeightedEstimate importance_estimate(const SemiDiscreteDomain& dom, const WeightSpec& w,
                                     const std::function<Complex(const Configuration&)>& f,
                                     int n_draws, std::uint64_t seed) {
  std::vector<Complex> vals;
  std::vector<double> wts;
  vals.reserve(n_draws);
  wts.reserve(n_draws);
  double sq = std::sqrt(w.q);
  SplitMix64 rng = SplitMix64::stream(seed, 0x1577);
  for (int i = 0; i < n_draws; ++i) {
    Configuration cfg = sample_poisson(dom, w.base_rate, w.base_rate, rng);
    int loops = count_components(dom, cfg, BoundaryMode::dobrushin_wired).loops;
    vals.push_back(f(cfg));
    wts.push_back(std::pow(sq, loops));
  }
  return ratio_estimate(vals, wts);
}

WeightedEstimate mcmc_expectation(const SemiDiscreteDomain& dom, const WeightSpec& w,
                                  const ChainParams& params,
                                  const std::function<Complex(const Configuration&)>& f) {
  params.validate();
  McmcChain chain(dom, w, params.seed);
  chain.move_mix = params.move_mix;
  chain.advance(params.burn_in);
  std::vector<Complex> stream;
  stream.reserve(params.n_samples);
  for (int i = 0; i < params.n_samples; ++i) {
    chain.advance(params.thinning);
    stream.push_back(f(chain.config()));
  }
  return batch_means(stream);
}

void run_chains(const SemiDiscreteDomain& dom, const WeightSpec& w, const ChainParams& params,
                const std::function<void(int, int, McmcChain&)>& visit, bool parallel) {
  params.validate();
  auto run_one = [&](int c) {
    McmcChain chain(dom, w, SplitMix64::mix(params.seed ^ SplitMix64::mix(c + 1)));
    chain.move_mix = params.move_mix;
    chain.advance(params.burn_in);
    for (int i = 0; i < params.n_samples; ++i) {
      chain.advance(params.thinning);
      visit(c, i, chain);
    }
  };
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < params.n_chains; ++c) run_one(c);
    return;
  }
#else
  (void)parallel;
#endif
  for (int c = 0; c < params.n_chains; ++c) run_one(c);
}

}  // namespace semihol

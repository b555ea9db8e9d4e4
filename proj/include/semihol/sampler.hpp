#ifndef SEMIHOL_SAMPLER_HPP
#define SEMIHOL_SAMPLER_HPP

#include <cstdint>
#include <functional>

#include "semihol/configuration.hpp"
#include "semihol/stats.hpp"

namespace semihol {

// Loop-weighted law: density proportional to (sqrt q)^{L(xi)} against the
// Poisson process of intensity 1/(delta sqrt q) on both colours.
struct WeightSpec {
  double q = 2.0;
  double base_rate = 0.0;  // 1/(delta*sqrt(q)) per unit length
  double sigma = 0.5;      // sin(sigma*pi/2) = sqrt(q)/2
};

WeightSpec make_weight_spec(double q, double delta);

struct ChainParams {
  std::uint64_t seed = 1;
  int burn_in = 200;    // sweeps
  int thinning = 5;     // sweeps between retained samples
  int n_samples = 1000; // per chain
  double move_mix = 0.5;  // probability of proposing a birth
  int n_chains = 1;

  void validate() const;
};

// Birth-death Metropolis chain for the loop-weighted law on a Dobrushin
// domain.  A sweep is round(rate * |D|) proposals, |D| the total interior
// length over both colours.
class McmcChain {
 public:
  McmcChain(const SemiDiscreteDomain& dom, const WeightSpec& w, std::uint64_t seed);

  void step();                 // one birth/death proposal
  void sweep();                // rate*|D| proposals
  void advance(int n_sweeps);
  const Configuration& config() const { return cfg_; }
  int loops() const { return loops_; }
  double domain_length() const { return total_len_; }
  long sweeps_done() const { return sweeps_; }
  double acceptance_rate() const;
  SplitMix64& rng() { return rng_; }
  void set_state(const Configuration& cfg, std::uint64_t rng_state, long sweeps);

  // Uniform interior point over both colours.
  LatticePoint propose_point();

  double move_mix = 0.5;

 private:
  const SemiDiscreteDomain& dom_;
  WeightSpec w_;
  SplitMix64 rng_;
  Configuration cfg_;
  int loops_ = 0;
  double total_len_ = 0;
  long sweeps_ = 0;
  long proposals_ = 0, accepts_ = 0;

  struct Cell {
    int col;
    Interval iv;
    double cum_lo;  // cumulative length before this cell
  };
  std::vector<Cell> cells_;

  int recount(const Configuration& c) const;
};

// Self-normalized importance sampler: i.i.d. Poisson(base_rate) draws weighted
// by (sqrt q)^L.
WeightedEstimate importance_estimate(const SemiDiscreteDomain& dom, const WeightSpec& w,
                                     const std::function<Complex(const Configuration&)>& f,
                                     int n_draws, std::uint64_t seed);

// Chain expectation of f with batch-means errors (single chain).
WeightedEstimate mcmc_expectation(const SemiDiscreteDomain& dom, const WeightSpec& w,
                                  const ChainParams& params,
                                  const std::function<Complex(const Configuration&)>& f);

// Runs params.n_chains independent chains (OpenMP-parallel when enabled and
// parallel=true; bit-identical results either way) and hands every retained
// sample to visit(chain_index, sample_index, chain).  visit must be safe to
// call concurrently for different chain_index values.
void run_chains(const SemiDiscreteDomain& dom, const WeightSpec& w, const ChainParams& params,
                const std::function<void(int, int, McmcChain&)>& visit, bool parallel = true);

}  // namespace semihol

#endif

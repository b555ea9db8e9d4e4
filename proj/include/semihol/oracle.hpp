#ifndef SEMIHOL_ORACLE_HPP
#define SEMIHOL_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "semihol/stats.hpp"

namespace semihol {

// Quantum chain of n_sites spins with nearest-neighbour coupling and a
// transverse field, at inverse temperature beta.
struct QuantumSpec {
  int n_sites = 2;
  double coupling = 0.5;  // J
  double field = 0.5;     // h
  double beta = 1.0;

  void validate() const;
};

// tr exp(beta (J sum s3 s3 + h sum s1)) by dense symmetric eigendecomposition.
double partition_function(const QuantumSpec& spec);

// Thermal two-point function of the diagonal spin components, sites 1-based.
double two_point(const QuantumSpec& spec, int x, int y);

// Monte Carlo estimates of the two-point function and partition function from
// the three graphical representations on the periodic strip.
struct RepresentationReport {
  double exact_corr = 0;
  double exact_z = 0;
  WeightedEstimate fk_corr, rpr_corr, stim_corr;
  WeightedEstimate fk_z, rpr_z, stim_z;
  double z_fk = 0, z_rpr = 0, z_stim = 0;     // correlation z-scores vs exact
  double zz_fk = 0, zz_rpr = 0, zz_stim = 0;  // partition-function z-scores
  long n_samples = 0;
};

RepresentationReport compare_representations(const QuantumSpec& spec, int x, int y,
                                             long n_samples, std::uint64_t seed,
                                             int n_chains = 8, bool parallel = true);

// Free-energy duality at finite size: log Z+ (wired spin sums, parameters
// (h, J)) minus log Z0 (parity sums with zero boundary labels, parameters
// swapped) equals 2 beta h.
struct KwIdentityReport {
  double log_z_plus = 0, log_z_zero = 0;
  double se_plus = 0, se_zero = 0;
  double target = 0;  // 2 beta h
  double z_score = 0;
};

KwIdentityReport kw_identity_check(int n_sites, double beta, double h, double coupling,
                                   long n_samples, std::uint64_t seed, int n_chains = 8,
                                   bool parallel = true);

}  // namespace semihol

#endif

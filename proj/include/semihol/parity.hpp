#ifndef SEMIHOL_PARITY_HPP
#define SEMIHOL_PARITY_HPP

#include <optional>

#include "semihol/configuration.hpp"
#include "semihol/stats.hpp"

namespace semihol {

// Source-driven {0,1} labelling of the black columns of a dual domain.  The
// label switches at bridge endpoints and at interior sources, vanishes on the
// horizontal boundary away from the sources, and exists only when every
// column sees an even number of switches.
struct ParityLabelling {
  bool exists = false;

  struct Piece {
    int col = 0;
    double lo = 0, hi = 0;
  };
  std::vector<Piece> intervals;  // closure of the 1-set
  double total_length = 0;

  struct PathStep {
    bool horizontal = false;
    int col = 0;     // vertical: black column; horizontal: white column crossed
    double t0 = 0;   // vertical: entry time / horizontal: level
    double t1 = 0;   // vertical: exit time
    Dir dir = Dir::up;
    bool half_edge = false;
  };
  std::vector<PathStep> path;  // source-to-source curve, empty when degenerate
  int loops = 0;

  long winding_quarters = 0;       // from a to z, counter-clockwise positive
  bool ends_with_half_edge = false;
  LatticePoint a{}, z{};

  // Label value just above a black point (1 or 0); 0 outside the domain.
  int value_above(const LatticePoint& u) const;
};

// a must be a white vertical-boundary point or a black horizontal-boundary
// point of the dual domain; z any black point.  A missing labelling is a
// value (exists = false), not an error.
ParityLabelling build_labelling(const SemiDiscreteDomain& dom, const Configuration& bridges,
                                const LatticePoint& a, const LatticePoint& z);

// Extension to white z through the half-edge completion; the two candidate
// black neighbours are mutually exclusive.
ParityLabelling build_labelling_white(const SemiDiscreteDomain& dom, const Configuration& bridges,
                                      const LatticePoint& a, const LatticePoint& w);

// exp(-2 h |I|) times 1/sqrt(2) when the curve ends with a half-edge.
double spin_weight(const ParityLabelling& lab, double h);

double parity_winding(const ParityLabelling& lab);  // radians

// --- spin observable ---------------------------------------------------------

struct SpinFieldSite {
  LatticePoint z;
  PointColor color;
  WeightedEstimate numerator;   // E[e^{-i W/2} X]
  WeightedEstimate value;       // numerator / denominator
};

struct SpinField {
  std::vector<SpinFieldSite> sites;
  WeightedEstimate denominator;
  LatticePoint a, b;
  long n_samples = 0;
};

struct SpinFieldParams {
  std::uint64_t seed = 1;
  int n_samples = 20000;  // per chain
  int n_chains = 8;
  bool parallel = true;
};

// Ratio of plain Poisson expectations at bridge rate 1/(2 delta); b must lie
// on the lower horizontal boundary of the black columns.
SpinField spin_field(const SemiDiscreteDomain& dom, const LatticePoint& a, const LatticePoint& b,
                     const std::vector<LatticePoint>& sites, const SpinFieldParams& params);

// --- space-time spin representation -------------------------------------------

// Sum over the 2^N per-column base signs of exp(J sum_x int sigma_x sigma_{x+1}),
// for a periodic cuts-only configuration on N columns of circumference beta.
// Columns with an odd cut count admit no spin function and give 0.
double spacetime_spin_weight(int n_sites, double beta, const std::vector<std::vector<double>>& cuts,
                             double coupling);

// --- Kramers-Wannier duality ---------------------------------------------------

struct SpinConfig {
  int n_sites = 0;
  double beta = 0;
  std::vector<int> base;                   // sign at t = 0 per column
  std::vector<std::vector<double>> cuts;   // sorted per column
};

struct KwDual {
  // Disagreement labelling on the n_sites-1 dual columns plus the bridge set
  // induced by the cuts.
  int n_cols = 0;
  double beta = 0;
  std::vector<std::vector<std::pair<double, double>>> one_intervals;  // per dual column
  std::vector<std::vector<double>> bridges;  // per original column x: cut times
  double total_length = 0;
  int loops = 0;
};

// Wired boundary: base signs +1 everywhere, no cuts on the outer columns,
// even cut counts.  Throws BoundaryViolation otherwise.
KwDual kw_dual_map(const SpinConfig& sigma);

SpinConfig kw_dual_inverse(const KwDual& psi);

}  // namespace semihol

#endif

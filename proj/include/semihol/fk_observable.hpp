#ifndef SEMIHOL_FK_OBSERVABLE_HPP
#define SEMIHOL_FK_OBSERVABLE_HPP

#include <optional>

#include "semihol/interface.hpp"
#include "semihol/sampler.hpp"
#include "semihol/sholo.hpp"

namespace semihol {

// --- per-sample evaluations ------------------------------------------------

// phi^alpha(xi; z) for alpha in {up, down}: the winding phase of the interface
// pass at z in that direction, 0 if there is none.
Complex phi_vertical_sample(const InterfaceTrace& tr, const LatticePoint& z, Dir alpha,
                            double sigma);

// Pass of the vertical run meeting the event level of z from above or below on
// the alpha-direction medial line, when the interface uses that run.
std::optional<Pass> vertical_pass_beside(const InterfaceTrace& tr, const LatticePoint& z,
                                         Dir alpha, bool above);

struct HorizontalSample {
  Complex value{0, 0};   // (sqrt q)^{dL} phi^alpha(xi_z; z), or the boundary variant
  int delta_loops = 0;   // L(xi_z) - L(xi), 0 on the boundary
};

// Auxiliary horizontal observables.  Interior z: toggles z, retraces, and
// weights by (sqrt q)^{dL}.  Vertical boundary: identically 0.  Horizontal
// boundary: evaluated on xi itself.
HorizontalSample phi_horizontal_sample(const SemiDiscreteDomain& dom, const Configuration& cfg,
                                       const InterfaceTrace& tr_cfg, int loops_cfg,
                                       const LatticePoint& z, Dir alpha, const WeightSpec& w);

// Both horizontal directions from a single toggle and retrace.
std::pair<HorizontalSample, HorizontalSample> phi_horizontal_pair(
    const SemiDiscreteDomain& dom, Configuration& scratch, const InterfaceTrace& tr_cfg,
    int loops_cfg, const LatticePoint& z, const WeightSpec& w);

// --- pathwise identities ----------------------------------------------------

struct TurnIdentityResult {
  Complex lhs, rhs;          // both normalized by (sqrt 2)^{L(xi)}
  double residual = 0;       // |lhs - rhs|
};

// The exact single-configuration turn identity behind the expectation
// relation between Phi^{up/down} and Phi^{left/right} (critical weights).
TurnIdentityResult pathwise_turn_identity(const SemiDiscreteDomain& dom, const Configuration& cfg,
                                          const LatticePoint& z, Dir alpha);

// Winding relations between the pass of xi at z and the hop passes of
// xi_z = xi toggled at z, in quarter turns:
//   W^up(xi) = W^left(xi_z) + 1   whenever both passes exist,
//   W^up(xi) = W^right(xi_z) - 1  whenever both passes exist,
// and the mirrored pair for down passes.  Also |L(xi_z) - L(xi)| = 1.
struct WindingRelationResult {
  bool checked = false;  // some pass pair existed
  bool ok = true;
  int delta_loops = 0;
};
WindingRelationResult check_winding_relations(const SemiDiscreteDomain& dom,
                                              const Configuration& cfg, const LatticePoint& z);

// sigma-generic vertical-derivative kernel:
//   phi^up(xi_z; z+) - phi^up(xi_z; z-) =
//       e^{i sigma pi/2} phi^left(xi_z; z) - e^{-i sigma pi/2} phi^right(xi_z; z)
// and the mirrored down version, exact per configuration for every sigma.
struct KernelIdentityResult {
  Complex lhs, rhs;
  double residual = 0;
};
KernelIdentityResult pathwise_kernel_identity(const SemiDiscreteDomain& dom,
                                              const Configuration& cfg, const LatticePoint& z,
                                              Dir alpha, double sigma);

// --- Monte Carlo field estimation -------------------------------------------

struct GridSite {
  LatticePoint z;
  PointColor color = PointColor::black;
  PointPosition position = PointPosition::interior;
  int row = 0;  // global t-grid row
};

struct FieldOptions {
  double grid_spacing = 0;      // default delta/8
  double boundary_margin = 0;   // default delta/8
  double eta = 0;               // CRN difference step, default delta/16
  bool horizontal = true;       // estimate the left/right observables
  bool derivatives = true;      // estimate CRN difference quotients
  bool parallel = true;
};

// Per-site chain means for one estimated quantity.
struct QuantityStats {
  std::vector<Complex> chain_means;
  WeightedEstimate est;
};

struct SiteStats {
  QuantityStats phi_up, phi_dn, phi_lt, phi_rt;
  QuantityStats dphi_up, dphi_dn;  // (phi(z+i eta) - phi(z-i eta)) / (2 eta)
  WeightedEstimate F;              // phi_up + phi_dn
};

struct ComplexField {
  std::vector<GridSite> grid;
  std::vector<SiteStats> sites;
  long n_samples = 0;
  int n_chains = 0;
  double q = 2, sigma = 0.5, delta = 1, eta = 0;
  double grid_t0 = 0, grid_spacing = 0;
  std::vector<double> kink_levels;  // mark levels, where t-smoothness fails

  int site_index(int col, int row) const;  // -1 when absent
  const SiteStats* at(int col, int row) const;

  // Mean values as a grid function (for H construction and exports).
  SampledFunction mean_function() const;
};

std::vector<GridSite> measurement_grid(const SemiDiscreteDomain& dom, double spacing,
                                       double boundary_margin);

// Loop-weighted field of the vertical observables and their companions,
// estimated over params.n_chains independent chains.
ComplexField estimate_field(const SemiDiscreteDomain& dom, const WeightSpec& w,
                            const ChainParams& params, const FieldOptions& opts = {});

// Critical case q = 2.
ComplexField fk_field(const SemiDiscreteDomain& dom, const ChainParams& params,
                      const FieldOptions& opts = {});

// General loop weight (sqrt q)^L with phase exp(i sigma W).  Bit-identical to
// fk_field at q = 2.
ComplexField parafermionic_field(const SemiDiscreteDomain& dom, double q,
                                 const ChainParams& params, const FieldOptions& opts = {});

// --- estimator-level identity checks ----------------------------------------

struct IdentityCheck {
  int col = 0;
  double t = 0;
  const char* name = "";
  Complex residual;
  Complex se;
  double z_score = 0;
};

struct PhiDotsReport {
  std::vector<IdentityCheck> turn_eq;       // projection relations
  std::vector<IdentityCheck> phi_dots;      // derivative relations (closed form)
  std::vector<IdentityCheck> fd_cross;      // finite difference vs closed form
  double max_z_turn = 0, max_z_dots = 0, max_z_fd = 0;
  double frac_within_2se = 1.0;  // over turn_eq and phi_dots
};

// eta below the standard-error resolution throws StepTooSmall.
PhiDotsReport check_phi_dots(const ComplexField& field);

}  // namespace semihol

#endif

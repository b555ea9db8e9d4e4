#ifndef SEMIHOL_SHOLO_HPP
#define SEMIHOL_SHOLO_HPP

#include <map>
#include <optional>
#include <vector>

#include "semihol/geometry.hpp"

namespace semihol {

// Projection of z onto the line zeta*R, with |zeta| = 1.
Complex proj(Complex z, Complex zeta);

inline Complex line_up() { return eighth_phase(-1); }    // e^{-i pi/4}
inline Complex line_down() { return eighth_phase(1); }   // e^{+i pi/4}
inline Complex proj_up(Complex z) { return proj(z, line_up()); }
inline Complex proj_down(Complex z) { return proj(z, line_down()); }

// Complex function sampled on a uniform t-grid shared by all columns.
// Row r of column c sits at t = t0 + (row0 + r) * eta.  Exact fields may also
// carry their vertical derivative (dvals), which checkers prefer over finite
// differences.
struct SampledFunction {
  double t0 = 0, eta = 0;
  struct Col {
    int row0 = 0;
    std::vector<Complex> vals;
    std::vector<Complex> dvals;  // optional, same length as vals when present
  };
  std::map<int, Col> cols;

  double t_at(int col, int i) const;
  const Complex* value(int col, int global_row) const;
  const Complex* dvalue(int col, int global_row) const;
  bool has_derivatives() const;
};

struct RealField {
  double t0 = 0, eta = 0;
  struct Col {
    int row0 = 0;
    std::vector<double> vals;
  };
  std::map<int, Col> cols;
  const double* value(int col, int global_row) const;
};

struct HField {
  RealField h;
  LatticePoint gauge;
  double max_contour_residual = 0;
};

struct ResidualEntry {
  int col = 0;
  double t = 0;
  double pair_res = 0;   // projection matching across the column pair
  double deriv_res = 0;  // coupled vertical-derivative relations
  double res() const { return pair_res > deriv_res ? pair_res : deriv_res; }
};

struct ResidualReport {
  std::vector<ResidualEntry> entries;
  double max_res = 0;
  double max_pair_res = 0;
  double max_deriv_res = 0;
  bool pass(double tol) const { return max_res <= tol; }
};

// Residuals of the projection-matching and vertical-derivative conditions at
// every site with both horizontal neighbours (restricted to the domain's
// interior when one is given).
ResidualReport check_sholo(const SampledFunction& F, double delta,
                           const SemiDiscreteDomain* dom = nullptr);

// Residual of (1/delta)(F(z+delta/2) - F(z-delta/2)) + i dF(z).
ResidualReport check_prehol(const SampledFunction& F, double delta,
                            const SemiDiscreteDomain* dom = nullptr);

// Manufactured exact solutions: evolves the coupled first-order system for the
// per-medial line coefficients in t, starting from column values at t_lo that
// must satisfy the cross-column projection equalities (tolerance tol_init).
// The two outermost medial coefficients are held fixed (free boundary data).
SampledFunction exact_sholo(int col0, int ncols, double t_lo, double t_hi, double eta,
                            double delta, const std::vector<Complex>& initial, double tol,
                            double tol_init = 1e-9);

// Discrete primitive H of Im(int F^2): vertical increments by quadrature of
// (2/delta) F^up F^down, horizontal steps by the square-modulus rule.  The
// returned field is pinned to 0 at the gauge site (default: first white site).
HField build_H(const SampledFunction& F, double delta,
               std::optional<LatticePoint> gauge = {});

// f''(z) in t plus the same-colour horizontal second difference.
double laplacian(const RealField& f, int col, int global_row, double delta);

struct HarmonicityEntry {
  int col = 0;
  double t = 0;
  double lap = 0;       // discrete Laplacian of H
  double dF_sq = 0;     // |dF/dt|^2 at the site
  double residual = 0;  // lap -/+ dF_sq (black/white)
};

struct HarmonicityReport {
  std::vector<HarmonicityEntry> entries;
  double max_residual = 0;
  bool sign_ok = true;  // >= -tol on black, <= tol on white
};

HarmonicityReport check_H_harmonicity(const HField& H, const SampledFunction& F, double delta,
                                      double sign_tol = 0.0);

}  // namespace semihol

#endif

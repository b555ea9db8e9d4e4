#include "semihol/sholo.hpp"

#include <algorithm>
#include <cmath>

namespace semihol {

Complex proj(Complex z, Complex zeta) {
  if (std::abs(std::abs(zeta) - 1.0) > 1e-12)
    throw Error(ErrorCode::NonUnitZeta, "projection direction must be a unit complex number");
  return 0.5 * (z + std::conj(z) * zeta * zeta);
}

double SampledFunction::t_at(int, int i) const { return t0 + i * eta; }

const Complex* SampledFunction::value(int col, int row) const {
  auto it = cols.find(col);
  if (it == cols.end()) return nullptr;
  int i = row - it->second.row0;
  if (i < 0 || i >= int(it->second.vals.size())) return nullptr;
  return &it->second.vals[i];
}

const Complex* SampledFunction::dvalue(int col, int row) const {
  auto it = cols.find(col);
  if (it == cols.end()) return nullptr;
  int i = row - it->second.row0;
  if (i < 0 || i >= int(it->second.dvals.size())) return nullptr;
  return &it->second.dvals[i];
}

bool SampledFunction::has_derivatives() const {
  for (const auto& [k, c] : cols)
    if (c.dvals.size() != c.vals.size()) return false;
  return !cols.empty();
}

const double* RealField::value(int col, int row) const {
  auto it = cols.find(col);
  if (it == cols.end()) return nullptr;
  int i = row - it->second.row0;
  if (i < 0 || i >= int(it->second.vals.size())) return nullptr;
  return &it->second.vals[i];
}

namespace {

// First derivative on a uniform grid, 4th order inside, one-sided near ends.
template <typename T>
T grid_deriv(const std::vector<T>& v, int i, double eta) {
  int n = int(v.size());
  if (n < 4) throw Error(ErrorCode::GridMismatch, "need at least 4 rows for derivatives");
  if (i >= 2 && i <= n - 3)
    return (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * eta);
  if (i == 0)
    return (-11.0 * v[0] + 18.0 * v[1] - 9.0 * v[2] + 2.0 * v[3]) / (6.0 * eta);
  if (i == 1)
    return (-2.0 * v[0] - 3.0 * v[1] + 6.0 * v[2] - v[3]) / (6.0 * eta);
  if (i == n - 2)
    return (v[n - 4] - 6.0 * v[n - 3] + 3.0 * v[n - 2] + 2.0 * v[n - 1]) / (6.0 * eta);
  return (-2.0 * v[n - 4] + 9.0 * v[n - 3] - 18.0 * v[n - 2] + 11.0 * v[n - 1]) / (6.0 * eta);
}

double grid_deriv2(const std::vector<double>& v, int i, double eta) {
  int n = int(v.size());
  if (i >= 2 && i <= n - 3)
    return (-v[i - 2] + 16.0 * v[i - 1] - 30.0 * v[i] + 16.0 * v[i + 1] - v[i + 2]) /
           (12.0 * eta * eta);
  if (i >= 1 && i <= n - 2) return (v[i - 1] - 2.0 * v[i] + v[i + 1]) / (eta * eta);
  throw Error(ErrorCode::MissingNeighbor, "second derivative needs interior rows");
}

Complex vderiv(const SampledFunction& F, int col, int row) {
  if (const Complex* d = F.dvalue(col, row)) return *d;
  const auto& c = F.cols.at(col);
  return grid_deriv(c.vals, row - c.row0, F.eta);
}

bool site_interior(const SemiDiscreteDomain* dom, int col, double t) {
  if (!dom) return true;
  return dom->classify(col, t).position == PointPosition::interior;
}

}  // namespace

ResidualReport check_sholo(const SampledFunction& F, double delta,
                           const SemiDiscreteDomain* dom) {
  ResidualReport rep;
  for (const auto& [col, c] : F.cols) {
    bool black = Lattice::is_black(col);
    for (int i = 0; i < int(c.vals.size()); ++i) {
      int row = c.row0 + i;
      double t = F.t0 + row * F.eta;
      const Complex* west = F.value(col - 1, row);
      const Complex* east = F.value(col + 1, row);
      if (!west || !east) continue;
      if (!site_interior(dom, col, t)) continue;
      Complex fz = c.vals[i];
      // Projection matching across the two adjacent pairs.
      Complex up_other = black ? *east : *west;     // shares the up-projection
      Complex down_other = black ? *west : *east;   // shares the down-projection
      double pr = std::abs(proj_up(fz) - proj_up(up_other));
      pr = std::max(pr, std::abs(proj_down(fz) - proj_down(down_other)));
      // Coupled vertical derivatives.
      Complex dF = vderiv(F, col, row);
      Complex i_over_d = Complex(0, 1) / delta;
      Complex dup = proj_up(dF);
      Complex ddn = proj_down(dF);
      double dr = std::abs(dup - i_over_d * (proj_down(*east) - proj_down(*west)));
      dr = std::max(dr, std::abs(ddn - i_over_d * (proj_up(*east) - proj_up(*west))));
      rep.entries.push_back({col, t, pr, dr});
      rep.max_pair_res = std::max(rep.max_pair_res, pr);
      rep.max_deriv_res = std::max(rep.max_deriv_res, dr);
    }
  }
  rep.max_res = std::max(rep.max_pair_res, rep.max_deriv_res);
  return rep;
}

ResidualReport check_prehol(const SampledFunction& F, double delta,
                            const SemiDiscreteDomain* dom) {
  ResidualReport rep;
  for (const auto& [col, c] : F.cols) {
    for (int i = 0; i < int(c.vals.size()); ++i) {
      int row = c.row0 + i;
      double t = F.t0 + row * F.eta;
      const Complex* west = F.value(col - 1, row);
      const Complex* east = F.value(col + 1, row);
      if (!west || !east) continue;
      if (!site_interior(dom, col, t)) continue;
      Complex dF = vderiv(F, col, row);
      double r = std::abs((*east - *west) / delta + Complex(0, 1) * dF);
      rep.entries.push_back({col, t, 0.0, r});
      rep.max_deriv_res = std::max(rep.max_deriv_res, r);
    }
  }
  rep.max_res = rep.max_deriv_res;
  return rep;
}

SampledFunction exact_sholo(int col0, int ncols, double t_lo, double t_hi, double eta,
                            double delta, const std::vector<Complex>& initial, double tol,
                            double tol_init) {
  if (int(initial.size()) != ncols)
    throw Error(ErrorCode::InconsistentInitialData, "one initial value per column required");
  if (ncols < 2) throw Error(ErrorCode::InconsistentInitialData, "need at least two columns");

  // Medial coefficients: even medial m carries the shared up-projection of
  // columns m and m+1 (a real multiple of e^{-i pi/4}); odd m the shared
  // down-projection (multiple of e^{+i pi/4}).
  int m0 = col0 - 1, m1 = col0 + ncols - 1;
  int M = m1 - m0 + 1;
  auto coeff_of = [&](int col, bool up) {
    Complex p = up ? proj_up(initial[col - col0]) : proj_down(initial[col - col0]);
    Complex unit = up ? line_up() : line_down();
    return (p * std::conj(unit)).real();
  };
  std::vector<double> x(M);
  for (int m = m0; m <= m1; ++m) {
    bool up_line = (((m % 2) + 2) % 2) == 0;
    // Columns flanking medial m; clamp to the strip.
    int cl = std::max(m, col0), cr = std::min(m + 1, col0 + ncols - 1);
    double cw = coeff_of(cl, up_line);
    double ce = coeff_of(cr, up_line);
    if (cl != cr && std::abs(cw - ce) > tol_init)
      throw Error(ErrorCode::InconsistentInitialData,
                  "initial data violates the cross-column projection equalities");
    x[m - m0] = 0.5 * (cw + ce);
  }

  auto rhs = [&](const std::vector<double>& y, std::vector<double>& dy) {
    std::fill(dy.begin(), dy.end(), 0.0);
    for (int m = m0 + 1; m <= m1 - 1; ++m) {
      int i = m - m0;
      bool up_line = (((m % 2) + 2) % 2) == 0;
      double diff = y[i + 1] - y[i - 1];
      dy[i] = (up_line ? -diff : diff) / delta;
    }
  };

  int rows = int(std::llround((t_hi - t_lo) / eta)) + 1;
  double h_target = delta * std::pow(std::max(tol, 1e-14), 0.25) * 0.1;
  int sub = std::max(2, int(std::ceil(eta / h_target)));
  double h = eta / sub;

  SampledFunction F;
  F.t0 = t_lo;
  F.eta = eta;
  for (int c = col0; c < col0 + ncols; ++c) {
    F.cols[c].row0 = 0;
    F.cols[c].vals.resize(rows);
    F.cols[c].dvals.resize(rows);
  }

  std::vector<double> k1(M), k2(M), k3(M), k4(M), tmp(M), dx(M);
  auto record = [&](int row) {
    rhs(x, dx);
    for (int c = col0; c < col0 + ncols; ++c) {
      bool black = Lattice::is_black(c);
      int mu = black ? c : c - 1;      // up medial adjacent to the column
      int md = black ? c - 1 : c;      // down medial
      Complex val = x[mu - m0] * line_up() + x[md - m0] * line_down();
      Complex dval = dx[mu - m0] * line_up() + dx[md - m0] * line_down();
      F.cols[c].vals[row] = val;
      F.cols[c].dvals[row] = dval;
    }
  };

  record(0);
  for (int r = 1; r < rows; ++r) {
    for (int s = 0; s < sub; ++s) {
      rhs(x, k1);
      for (int i = 0; i < M; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
      rhs(tmp, k2);
      for (int i = 0; i < M; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
      rhs(tmp, k3);
      for (int i = 0; i < M; ++i) tmp[i] = x[i] + h * k3[i];
      rhs(tmp, k4);
      for (int i = 0; i < M; ++i) x[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    record(r);
  }
  return F;
}

namespace {

// Cumulative integral on a uniform grid.  Every interval uses the same
// centred four-point rule, so the O(eta^4) error varies smoothly with the row
// index; a row-alternating rule would put a sawtooth into H that the second
// difference of the Laplacian check amplifies by 1/eta^2.
std::vector<double> cumulative_integral(const std::vector<double>& f, double eta) {
  int n = int(f.size());
  std::vector<double> F(n, 0.0);
  if (n < 4) {
    for (int i = 1; i < n; ++i) F[i] = F[i - 1] + eta / 2.0 * (f[i - 1] + f[i]);
    return F;
  }
  for (int i = 1; i < n; ++i) {
    double inc;
    if (i == 1) {
      inc = eta / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    } else if (i == n - 1) {
      inc = eta / 24.0 * (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4]);
    } else {
      inc = eta / 24.0 * (-f[i - 2] + 13.0 * f[i - 1] + 13.0 * f[i] - f[i + 1]);
    }
    F[i] = F[i - 1] + inc;
  }
  return F;
}

double h_step(const SampledFunction& F, int col, int row) {
  const Complex* v = F.value(col, row);
  if (!v) throw Error(ErrorCode::GridMismatch, "missing value for horizontal H step");
  if (Lattice::is_black(col)) return -std::norm(proj_up(*v));
  return std::norm(proj_down(*v));
}

}  // namespace

HField build_H(const SampledFunction& F, double delta, std::optional<LatticePoint> gauge) {
  HField H;
  H.h.t0 = F.t0;
  H.h.eta = F.eta;

  // Vertical accumulation per column.
  std::map<int, std::vector<double>> cum;
  for (const auto& [col, c] : F.cols) {
    std::vector<double> hdot(c.vals.size());
    for (size_t i = 0; i < c.vals.size(); ++i)
      hdot[i] = 2.0 / delta * (proj_up(c.vals[i]) * proj_down(c.vals[i])).real();
    cum[col] = cumulative_integral(hdot, F.eta);
    H.h.cols[col].row0 = c.row0;
    H.h.cols[col].vals = cum[col];
  }

  // Link adjacent columns at their lowest shared row.
  std::map<int, double> offset;
  auto first_col = F.cols.begin()->first;
  offset[first_col] = 0.0;
  for (auto it = std::next(F.cols.begin()); it != F.cols.end(); ++it) {
    int col = it->first;
    int prev = std::prev(it)->first;
    if (col != prev + 1)
      throw Error(ErrorCode::GridMismatch, "columns must be contiguous to build H");
    int r0 = std::max(F.cols.at(prev).row0, it->second.row0);
    const Complex* shared = F.value(prev, r0);
    if (!shared || !F.value(col, r0))
      throw Error(ErrorCode::GridMismatch, "no shared row between adjacent columns");
    double step = h_step(F, prev, r0);
    double hp = offset[prev] + cum[prev][r0 - F.cols.at(prev).row0];
    double hc = cum[col][r0 - it->second.row0];
    offset[col] = hp + step - hc;
  }
  for (auto& [col, c] : H.h.cols)
    for (auto& v : c.vals) v += offset[col];

  // Gauge.
  LatticePoint g;
  if (gauge) {
    g = *gauge;
  } else {
    g.col = Lattice::is_black(first_col) ? first_col + 1 : first_col;
    g.t = F.t0 + F.cols.at(g.col).row0 * F.eta;
  }
  int grow = int(std::llround((g.t - F.t0) / F.eta));
  const double* gv = H.h.value(g.col, grow);
  if (!gv) throw Error(ErrorCode::GridMismatch, "gauge site is not on the grid");
  double g0 = *gv;
  for (auto& [col, c] : H.h.cols)
    for (auto& v : c.vals) v -= g0;
  H.gauge = g;

  // Contour residuals over all elementary rectangles.
  double maxres = 0;
  for (auto it = F.cols.begin(); std::next(it) != F.cols.end(); ++it) {
    int c0 = it->first, c1 = c0 + 1;
    int lo = std::max(F.cols.at(c0).row0, F.cols.at(c1).row0);
    int hi = std::min(F.cols.at(c0).row0 + int(F.cols.at(c0).vals.size()),
                      F.cols.at(c1).row0 + int(F.cols.at(c1).vals.size())) - 1;
    for (int r = lo; r < hi; ++r) {
      double dv0 = *H.h.value(c0, r + 1) - *H.h.value(c0, r);
      double dv1 = *H.h.value(c1, r + 1) - *H.h.value(c1, r);
      double res = dv0 + h_step(F, c0, r + 1) - dv1 - h_step(F, c0, r);
      maxres = std::max(maxres, std::abs(res));
    }
  }
  H.max_contour_residual = maxres;
  return H;
}

double laplacian(const RealField& f, int col, int row, double delta) {
  auto it = f.cols.find(col);
  if (it == f.cols.end()) throw Error(ErrorCode::MissingNeighbor, "site not in field");
  const double* w = f.value(col - 2, row);
  const double* e = f.value(col + 2, row);
  const double* c = f.value(col, row);
  if (!w || !e || !c)
    throw Error(ErrorCode::MissingNeighbor, "horizontal neighbours missing for Laplacian");
  double ddot = grid_deriv2(it->second.vals, row - it->second.row0, f.eta);
  return ddot + (*e + *w - 2.0 * (*c)) / (delta * delta);
}

HarmonicityReport check_H_harmonicity(const HField& H, const SampledFunction& F, double delta,
                                      double sign_tol) {
  HarmonicityReport rep;
  for (const auto& [col, c] : H.h.cols) {
    bool black = Lattice::is_black(col);
    int n = int(c.vals.size());
    for (int i = 2; i <= n - 3; ++i) {
      int row = c.row0 + i;
      if (!H.h.value(col - 2, row) || !H.h.value(col + 2, row)) continue;
      if (!F.value(col, row)) continue;
      double lap = laplacian(H.h, col, row, delta);
      Complex dF = vderiv(F, col, row);
      double d2 = std::norm(dF);
      double res = black ? lap - d2 : lap + d2;
      rep.entries.push_back({col, F.t0 + row * F.eta, lap, d2, res});
      rep.max_residual = std::max(rep.max_residual, std::abs(res));
      if (black && lap < -sign_tol) rep.sign_ok = false;
      if (!black && lap > sign_tol) rep.sign_ok = false;
    }
  }
  return rep;
}

}  // namespace semihol

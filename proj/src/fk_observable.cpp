#include "semihol/fk_observable.hpp"

#include <algorithm>
#include <cmath>

namespace semihol {

Complex phi_vertical_sample(const InterfaceTrace& tr, const LatticePoint& z, Dir alpha,
                            double sigma) {
  auto rec = passes_at(tr, z);
  if (const Pass* p = rec.first(alpha)) return pass_phase(*p, sigma);
  return {0, 0};
}

std::optional<Pass> vertical_pass_beside(const InterfaceTrace& tr, const LatticePoint& z,
                                         Dir alpha, bool above) {
  for (int m : {z.col - 1, z.col}) {
    if (Lattice::medial_dir(m) != alpha) continue;
    for (size_t i = 0; i < tr.interface.size(); ++i) {
      const TraceSegment& s = tr.interface[i];
      if (s.kind != TraceSegment::Kind::vertical || s.medial != m) continue;
      if ((above && s.t_lo == z.t) || (!above && s.t_hi == z.t)) {
        Pass p;
        p.dir = s.dir;
        p.segment_index = int(i);
        p.winding_quarters = tr.suffix_turn[i];
        return p;
      }
    }
  }
  return std::nullopt;
}

HorizontalSample phi_horizontal_sample(const SemiDiscreteDomain& dom, const Configuration& cfg,
                                       const InterfaceTrace& tr_cfg, int loops_cfg,
                                       const LatticePoint& z, Dir alpha, const WeightSpec& w) {
  HorizontalSample out;
  auto cls = dom.classify(z);
  if (cls.position == PointPosition::vertical_boundary || cls.position == PointPosition::exterior)
    return out;
  if (cls.position == PointPosition::horizontal_boundary) {
    auto rec = passes_at(tr_cfg, z);
    if (const Pass* p = rec.first(alpha)) out.value = pass_phase(*p, w.sigma);
    return out;
  }
  Configuration toggled = toggle(dom, cfg, z);
  auto tr2 = trace_arrangement(dom, toggled);
  out.delta_loops = tr2.loop_count() - loops_cfg;
  auto rec = passes_at(tr2, z);
  if (const Pass* p = rec.first(alpha))
    out.value = std::pow(std::sqrt(w.q), out.delta_loops) * pass_phase(*p, w.sigma);
  return out;
}

std::pair<HorizontalSample, HorizontalSample> phi_horizontal_pair(
    const SemiDiscreteDomain& dom, Configuration& scratch, const InterfaceTrace& tr_cfg,
    int loops_cfg, const LatticePoint& z, const WeightSpec& w) {
  HorizontalSample lt, rt;
  auto cls = dom.classify(z);
  if (cls.position == PointPosition::vertical_boundary || cls.position == PointPosition::exterior)
    return {lt, rt};
  if (cls.position == PointPosition::horizontal_boundary) {
    auto rec = passes_at(tr_cfg, z);
    if (const Pass* p = rec.first(Dir::left)) lt.value = pass_phase(*p, w.sigma);
    if (const Pass* p = rec.first(Dir::right)) rt.value = pass_phase(*p, w.sigma);
    return {lt, rt};
  }
  // In-place toggle on the scratch copy, undone before returning.
  auto& m = Lattice::is_black(z.col) ? scratch.cuts : scratch.bridges;
  auto& v = m[z.col];
  auto it = std::lower_bound(v.begin(), v.end(), z.t);
  bool inserted = !(it != v.end() && *it == z.t);
  if (inserted)
    v.insert(it, z.t);
  else
    v.erase(it);
  auto tr2 = trace_arrangement(dom, scratch);
  int dl = tr2.loop_count() - loops_cfg;
  double wfac = std::pow(std::sqrt(w.q), dl);
  auto rec = passes_at(tr2, z);
  if (const Pass* p = rec.first(Dir::left)) lt.value = wfac * pass_phase(*p, w.sigma);
  if (const Pass* p = rec.first(Dir::right)) rt.value = wfac * pass_phase(*p, w.sigma);
  lt.delta_loops = rt.delta_loops = dl;
  auto& v2 = m[z.col];
  auto it2 = std::lower_bound(v2.begin(), v2.end(), z.t);
  if (inserted)
    v2.erase(it2);
  else
    v2.insert(it2, z.t);
  if (v2.empty()) m.erase(z.col);
  return {lt, rt};
}

TurnIdentityResult pathwise_turn_identity(const SemiDiscreteDomain& dom, const Configuration& cfg,
                                          const LatticePoint& z, Dir alpha) {
  if (alpha != Dir::up && alpha != Dir::down)
    throw Error(ErrorCode::InvalidConfig, "turn identity is for vertical directions");
  auto tr = trace_arrangement(dom, cfg);
  Configuration toggled = toggle(dom, cfg, z);
  auto tr2 = trace_arrangement(dom, toggled);
  int dl = tr2.loop_count() - tr.loop_count();
  double sq = std::sqrt(2.0);

  Complex lhs = phi_vertical_sample(tr, z, alpha, 0.5);
  Complex lt{0, 0}, rt{0, 0};
  auto rec = passes_at(tr2, z);
  if (const Pass* p = rec.first(Dir::left)) lt = pass_phase(*p, 0.5);
  if (const Pass* p = rec.first(Dir::right)) rt = pass_phase(*p, 0.5);
  Complex ei = eighth_phase(1), emi = eighth_phase(-1);
  Complex inner = (alpha == Dir::up) ? (lt * ei + rt * emi) : (rt * ei + lt * emi);
  TurnIdentityResult r;
  r.lhs = lhs;
  r.rhs = std::pow(sq, dl - 1) * inner;
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

WindingRelationResult check_winding_relations(const SemiDiscreteDomain& dom,
                                              const Configuration& cfg, const LatticePoint& z) {
  WindingRelationResult res;
  auto tr = trace_arrangement(dom, cfg);
  Configuration toggled = toggle(dom, cfg, z);
  auto tr2 = trace_arrangement(dom, toggled);
  res.delta_loops = tr2.loop_count() - tr.loop_count();
  if (std::abs(res.delta_loops) != 1) res.ok = false;

  auto rec1 = passes_at(tr, z);
  auto rec2 = passes_at(tr2, z);
  const Pass* up = rec1.first(Dir::up);
  const Pass* dn = rec1.first(Dir::down);
  const Pass* lt = rec2.first(Dir::left);
  const Pass* rt = rec2.first(Dir::right);
  if (up && lt) {
    res.checked = true;
    if (up->winding_quarters != lt->winding_quarters + 1) res.ok = false;
  }
  if (up && rt) {
    res.checked = true;
    if (up->winding_quarters != rt->winding_quarters - 1) res.ok = false;
  }
  if (dn && lt) {
    res.checked = true;
    if (dn->winding_quarters != lt->winding_quarters - 1) res.ok = false;
  }
  if (dn && rt) {
    res.checked = true;
    if (dn->winding_quarters != rt->winding_quarters + 1) res.ok = false;
  }
  return res;
}

KernelIdentityResult pathwise_kernel_identity(const SemiDiscreteDomain& dom,
                                              const Configuration& cfg, const LatticePoint& z,
                                              Dir alpha, double sigma) {
  if (alpha != Dir::up && alpha != Dir::down)
    throw Error(ErrorCode::InvalidConfig, "kernel identity is for vertical directions");
  Configuration toggled = toggle(dom, cfg, z);
  auto tr2 = trace_arrangement(dom, toggled);

  Complex plus{0, 0}, minus{0, 0};
  if (auto p = vertical_pass_beside(tr2, z, alpha, true)) plus = pass_phase(*p, sigma);
  if (auto p = vertical_pass_beside(tr2, z, alpha, false)) minus = pass_phase(*p, sigma);

  Complex lt{0, 0}, rt{0, 0};
  auto rec = passes_at(tr2, z);
  if (const Pass* p = rec.first(Dir::left)) lt = pass_phase(*p, sigma);
  if (const Pass* p = rec.first(Dir::right)) rt = pass_phase(*p, sigma);

  Complex phase = sigma_phase(sigma, 1);  // e^{i sigma pi/2}
  KernelIdentityResult r;
  r.lhs = plus - minus;
  r.rhs = (alpha == Dir::up) ? (phase * lt - std::conj(phase) * rt)
                             : (std::conj(phase) * lt - phase * rt);
  // Toggling a cut mirrors the hop passages of toggling a bridge.
  if (Lattice::is_black(z.col)) r.rhs = -r.rhs;
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

// --- measurement grid --------------------------------------------------------

std::vector<GridSite> measurement_grid(const SemiDiscreteDomain& dom, double spacing,
                                       double boundary_margin) {
  std::vector<GridSite> grid;
  for (const auto& [k, span] : dom.columns) {
    for (const auto& iv : span.intervals) {
      int r0 = int(std::ceil((iv.lo + boundary_margin) / spacing - 1e-12));
      int r1 = int(std::floor((iv.hi - boundary_margin) / spacing + 1e-12));
      for (int r = r0; r <= r1; ++r) {
        double t = r * spacing;
        auto cls = dom.classify(k, t);
        if (cls.position == PointPosition::exterior ||
            cls.position == PointPosition::horizontal_boundary)
          continue;
        GridSite s;
        s.z = {k, t};
        s.color = cls.color;
        s.position = cls.position;
        s.row = r;
        grid.push_back(s);
      }
    }
  }
  return grid;
}

int ComplexField::site_index(int col, int row) const {
  for (size_t i = 0; i < grid.size(); ++i)
    if (grid[i].z.col == col && grid[i].row == row) return int(i);
  return -1;
}

const SiteStats* ComplexField::at(int col, int row) const {
  int i = site_index(col, row);
  return i < 0 ? nullptr : &sites[i];
}

SampledFunction ComplexField::mean_function() const {
  SampledFunction F;
  F.t0 = 0;
  F.eta = grid_spacing;
  std::map<int, std::map<int, Complex>> per_col;
  for (size_t i = 0; i < grid.size(); ++i)
    per_col[grid[i].z.col][grid[i].row] = sites[i].F.mean;
  for (const auto& [col, rows] : per_col) {
    auto& c = F.cols[col];
    c.row0 = rows.begin()->first;
    int prev = c.row0 - 1;
    for (const auto& [r, v] : rows) {
      if (r != prev + 1) throw Error(ErrorCode::GridMismatch, "field rows are not contiguous");
      prev = r;
      c.vals.push_back(v);
    }
  }
  return F;
}

// --- field estimation ---------------------------------------------------------

namespace {

struct Accum {
  std::vector<Complex> sum;
  long n = 0;
};

enum Quantity { kUp = 0, kDn, kLt, kRt, kDUp, kDDn, kQuantities };

}  // namespace

ComplexField estimate_field(const SemiDiscreteDomain& dom, const WeightSpec& w,
                            const ChainParams& params, const FieldOptions& opts) {
  params.validate();
  FieldOptions o = opts;
  if (o.grid_spacing <= 0) o.grid_spacing = dom.lattice.delta / 8.0;
  if (o.boundary_margin <= 0) o.boundary_margin = dom.lattice.delta / 8.0;
  if (o.eta <= 0) o.eta = dom.lattice.delta / 16.0;

  ComplexField field;
  field.grid = measurement_grid(dom, o.grid_spacing, o.boundary_margin);
  field.q = w.q;
  field.sigma = w.sigma;
  field.delta = dom.lattice.delta;
  field.eta = o.eta;
  field.grid_spacing = o.grid_spacing;
  field.n_chains = params.n_chains;
  field.n_samples = long(params.n_chains) * params.n_samples;
  if (dom.marks) {
    field.kink_levels.push_back(dom.marks->a.t);
    field.kink_levels.push_back(dom.marks->b.t);
  }
  const size_t ns = field.grid.size();

  std::vector<Accum> acc(params.n_chains);
  for (auto& a : acc) a.sum.assign(ns * kQuantities, Complex{0, 0});

  run_chains(
      dom, w, params,
      [&](int chain, int, McmcChain& mc) {
        const Configuration& cfg = mc.config();
        auto tr = trace_arrangement(dom, cfg);
        int loops = tr.loop_count();
        auto& a = acc[chain];
        ++a.n;
        Configuration scratch = cfg;
        for (size_t i = 0; i < ns; ++i) {
          const GridSite& s = field.grid[i];
          Complex* dst = &a.sum[i * kQuantities];
          dst[kUp] += phi_vertical_sample(tr, s.z, Dir::up, w.sigma);
          dst[kDn] += phi_vertical_sample(tr, s.z, Dir::down, w.sigma);
          if (o.derivatives) {
            LatticePoint zp{s.z.col, s.z.t + o.eta};
            LatticePoint zm{s.z.col, s.z.t - o.eta};
            dst[kDUp] += (phi_vertical_sample(tr, zp, Dir::up, w.sigma) -
                          phi_vertical_sample(tr, zm, Dir::up, w.sigma)) /
                         (2.0 * o.eta);
            dst[kDDn] += (phi_vertical_sample(tr, zp, Dir::down, w.sigma) -
                          phi_vertical_sample(tr, zm, Dir::down, w.sigma)) /
                         (2.0 * o.eta);
          }
          if (o.horizontal) {
            auto [lt, rt] = phi_horizontal_pair(dom, scratch, tr, loops, s.z, w);
            dst[kLt] += lt.value;
            dst[kRt] += rt.value;
          }
        }
      },
      o.parallel);

  field.sites.resize(ns);
  auto fill = [&](QuantityStats& qs, size_t i, Quantity q) {
    qs.chain_means.resize(params.n_chains);
    for (int c = 0; c < params.n_chains; ++c)
      qs.chain_means[c] = acc[c].sum[i * kQuantities + q] / double(acc[c].n);
    qs.est = combine_means(qs.chain_means);
  };
  for (size_t i = 0; i < ns; ++i) {
    SiteStats& st = field.sites[i];
    fill(st.phi_up, i, kUp);
    fill(st.phi_dn, i, kDn);
    fill(st.phi_lt, i, kLt);
    fill(st.phi_rt, i, kRt);
    fill(st.dphi_up, i, kDUp);
    fill(st.dphi_dn, i, kDDn);
    std::vector<Complex> fs(params.n_chains);
    for (int c = 0; c < params.n_chains; ++c)
      fs[c] = st.phi_up.chain_means[c] + st.phi_dn.chain_means[c];
    st.F = combine_means(fs);
  }
  return field;
}

ComplexField fk_field(const SemiDiscreteDomain& dom, const ChainParams& params,
                      const FieldOptions& opts) {
  return estimate_field(dom, make_weight_spec(2.0, dom.lattice.delta), params, opts);
}

ComplexField parafermionic_field(const SemiDiscreteDomain& dom, double q,
                                 const ChainParams& params, const FieldOptions& opts) {
  return estimate_field(dom, make_weight_spec(q, dom.lattice.delta), params, opts);
}

// --- estimator identity checks -------------------------------------------------

namespace {

IdentityCheck make_check(const char* name, const GridSite& s,
                         const std::vector<Complex>& chain_vals) {
  auto est = combine_means(chain_vals);
  IdentityCheck c;
  c.col = s.z.col;
  c.t = s.z.t;
  c.name = name;
  c.residual = est.mean;
  c.se = est.std_error;
  // Floor the error at rounding scale so identities that cancel pathwise do
  // not divide accumulated machine noise by an even smaller spread.
  const double floor = 3e-10;
  double zr = std::abs(est.mean.real()) / std::max(est.std_error.real(), floor);
  double zi = std::abs(est.mean.imag()) / std::max(est.std_error.imag(), floor);
  c.z_score = std::max(zr, zi);
  return c;
}

}  // namespace

PhiDotsReport check_phi_dots(const ComplexField& f) {
  PhiDotsReport rep;
  const double delta = f.delta;
  const Complex ei = sigma_phase(f.sigma, 1);
  const Complex emi = std::conj(ei);
  const double rate = 1.0 / (delta * std::sqrt(f.q));
  const Complex i_over_d = Complex(0, 1) / delta;
  const double sq = std::sqrt(f.q);
  const int K = f.n_chains;

  if (f.eta < 1e-6 * delta)
    throw Error(ErrorCode::StepTooSmall, "difference step below usable resolution");

  int within2 = 0, gated = 0;
  auto tally = [&](const IdentityCheck& c) {
    ++gated;
    if (c.z_score <= 2.0) ++within2;
  };

  for (size_t i = 0; i < f.grid.size(); ++i) {
    const GridSite& s = f.grid[i];
    if (s.position != PointPosition::interior) continue;
    const SiteStats* here = &f.sites[i];
    const SiteStats* west = f.at(s.z.col - 1, s.row);
    const SiteStats* east = f.at(s.z.col + 1, s.row);
    if (!west || !east) continue;

    std::vector<Complex> r(K);

    for (int c = 0; c < K; ++c)
      r[c] = here->phi_up.chain_means[c] -
             (ei * here->phi_lt.chain_means[c] + emi * here->phi_rt.chain_means[c]) / sq;
    rep.turn_eq.push_back(make_check("turn_up", s, r));
    tally(rep.turn_eq.back());
    for (int c = 0; c < K; ++c)
      r[c] = here->phi_dn.chain_means[c] -
             (ei * here->phi_rt.chain_means[c] + emi * here->phi_lt.chain_means[c]) / sq;
    rep.turn_eq.push_back(make_check("turn_down", s, r));
    tally(rep.turn_eq.back());

    // The derivative formulas anchor at the white point of each pair: the
    // first bracket sits on the white site, the second on its black partner.
    auto closed_up = [&](const SiteStats* wz, const SiteStats* uz, int c) {
      return rate * (ei * wz->phi_lt.chain_means[c] - emi * wz->phi_rt.chain_means[c]) +
             rate * (emi * uz->phi_rt.chain_means[c] - ei * uz->phi_lt.chain_means[c]);
    };
    auto closed_dn = [&](const SiteStats* wz, const SiteStats* vz, int c) {
      return rate * (emi * wz->phi_lt.chain_means[c] - ei * wz->phi_rt.chain_means[c]) +
             rate * (ei * vz->phi_rt.chain_means[c] - emi * vz->phi_lt.chain_means[c]);
    };
    bool white = s.color == PointColor::white;
    const SiteStats* w_up = white ? here : east;  // white anchor of the up pair
    const SiteStats* u_up = white ? west : here;  // its black partner (west of it)
    const SiteStats* w_dn = white ? here : west;  // white anchor of the down pair
    const SiteStats* v_dn = white ? east : here;  // its black partner (east of it)

    for (int c = 0; c < K; ++c)
      r[c] = closed_up(w_up, u_up, c) -
             i_over_d * (w_up->phi_dn.chain_means[c] - u_up->phi_dn.chain_means[c]);
    rep.phi_dots.push_back(make_check("dot_up", s, r));
    tally(rep.phi_dots.back());

    for (int c = 0; c < K; ++c)
      r[c] = closed_dn(w_dn, v_dn, c) -
             i_over_d * (v_dn->phi_up.chain_means[c] - w_dn->phi_up.chain_means[c]);
    rep.phi_dots.push_back(make_check("dot_down", s, r));
    tally(rep.phi_dots.back());

    // The difference quotient is meaningless where the field kinks in t (the
    // mark levels); the closed-form derivative needs no such exclusion.
    bool smooth = true;
    for (double lvl : f.kink_levels)
      if (std::abs(s.z.t - lvl) <= f.eta) smooth = false;
    if (smooth) {
      for (int c = 0; c < K; ++c)
        r[c] = here->dphi_up.chain_means[c] - closed_up(w_up, u_up, c);
      rep.fd_cross.push_back(make_check("fd_up", s, r));
      for (int c = 0; c < K; ++c)
        r[c] = here->dphi_dn.chain_means[c] - closed_dn(w_dn, v_dn, c);
      rep.fd_cross.push_back(make_check("fd_down", s, r));
    }
  }

  for (const auto& c : rep.turn_eq) rep.max_z_turn = std::max(rep.max_z_turn, c.z_score);
  for (const auto& c : rep.phi_dots) rep.max_z_dots = std::max(rep.max_z_dots, c.z_score);
  for (const auto& c : rep.fd_cross) rep.max_z_fd = std::max(rep.max_z_fd, c.z_score);
  rep.frac_within_2se = gated ? double(within2) / double(gated) : 1.0;
  return rep;
}

}  // namespace semihol

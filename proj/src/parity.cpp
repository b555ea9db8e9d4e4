#include "semihol/parity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "semihol/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace semihol {

namespace {

struct PieceEnd {
  int piece = -1;
  bool at_hi = false;
};

struct LabellingBuilder {
  const SemiDiscreteDomain& dom;
  const Configuration& cfg;
  LatticePoint a, a_int, z;
  bool a_on_side = false;
  bool empty_sources = false;  // z == a_int

  std::vector<ParityLabelling::Piece> pieces;
  std::map<std::pair<int, double>, PieceEnd> end_at;
  std::map<std::pair<int, double>, std::pair<int, double>> bridge_link;

  LabellingBuilder(const SemiDiscreteDomain& d, const Configuration& c) : dom(d), cfg(c) {}

  static bool same_point(const LatticePoint& p, const LatticePoint& q) {
    return p.col == q.col && p.t == q.t;
  }

  // Returns false when some column sees an odd number of switches.
  bool march() {
    std::map<int, std::vector<double>> switches;
    for (const auto& [w, times] : cfg.bridges) {
      for (double t : times) {
        for (int c : {w - 1, w + 1}) {
          if (!dom.has_column(c)) continue;
          switches[c].push_back(t);
          bridge_link[{c, t}] = {c == w - 1 ? w + 1 : w - 1, t};
        }
      }
    }
    if (!empty_sources) {
      if (a_on_side) switches[a_int.col].push_back(a_int.t);
      if (dom.classify(z).position == PointPosition::interior) switches[z.col].push_back(z.t);
    }

    auto target = [&](int col, double t) {
      if (empty_sources) return 0;
      LatticePoint p{col, t};
      if (!a_on_side && same_point(p, a)) return 1;
      if (dom.classify(z).position == PointPosition::horizontal_boundary && same_point(p, z))
        return 1;
      return 0;
    };

    for (const auto& [col, span] : dom.columns) {
      if (!Lattice::is_black(col)) continue;
      std::vector<double> ev;
      if (auto it = switches.find(col); it != switches.end()) {
        ev = it->second;
        std::sort(ev.begin(), ev.end());
        for (size_t i = 0; i + 1 < ev.size(); ++i)
          if (ev[i] == ev[i + 1])
            throw Error(ErrorCode::TieBreak, "coincident switch times on a column");
      }
      for (const auto& iv : span.intervals) {
        for (double t : ev)
          if (t == iv.lo || t == iv.hi)
            throw Error(ErrorCode::TieBreak, "switch at a column endpoint");
        int v = target(col, iv.lo);
        double open_t = iv.lo;
        for (double t : ev) {
          if (t < iv.lo || t > iv.hi) continue;
          if (v == 1) pieces.push_back({col, open_t, t});
          v = 1 - v;
          open_t = t;
        }
        if (v != target(col, iv.hi)) return false;
        if (v == 1) pieces.push_back({col, open_t, iv.hi});
      }
    }
    for (size_t i = 0; i < pieces.size(); ++i) {
      end_at[{pieces[i].col, pieces[i].lo}] = {int(i), false};
      end_at[{pieces[i].col, pieces[i].hi}] = {int(i), true};
    }
    return true;
  }
};

}  // namespace

int ParityLabelling::value_above(const LatticePoint& u) const {
  for (const auto& p : intervals)
    if (p.col == u.col && p.lo <= u.t && u.t < p.hi) return 1;
  return 0;
}

ParityLabelling build_labelling(const SemiDiscreteDomain& dom, const Configuration& bridges,
                                const LatticePoint& a, const LatticePoint& z) {
  if (!bridges.cuts.empty())
    throw Error(ErrorCode::InvalidConfig, "labellings take bridges-only configurations");
  auto ac = dom.classify(a);
  bool a_side = ac.color == PointColor::white && ac.position == PointPosition::vertical_boundary;
  bool a_top = ac.color == PointColor::black && ac.position == PointPosition::horizontal_boundary;
  if (!a_side && !a_top)
    throw Error(ErrorCode::InvalidMarks,
                "a must be a white side point or a black horizontal boundary point");
  auto zc = dom.classify(z);
  if (!Lattice::is_black(z.col) || zc.position == PointPosition::exterior)
    throw Error(ErrorCode::InvalidMarks, "z must be a black point of the domain");
  if (bridges.contains(z.col - 1, z.t) || bridges.contains(z.col + 1, z.t))
    throw Error(ErrorCode::TieBreak, "source coincides with a bridge endpoint");

  LabellingBuilder b(dom, bridges);
  b.a = a;
  b.z = z;
  b.a_on_side = a_side;
  if (a_side) {
    int ic =
        dom.classify(a.col + 1, a.t).position != PointPosition::exterior ? a.col + 1 : a.col - 1;
    b.a_int = {ic, a.t};
  } else {
    b.a_int = a;
  }
  b.empty_sources = (z.col == b.a_int.col && z.t == b.a_int.t);

  ParityLabelling lab;
  lab.a = a;
  lab.z = z;
  if (!b.march()) return lab;
  lab.exists = true;
  lab.intervals = b.pieces;
  for (const auto& p : b.pieces) lab.total_length += p.hi - p.lo;

  std::vector<char> used(b.pieces.size(), 0);
  long quarters = 0;
  Dir prev_dir = Dir::right;
  bool have_dir = false;
  auto add_turn = [&](Dir next) {
    if (have_dir) quarters += quarter_turn(prev_dir, next);
    prev_dir = next;
    have_dir = true;
  };

  if (b.empty_sources) {
    if (a_side) {
      ParityLabelling::PathStep he;
      he.horizontal = true;
      he.col = a.col;
      he.t0 = he.t1 = a.t;
      he.dir = b.a_int.col > a.col ? Dir::right : Dir::left;
      he.half_edge = true;
      lab.path.push_back(he);
      lab.ends_with_half_edge = true;
    }
    lab.winding_quarters = 0;
  } else {
    LatticePoint cur = b.a_int;
    if (a_side) {
      ParityLabelling::PathStep he;
      he.horizontal = true;
      he.col = a.col;
      he.t0 = he.t1 = a.t;
      he.dir = b.a_int.col > a.col ? Dir::right : Dir::left;
      he.half_edge = true;
      lab.path.push_back(he);
      add_turn(he.dir);
    }
    while (true) {
      auto it = b.end_at.find({cur.col, cur.t});
      if (it == b.end_at.end())
        throw Error(ErrorCode::InvalidConfig, "path lost the labelling structure");
      PieceEnd pe = it->second;
      if (used[pe.piece])
        throw Error(ErrorCode::InvalidConfig, "path revisits a labelled interval");
      used[pe.piece] = 1;
      const auto& piece = b.pieces[pe.piece];
      ParityLabelling::PathStep st;
      st.horizontal = false;
      st.col = piece.col;
      st.t0 = cur.t;
      st.t1 = pe.at_hi ? piece.lo : piece.hi;
      st.dir = st.t1 > st.t0 ? Dir::up : Dir::down;
      add_turn(st.dir);
      lab.path.push_back(st);
      cur = {piece.col, st.t1};

      auto br = b.bridge_link.find({cur.col, cur.t});
      if (br == b.bridge_link.end()) break;  // reached the z source
      ParityLabelling::PathStep hop;
      hop.horizontal = true;
      hop.col = (cur.col + br->second.first) / 2;
      hop.t0 = hop.t1 = cur.t;
      hop.dir = br->second.first > cur.col ? Dir::right : Dir::left;
      add_turn(hop.dir);
      lab.path.push_back(hop);
      cur = {br->second.first, cur.t};
    }
    lab.winding_quarters = quarters;
  }

  std::vector<char> seen = used;
  for (size_t i = 0; i < b.pieces.size(); ++i) {
    if (seen[i]) continue;
    ++lab.loops;
    size_t curp = i;
    bool at_hi = true;
    while (!seen[curp]) {
      seen[curp] = 1;
      double t_end = at_hi ? b.pieces[curp].hi : b.pieces[curp].lo;
      auto br = b.bridge_link.find({b.pieces[curp].col, t_end});
      if (br == b.bridge_link.end())
        throw Error(ErrorCode::InvalidConfig, "open chain in the loop set");
      auto nx = b.end_at.find({br->second.first, br->second.second});
      if (nx == b.end_at.end())
        throw Error(ErrorCode::InvalidConfig, "bridge into no labelled interval");
      curp = nx->second.piece;
      at_hi = !nx->second.at_hi;
    }
  }

  return lab;
}

ParityLabelling build_labelling_white(const SemiDiscreteDomain& dom, const Configuration& bridges,
                                      const LatticePoint& a, const LatticePoint& w) {
  if (Lattice::is_black(w.col))
    throw Error(ErrorCode::InvalidMarks, "expected a white point");
  ParityLabelling left, right;
  bool lv = false, rv = false;
  if (dom.classify(w.col - 1, w.t).position != PointPosition::exterior) {
    left = build_labelling(dom, bridges, a, {w.col - 1, w.t});
    lv = left.exists;
  }
  if (dom.classify(w.col + 1, w.t).position != PointPosition::exterior) {
    right = build_labelling(dom, bridges, a, {w.col + 1, w.t});
    rv = right.exists;
  }
  if (lv && rv) throw Error(ErrorCode::InvalidConfig, "half-edge completion is not exclusive");
  if (!lv && !rv) {
    ParityLabelling lab;
    lab.a = a;
    lab.z = w;
    return lab;
  }
  ParityLabelling lab = lv ? left : right;
  lab.z = w;
  ParityLabelling::PathStep he;
  he.horizontal = true;
  he.col = w.col;
  he.t0 = he.t1 = w.t;
  he.dir = lv ? Dir::right : Dir::left;
  he.half_edge = true;
  if (lab.path.empty() || (lab.path.size() == 1 && lab.path.front().half_edge)) {
    // Completing straight back out of the entry half-edge: a pi turn.
    lab.winding_quarters += 2;
  } else {
    lab.winding_quarters += quarter_turn(lab.path.back().dir, he.dir);
  }
  lab.path.push_back(he);
  lab.ends_with_half_edge = true;
  return lab;
}

double spin_weight(const ParityLabelling& lab, double h) {
  if (!lab.exists) return 0.0;
  double x = std::exp(-2.0 * h * lab.total_length);
  if (lab.ends_with_half_edge) x /= std::sqrt(2.0);
  return x;
}

double parity_winding(const ParityLabelling& lab) {
  return double(lab.winding_quarters) * kPi / 2.0;
}

// --- spin observable ---------------------------------------------------------

SpinField spin_field(const SemiDiscreteDomain& dom, const LatticePoint& a, const LatticePoint& b,
                     const std::vector<LatticePoint>& sites, const SpinFieldParams& params) {
  auto bc = dom.classify(b);
  if (bc.color != PointColor::black || bc.position != PointPosition::horizontal_boundary)
    throw Error(ErrorCode::InvalidMarks, "b must be a black horizontal boundary point");
  bool lower = false;
  if (auto* ivs = dom.column_intervals(b.col))
    for (const auto& iv : *ivs)
      if (iv.lo == b.t) lower = true;
  if (!lower) throw Error(ErrorCode::InvalidMarks, "b must sit on the lower boundary");

  double rate = 1.0 / (2.0 * dom.lattice.delta);
  const int K = params.n_chains;
  const size_t ns = sites.size();

  std::vector<std::vector<Complex>> num_sum(K, std::vector<Complex>(ns, Complex{0, 0}));
  std::vector<Complex> den_sum(K, Complex{0, 0});

  auto eval = [&](const Configuration& cfg, const LatticePoint& zz) -> Complex {
    ParityLabelling lab = Lattice::is_black(zz.col) ? build_labelling(dom, cfg, a, zz)
                                                    : build_labelling_white(dom, cfg, a, zz);
    if (!lab.exists) return {0, 0};
    return eighth_phase(-lab.winding_quarters) * spin_weight(lab, rate);
  };

  auto run_one = [&](int c) {
    SplitMix64 rng = SplitMix64::stream(params.seed, c + 1);
    for (int i = 0; i < params.n_samples; ++i) {
      Configuration cfg = sample_poisson(dom, 0.0, rate, rng);
      den_sum[c] += eval(cfg, b);
      for (size_t s = 0; s < ns; ++s) num_sum[c][s] += eval(cfg, sites[s]);
    }
  };
#ifdef _OPENMP
  if (params.parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < K; ++c) run_one(c);
  } else
#endif
  {
    for (int c = 0; c < K; ++c) run_one(c);
  }

  SpinField out;
  out.a = a;
  out.b = b;
  out.n_samples = long(K) * params.n_samples;
  std::vector<Complex> den_means(K);
  for (int c = 0; c < K; ++c) den_means[c] = den_sum[c] / double(params.n_samples);
  out.denominator = combine_means(den_means);
  if (std::abs(out.denominator.mean) <= 3.0 * std::abs(out.denominator.std_error))
    throw Error(ErrorCode::ZeroDenominator, "spin-field denominator indistinguishable from zero");

  for (size_t s = 0; s < ns; ++s) {
    SpinFieldSite site;
    site.z = sites[s];
    site.color = Lattice::is_black(sites[s].col) ? PointColor::black : PointColor::white;
    std::vector<Complex> nm(K), ratio(K);
    for (int c = 0; c < K; ++c) {
      nm[c] = num_sum[c][s] / double(params.n_samples);
      ratio[c] = nm[c] / den_means[c];
    }
    site.numerator = combine_means(nm);
    site.value = combine_means(ratio);
    out.sites.push_back(site);
  }
  return out;
}

// --- space-time spin representation -------------------------------------------

double spacetime_spin_weight(int n_sites, double beta, const std::vector<std::vector<double>>& cuts,
                             double coupling) {
  if (n_sites < 1) throw Error(ErrorCode::SchemaError, "need at least one site");
  if (n_sites > 20) throw Error(ErrorCode::NTooLarge, "base-sign enumeration capped at 20 sites");
  if (int(cuts.size()) != n_sites)
    throw Error(ErrorCode::InvalidConfig, "one cut list per site required");
  for (const auto& v : cuts)
    if (v.size() % 2 != 0) return 0.0;  // no periodic spin function exists

  std::vector<double> pair_integral(std::max(0, n_sites - 1), 0.0);
  for (int x = 0; x + 1 < n_sites; ++x) {
    std::vector<std::pair<double, int>> ev;
    for (double t : cuts[x]) ev.push_back({t, 0});
    for (double t : cuts[x + 1]) ev.push_back({t, 1});
    std::sort(ev.begin(), ev.end());
    double prev = 0.0, acc = 0.0;
    int s0 = 1, s1 = 1;
    for (const auto& [t, which] : ev) {
      acc += s0 * s1 * (t - prev);
      prev = t;
      (which == 0 ? s0 : s1) *= -1;
    }
    acc += s0 * s1 * (beta - prev);
    pair_integral[x] = acc;
  }

  double total = 0;
  for (unsigned mask = 0; mask < (1u << n_sites); ++mask) {
    double e = 0;
    for (int x = 0; x + 1 < n_sites; ++x) {
      int bx = (mask >> x) & 1 ? 1 : -1;
      int by = (mask >> (x + 1)) & 1 ? 1 : -1;
      e += bx * by * pair_integral[x];
    }
    total += std::exp(coupling * e);
  }
  return total;
}

// --- Kramers-Wannier duality ----------------------------------------------------

KwDual kw_dual_map(const SpinConfig& sigma) {
  int n = sigma.n_sites;
  if (int(sigma.base.size()) != n || int(sigma.cuts.size()) != n)
    throw Error(ErrorCode::InvalidConfig, "malformed spin configuration");
  for (int s : sigma.base)
    if (s != 1) throw Error(ErrorCode::BoundaryViolation, "wired condition needs +1 base signs");
  if (!sigma.cuts.front().empty() || !sigma.cuts.back().empty())
    throw Error(ErrorCode::BoundaryViolation, "wired condition forbids cuts on the outer columns");
  for (const auto& v : sigma.cuts)
    if (v.size() % 2 != 0)
      throw Error(ErrorCode::BoundaryViolation, "odd cut count breaks periodicity");

  KwDual out;
  out.n_cols = n - 1;
  out.beta = sigma.beta;
  out.one_intervals.resize(out.n_cols);
  out.bridges = sigma.cuts;
  for (int j = 0; j < out.n_cols; ++j) {
    std::vector<double> ev;
    ev.insert(ev.end(), sigma.cuts[j].begin(), sigma.cuts[j].end());
    ev.insert(ev.end(), sigma.cuts[j + 1].begin(), sigma.cuts[j + 1].end());
    std::sort(ev.begin(), ev.end());
    int v = 0;
    double open_t = 0;
    for (double t : ev) {
      if (v == 1) {
        out.one_intervals[j].push_back({open_t, t});
        out.total_length += t - open_t;
      }
      v = 1 - v;
      open_t = t;
    }
    if (v == 1) {
      out.one_intervals[j].push_back({open_t, sigma.beta});
      out.total_length += sigma.beta - open_t;
    }
  }

  struct EndKey {
    int col;
    double t;
    bool operator<(const EndKey& o) const { return col != o.col ? col < o.col : t < o.t; }
  };
  std::map<EndKey, std::pair<int, int>> end_at;
  std::vector<std::vector<char>> seen(out.n_cols);
  for (int j = 0; j < out.n_cols; ++j) {
    seen[j].assign(out.one_intervals[j].size(), 0);
    for (size_t p = 0; p < out.one_intervals[j].size(); ++p) {
      end_at[{j, out.one_intervals[j][p].first}] = {j, int(p)};
      end_at[{j, out.one_intervals[j][p].second}] = {j, int(p)};
    }
  }
  auto other_dual_col = [&](int j, double t) -> int {
    for (int x : {j, j + 1}) {
      if (std::binary_search(sigma.cuts[x].begin(), sigma.cuts[x].end(), t))
        return x == j ? j - 1 : j + 1;
    }
    return -2;
  };
  for (int j = 0; j < out.n_cols; ++j) {
    for (size_t p = 0; p < out.one_intervals[j].size(); ++p) {
      if (seen[j][p]) continue;
      ++out.loops;
      int cj = j;
      int cp = int(p);
      double t_next = out.one_intervals[j][p].second;
      while (!seen[cj][cp]) {
        seen[cj][cp] = 1;
        int nj = other_dual_col(cj, t_next);
        auto it = end_at.find({nj, t_next});
        if (it == end_at.end())
          throw Error(ErrorCode::InvalidConfig, "disagreement set is not a loop arrangement");
        cj = it->second.first;
        cp = it->second.second;
        const auto& piece = out.one_intervals[cj][cp];
        t_next = (piece.first == t_next) ? piece.second : piece.first;
      }
    }
  }
  return out;
}

SpinConfig kw_dual_inverse(const KwDual& psi) {
  SpinConfig s;
  s.n_sites = psi.n_cols + 1;
  s.beta = psi.beta;
  s.base.assign(s.n_sites, 1);
  s.cuts = psi.bridges;
  return s;
}

}  // namespace semihol

#include "semihol/configuration.hpp"

#include <algorithm>
#include <sstream>

namespace semihol {

std::size_t Configuration::cut_count() const {
  std::size_t n = 0;
  for (const auto& [k, v] : cuts) n += v.size();
  return n;
}

std::size_t Configuration::bridge_count() const {
  std::size_t n = 0;
  for (const auto& [k, v] : bridges) n += v.size();
  return n;
}

bool Configuration::contains(int col, double t) const {
  const auto& m = Lattice::is_black(col) ? cuts : bridges;
  auto it = m.find(col);
  if (it == m.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), t);
}

const std::vector<double>* Configuration::column_points(int col) const {
  const auto& m = Lattice::is_black(col) ? cuts : bridges;
  auto it = m.find(col);
  return it == m.end() ? nullptr : &it->second;
}

bool operator==(const Configuration& a, const Configuration& b) {
  return a.cuts == b.cuts && a.bridges == b.bridges && a.topology == b.topology &&
         (a.topology != TimeTopology::periodic || a.beta == b.beta);
}

namespace {

void sample_color(const SemiDiscreteDomain& dom, double rate, bool black,
                  std::map<int, std::vector<double>>& out, SplitMix64& rng) {
  for (const auto& [k, ivs] : dom.interior) {
    if (Lattice::is_black(k) != black) continue;
    std::vector<double> pts;
    double total = 0;
    for (const auto& iv : ivs) total += iv.length();
    if (total <= 0 || rate <= 0) continue;
    double s = exponential(rng, rate);
    while (s < total) {
      double rem = s;
      for (const auto& iv : ivs) {
        if (rem < iv.length()) {
          pts.push_back(iv.lo + rem);
          break;
        }
        rem -= iv.length();
      }
      s += exponential(rng, rate);
    }
    std::sort(pts.begin(), pts.end());
    if (!pts.empty()) out[k] = std::move(pts);
  }
}

}  // namespace

Configuration sample_poisson(const SemiDiscreteDomain& dom, double rate_black, double rate_white,
                             SplitMix64& rng) {
  Configuration cfg;
  cfg.topology = TimeTopology::interval;
  sample_color(dom, rate_black, true, cfg.cuts, rng);
  sample_color(dom, rate_white, false, cfg.bridges, rng);
  return cfg;
}

Configuration sample_poisson_periodic(const SemiDiscreteDomain& dom, double rate_black,
                                      double rate_white, double beta, SplitMix64& rng) {
  Configuration cfg;
  cfg.topology = TimeTopology::periodic;
  cfg.beta = beta;
  for (const auto& [k, span] : dom.columns) {
    double rate = Lattice::is_black(k) ? rate_black : rate_white;
    std::vector<double> pts = poisson_points(rng, rate, beta);
    if (!pts.empty()) {
      auto& m = Lattice::is_black(k) ? cfg.cuts : cfg.bridges;
      m[k] = std::move(pts);
    }
    (void)span;
  }
  return cfg;
}

Configuration dual_configuration(const SemiDiscreteDomain& dom, const Configuration& cfg) {
  int kmin = 1 << 30, kmax = -(1 << 30);
  for (const auto& [k, span] : dom.columns) {
    if (!Lattice::is_black(k)) continue;
    kmin = std::min(kmin, k);
    kmax = std::max(kmax, k);
    (void)span;
  }
  for (const auto& [k, v] : cfg.cuts)
    if ((k == kmin || k == kmax) && !v.empty())
      throw Error(ErrorCode::BoundaryCut, "cut on an outermost column has no dual bridge");
  Configuration dual;
  dual.topology = cfg.topology;
  dual.beta = cfg.beta;
  dual.cuts = cfg.bridges;
  dual.bridges = cfg.cuts;
  return dual;
}

namespace {

// Flat per-colour structure; rebuilt per call but allocation-light since the
// chain recounts it on every proposal.
struct ColorStructure {
  int kmin = 0, kmax = 0;
  bool periodic = false;
  double beta = 0;
  // Per column (indexed k - kmin): intervals, severs, and the node id of the
  // first segment of each interval.
  std::vector<const std::vector<Interval>*> intervals;
  std::vector<const std::vector<double>*> severs;
  std::vector<std::vector<int>> first_node;
  int n_nodes = 0;

  bool has_col(int k) const {
    return k >= kmin && k <= kmax && !first_node[k - kmin].empty();
  }

  int node_at(int k, double t) const {
    double tt = t;
    if (periodic && beta > 0) {
      tt = std::fmod(t, beta);
      if (tt < 0) tt += beta;
    }
    int ci = k - kmin;
    const auto& ivs = *intervals[ci];
    for (size_t i = 0; i < ivs.size(); ++i) {
      if (tt < ivs[i].lo || tt > ivs[i].hi) continue;
      const auto& sv = *severs[ci];
      auto lo = std::lower_bound(sv.begin(), sv.end(), ivs[i].lo);
      auto up = std::upper_bound(lo, sv.end(), tt);
      int idx = int(up - lo);
      int count = int(std::upper_bound(lo, sv.end(), ivs[i].hi) - lo);
      if (periodic && count > 0 && idx == count) idx = 0;  // wrap piece
      return first_node[ci][i] + idx;
    }
    throw Error(ErrorCode::InvalidConfig, "point outside column intervals");
  }
};

const std::vector<Interval>& periodic_interval(double beta) {
  thread_local std::vector<Interval> iv(1);
  iv[0] = {0.0, beta};
  return iv;
}

ColorStructure build_structure(const SemiDiscreteDomain& dom, const Configuration& cfg,
                               bool black, bool periodic) {
  static const std::vector<double> kEmpty;
  ColorStructure s;
  s.kmin = dom.min_col();
  s.kmax = dom.max_col();
  s.periodic = periodic;
  s.beta = cfg.beta;
  int ncols = s.kmax - s.kmin + 1;
  s.intervals.assign(ncols, nullptr);
  s.severs.assign(ncols, &kEmpty);
  s.first_node.assign(ncols, {});
  const auto& sever_map = black ? cfg.cuts : cfg.bridges;
  for (const auto& [k, span] : dom.columns) {
    if (Lattice::is_black(k) != black) continue;
    int ci = k - s.kmin;
    s.intervals[ci] = periodic ? &periodic_interval(cfg.beta) : &span.intervals;
    if (auto it = sever_map.find(k); it != sever_map.end()) s.severs[ci] = &it->second;
    const auto& ivs = *s.intervals[ci];
    const auto& sv = *s.severs[ci];
    s.first_node[ci].reserve(ivs.size());
    for (const auto& iv : ivs) {
      int inside = int(std::upper_bound(sv.begin(), sv.end(), iv.hi) -
                       std::lower_bound(sv.begin(), sv.end(), iv.lo));
      s.first_node[ci].push_back(s.n_nodes);
      // m severs make m+1 linear pieces, or m circular arcs when periodic.
      s.n_nodes += periodic ? std::max(1, inside) : inside + 1;
    }
  }
  return s;
}

}  // namespace

ComponentCount count_components(const SemiDiscreteDomain& dom, const Configuration& cfg,
                                BoundaryMode mode) {
  bool periodic = mode == BoundaryMode::periodic;
  if (periodic && cfg.topology != TimeTopology::periodic)
    throw Error(ErrorCode::InvalidConfig, "periodic counting needs a periodic configuration");
  if (mode == BoundaryMode::dobrushin_wired && dom.kind != DomainKind::dobrushin)
    throw Error(ErrorCode::NotDobrushin, "wired counting needs a dobrushin domain");

  ComponentCount out;
  for (int colorpass = 0; colorpass < 2; ++colorpass) {
    bool black = colorpass == 0;
    ColorStructure s = build_structure(dom, cfg, black, periodic);
    UnionFind uf(s.n_nodes + 1);
    int arc = s.n_nodes;  // wired-boundary super node

    // Connections across the opposite-colour columns.
    const auto& conn_map = black ? cfg.bridges : cfg.cuts;
    for (const auto& [k, times] : conn_map) {
      bool west = s.has_col(k - 1), east = s.has_col(k + 1);
      if (!west || !east) continue;
      for (double t : times) uf.unite(s.node_at(k - 1, t), s.node_at(k + 1, t));
    }

    if (mode == BoundaryMode::dobrushin_wired) {
      PointColor want = black ? PointColor::black : PointColor::white;
      for (const auto& ve : dom.vertical_edges) {
        if (ve.color != want) continue;
        double mid = 0.5 * (ve.span.lo + ve.span.hi);
        // Wire every elementary segment overlapping the boundary piece.
        int ci = ve.k - s.kmin;
        const auto& sv = *s.severs[ci];
        int first = s.node_at(ve.k, std::nextafter(ve.span.lo, ve.span.hi));
        int last = s.node_at(ve.k, std::nextafter(ve.span.hi, ve.span.lo));
        for (int n = first; n <= last; ++n) uf.unite(arc, n);
        (void)mid;
        (void)sv;
      }
      for (const auto& he : dom.horizontal_edges) {
        if (he.k_hi - he.k_lo == 1) continue;  // jogs carry the marks only
        if (he.color != want) continue;
        for (int k = he.k_lo; k <= he.k_hi; ++k) {
          if (Lattice::is_black(k) != black || !s.has_col(k)) continue;
          const auto& ivs = *s.intervals[k - s.kmin];
          for (size_t i = 0; i < ivs.size(); ++i) {
            if (ivs[i].lo == he.t)
              uf.unite(arc, s.node_at(k, std::nextafter(ivs[i].lo, ivs[i].hi)));
            if (ivs[i].hi == he.t)
              uf.unite(arc, s.node_at(k, std::nextafter(ivs[i].hi, ivs[i].lo)));
          }
        }
      }
    }

    int k = uf.count() - 1;  // drop the arc placeholder
    if (mode == BoundaryMode::dobrushin_wired) k += 1;
    if (black)
      out.k_black = k;
    else
      out.k_white = k;
  }
  out.loops = out.k_black + out.k_white - 2;
  return out;
}

Configuration toggle(const SemiDiscreteDomain& dom, const Configuration& cfg,
                     const LatticePoint& z) {
  auto cls = dom.classify(z.col, z.t);
  if (cls.position != PointPosition::interior)
    throw Error(ErrorCode::NotInterior, "toggle point must be interior");
  Configuration out = cfg;
  auto& m = Lattice::is_black(z.col) ? out.cuts : out.bridges;
  auto& v = m[z.col];
  auto it = std::lower_bound(v.begin(), v.end(), z.t);
  if (it != v.end() && *it == z.t)
    v.erase(it);
  else
    v.insert(it, z.t);
  if (v.empty()) m.erase(z.col);
  return out;
}

}  // namespace semihol

#include "semihol/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace semihol {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonSimplePath: return "NonSimplePath";
    case ErrorCode::WrongColumnParity: return "WrongColumnParity";
    case ErrorCode::MissingMarks: return "MissingMarks";
    case ErrorCode::InvalidMarks: return "InvalidMarks";
    case ErrorCode::ViolatedNeighborAssumption: return "ViolatedNeighborAssumption";
    case ErrorCode::OffLattice: return "OffLattice";
    case ErrorCode::NotDobrushin: return "NotDobrushin";
    case ErrorCode::BoundaryCut: return "BoundaryCut";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::TieBreak: return "TieBreak";
    case ErrorCode::ForeignPass: return "ForeignPass";
    case ErrorCode::ZeroWeightSum: return "ZeroWeightSum";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::SigmaOutOfRange: return "SigmaOutOfRange";
    case ErrorCode::NTooLarge: return "NTooLarge";
    case ErrorCode::SiteOutOfRange: return "SiteOutOfRange";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::InconsistentInitialData: return "InconsistentInitialData";
    case ErrorCode::NotSHolomorphic: return "NotSHolomorphic";
    case ErrorCode::MissingNeighbor: return "MissingNeighbor";
    case ErrorCode::StepTooSmall: return "StepTooSmall";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::BoundaryViolation: return "BoundaryViolation";
    case ErrorCode::NonUnitZeta: return "NonUnitZeta";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "Error";
}

namespace {

std::vector<Interval> merge_intervals(std::vector<Interval> v) {
  std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (const auto& iv : v) {
    if (iv.hi <= iv.lo) continue;
    if (!out.empty() && iv.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

std::vector<Interval> intersect_intervals(const std::vector<Interval>& a,
                                          const std::vector<Interval>& b) {
  std::vector<Interval> out;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double lo = std::max(a[i].lo, b[j].lo);
    double hi = std::min(a[i].hi, b[j].hi);
    if (hi > lo) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) ++i; else ++j;
  }
  return out;
}

std::vector<Interval> subtract_intervals(const std::vector<Interval>& a,
                                         const std::vector<Interval>& b) {
  std::vector<Interval> out;
  for (auto iv : a) {
    double lo = iv.lo;
    for (const auto& cut : b) {
      if (cut.hi <= lo || cut.lo >= iv.hi) continue;
      if (cut.lo > lo) out.push_back({lo, cut.lo});
      lo = std::max(lo, cut.hi);
    }
    if (iv.hi > lo) out.push_back({lo, iv.hi});
  }
  return out;
}

double total_length(const std::vector<Interval>& v) {
  double s = 0;
  for (const auto& iv : v) s += iv.length();
  return s;
}

struct Edge {
  bool horizontal;
  int k0, k1;      // half-index range for horizontal (path order, may be reversed)
  double t0, t1;   // t range for vertical (path order)
  int col;         // column for vertical
  double t;        // level for horizontal
  bool is_jog;
};

// Inside intervals of the vertical line crossing the given horizontal edges.
std::vector<Interval> jordan_intervals(const std::vector<HorizontalEdge>& edges,
                                       bool (*crosses)(const HorizontalEdge&, int), int key) {
  std::vector<double> levels;
  for (const auto& e : edges)
    if (crosses(e, key)) levels.push_back(e.t);
  std::sort(levels.begin(), levels.end());
  std::vector<Interval> out;
  for (size_t i = 0; i + 1 < levels.size(); i += 2) out.push_back({levels[i], levels[i + 1]});
  return out;
}

bool crosses_west(const HorizontalEdge& e, int k) { return e.k_lo < k && e.k_hi >= k; }
bool crosses_east(const HorizontalEdge& e, int k) { return e.k_lo <= k && e.k_hi > k; }
bool crosses_medial(const HorizontalEdge& e, int j) { return e.k_lo <= j && e.k_hi >= j + 1; }

}  // namespace

const std::vector<Interval>* SemiDiscreteDomain::column_intervals(int col) const {
  auto it = columns.find(col);
  return it == columns.end() ? nullptr : &it->second.intervals;
}

const std::vector<Interval>* SemiDiscreteDomain::interior_intervals(int col) const {
  auto it = interior.find(col);
  return it == interior.end() ? nullptr : &it->second;
}

double SemiDiscreteDomain::interior_length(int col) const {
  auto* v = interior_intervals(col);
  return v ? total_length(*v) : 0.0;
}

double SemiDiscreteDomain::total_interior_length(PointColor c) const {
  double s = 0;
  for (const auto& [k, v] : interior)
    if ((Lattice::is_black(k) ? PointColor::black : PointColor::white) == c) s += total_length(v);
  return s;
}

std::vector<Interval> SemiDiscreteDomain::medial_intervals(int j) const {
  return jordan_intervals(horizontal_edges, crosses_medial, j);
}

PointClass SemiDiscreteDomain::classify(int col, double t) const {
  PointColor color = Lattice::is_black(col) ? PointColor::black : PointColor::white;
  auto* ivs = column_intervals(col);
  if (!ivs) return {color, PointPosition::exterior};
  for (const auto& iv : *ivs) {
    if (t < iv.lo || t > iv.hi) continue;
    if (t == iv.lo || t == iv.hi) return {color, PointPosition::horizontal_boundary};
    for (const auto& ve : vertical_edges)
      if (ve.k == col && ve.span.contains(t)) return {color, PointPosition::vertical_boundary};
    return {color, PointPosition::interior};
  }
  return {color, PointPosition::exterior};
}

std::pair<SemiDiscreteDomain::Arc, SemiDiscreteDomain::Arc> SemiDiscreteDomain::boundary_arcs()
    const {
  if (kind != DomainKind::dobrushin || !marks)
    throw Error(ErrorCode::NotDobrushin, "boundary arcs require a dobrushin domain");
  Arc black, white;
  // Jog halves: the side of each jog adjacent to a black column belongs to the
  // black arc, the other half to the white arc.
  for (const auto& he : horizontal_edges) {
    bool jog = (he.k_hi - he.k_lo) == 1;
    if (jog) {
      int kb = Lattice::is_black(he.k_lo) ? he.k_lo : he.k_hi;
      int kw = Lattice::is_black(he.k_lo) ? he.k_hi : he.k_lo;
      (void)kb;
      (void)kw;
      HorizontalEdge hb = he, hw = he;  // geometric halves share the medial midpoint
      hb.color = PointColor::black;
      hw.color = PointColor::white;
      black.horizontals.push_back(hb);
      white.horizontals.push_back(hw);
    } else if (he.color == PointColor::black) {
      black.horizontals.push_back(he);
    } else {
      white.horizontals.push_back(he);
    }
  }
  for (const auto& ve : vertical_edges) {
    if (ve.color == PointColor::black)
      black.verticals.push_back(ve);
    else
      white.verticals.push_back(ve);
  }
  return {black, white};
}

SemiDiscreteDomain build_domain(const Lattice& lattice, DomainKind kind,
                                const std::vector<std::pair<double, double>>& path_xy,
                                std::optional<std::pair<MedialPoint, MedialPoint>> marks) {
  if (lattice.delta <= 0) throw Error(ErrorCode::SchemaError, "delta must be positive");
  SemiDiscreteDomain dom;
  dom.lattice = lattice;
  dom.kind = kind;

  // Snap vertices to half-steps of delta.
  std::vector<PathVertex> verts;
  for (size_t i = 0; i < path_xy.size(); ++i) {
    double x = path_xy[i].first, t = path_xy[i].second;
    double kf = 2.0 * x / lattice.delta;
    double k = std::round(kf);
    if (std::abs(kf - k) > 2e-9) {
      std::ostringstream os;
      os << "vertex " << i << " x=" << x << " is not on a column";
      throw Error(ErrorCode::OffLattice, os.str());
    }
    verts.push_back({int(k), t});
  }
  if (verts.size() >= 2 && verts.front().x_half == verts.back().x_half &&
      verts.front().t == verts.back().t)
    verts.pop_back();
  if (verts.size() < 4) throw Error(ErrorCode::NonSimplePath, "path needs at least 4 vertices");

  // Merge collinear consecutive edges, drop zero-length ones.
  std::vector<PathVertex> vs;
  size_t n = verts.size();
  for (size_t i = 0; i < n; ++i) {
    const PathVertex& prev = verts[(i + n - 1) % n];
    const PathVertex& cur = verts[i];
    const PathVertex& next = verts[(i + 1) % n];
    if (cur.x_half == next.x_half && cur.t == next.t) continue;
    bool collinear = (prev.x_half == cur.x_half && cur.x_half == next.x_half) ||
                     (prev.t == cur.t && cur.t == next.t);
    if (!collinear) vs.push_back(cur);
  }
  n = vs.size();
  if (n < 4) throw Error(ErrorCode::NonSimplePath, "degenerate path");

  // Signed area; normalize to counter-clockwise.
  double area2 = 0;
  for (size_t i = 0; i < n; ++i) {
    const auto& p = vs[i];
    const auto& q = vs[(i + 1) % n];
    area2 += lattice.column_x(p.x_half) * q.t - lattice.column_x(q.x_half) * p.t;
  }
  if (area2 == 0) throw Error(ErrorCode::NonSimplePath, "path encloses no area");
  if (area2 < 0) std::reverse(vs.begin(), vs.end());
  dom.path = vs;

  // Edges in path order; validate axis alignment and alternation.
  std::vector<Edge> edges;
  for (size_t i = 0; i < n; ++i) {
    const auto& p = vs[i];
    const auto& q = vs[(i + 1) % n];
    Edge e{};
    if (p.x_half == q.x_half && p.t != q.t) {
      e.horizontal = false;
      e.col = p.x_half;
      e.t0 = p.t;
      e.t1 = q.t;
    } else if (p.t == q.t && p.x_half != q.x_half) {
      e.horizontal = true;
      e.k0 = p.x_half;
      e.k1 = q.x_half;
      e.t = p.t;
      e.is_jog = std::abs(e.k1 - e.k0) == 1;
    } else {
      std::ostringstream os;
      os << "vertex " << i << ": segment is not axis-aligned";
      throw Error(ErrorCode::NonSimplePath, os.str());
    }
    if (!edges.empty() && edges.back().horizontal == e.horizontal)
      throw Error(ErrorCode::NonSimplePath, "consecutive parallel segments");
    edges.push_back(e);
  }
  if (edges.front().horizontal == edges.back().horizontal)
    throw Error(ErrorCode::NonSimplePath, "consecutive parallel segments at path close");

  // Simplicity: no improper intersections between non-adjacent segments.
  auto seg_range = [](double a, double b) { return std::pair<double, double>(std::min(a, b), std::max(a, b)); };
  for (size_t i = 0; i < edges.size(); ++i) {
    for (size_t j = i + 1; j < edges.size(); ++j) {
      bool adjacent = (j == i + 1) || (i == 0 && j == edges.size() - 1);
      const Edge &a = edges[i], &b = edges[j];
      if (a.horizontal && b.horizontal) {
        if (a.t != b.t) continue;
        auto [alo, ahi] = seg_range(a.k0, a.k1);
        auto [blo, bhi] = seg_range(b.k0, b.k1);
        if (ahi > blo && bhi > alo)
          throw Error(ErrorCode::NonSimplePath, "overlapping horizontal segments");
      } else if (!a.horizontal && !b.horizontal) {
        if (a.col != b.col) continue;
        auto [alo, ahi] = seg_range(a.t0, a.t1);
        auto [blo, bhi] = seg_range(b.t0, b.t1);
        if (ahi > blo && bhi > alo)
          throw Error(ErrorCode::NonSimplePath, "overlapping vertical segments");
      } else {
        const Edge& h = a.horizontal ? a : b;
        const Edge& v = a.horizontal ? b : a;
        auto [klo, khi] = seg_range(h.k0, h.k1);
        auto [tlo, thi] = seg_range(v.t0, v.t1);
        bool x_in = v.col > klo && v.col < khi;
        bool x_touch = v.col == klo || v.col == khi;
        bool t_in = h.t > tlo && h.t < thi;
        bool t_touch = h.t == tlo || h.t == thi;
        if ((x_in && t_in) || (x_in && t_touch && !adjacent) || (x_touch && t_in && !adjacent))
          throw Error(ErrorCode::NonSimplePath, "crossing segments");
      }
    }
  }

  // Colour assignment and parity checks.
  int jog_count = 0;
  for (auto& e : edges) {
    if (!e.horizontal) {
      bool black = Lattice::is_black(e.col);
      if (kind == DomainKind::primal && !black)
        throw Error(ErrorCode::WrongColumnParity, "primal path has a vertical segment on a white column");
      if (kind == DomainKind::dual && black)
        throw Error(ErrorCode::WrongColumnParity, "dual path has a vertical segment on a black column");
    } else if (e.is_jog) {
      if (kind != DomainKind::dobrushin)
        throw Error(ErrorCode::WrongColumnParity, "half-step segment outside a dobrushin path");
      ++jog_count;
    } else if ((e.k0 % 2 + 2) % 2 != (e.k1 % 2 + 2) % 2) {
      throw Error(ErrorCode::WrongColumnParity, "horizontal segment connects columns of mixed parity");
    }
  }
  if (kind == DomainKind::dobrushin && jog_count != 2)
    throw Error(ErrorCode::NotDobrushin, "dobrushin path needs exactly two half-step jogs");

  // Store canonical edges.  Horizontal colour = parity of its endpoints; the
  // interior lies above edges traversed eastward (counter-clockwise path).
  for (const auto& e : edges) {
    if (e.horizontal) {
      HorizontalEdge he;
      he.k_lo = std::min(e.k0, e.k1);
      he.k_hi = std::max(e.k0, e.k1);
      he.t = e.t;
      he.domain_above = e.k1 > e.k0;
      he.color = Lattice::is_black(he.k_lo) ? PointColor::black : PointColor::white;
      dom.horizontal_edges.push_back(he);
    } else {
      VerticalEdge ve;
      ve.k = e.col;
      ve.span = {std::min(e.t0, e.t1), std::max(e.t0, e.t1)};
      ve.color = Lattice::is_black(e.col) ? PointColor::black : PointColor::white;
      dom.vertical_edges.push_back(ve);
    }
  }

  // Column intervals: closure of (west-inside AND east-inside) plus vertical
  // boundary segments on the column.
  int kmin = vs[0].x_half, kmax = vs[0].x_half;
  for (const auto& v : vs) {
    kmin = std::min(kmin, v.x_half);
    kmax = std::max(kmax, v.x_half);
  }
  for (int k = kmin; k <= kmax; ++k) {
    auto west = jordan_intervals(dom.horizontal_edges, crosses_west, k);
    auto east = jordan_intervals(dom.horizontal_edges, crosses_east, k);
    auto core = intersect_intervals(west, east);
    std::vector<Interval> all = core;
    for (const auto& ve : dom.vertical_edges)
      if (ve.k == k) all.push_back(ve.span);
    all = merge_intervals(all);
    if (all.empty()) continue;
    ColumnSpan span;
    span.x_index = k;
    span.intervals = all;
    dom.columns[k] = span;

    // Interior sub-intervals: column minus vertical boundary pieces.
    std::vector<Interval> vb;
    for (const auto& ve : dom.vertical_edges)
      if (ve.k == k) vb.push_back(ve.span);
    vb = merge_intervals(vb);
    auto inter = subtract_intervals(all, vb);
    if (!inter.empty()) dom.interior[k] = inter;
  }

  // Standing assumption: every vertical boundary point has an interior
  // horizontal neighbour at distance delta/2.
  for (const auto& ve : dom.vertical_edges) {
    std::vector<Interval> nbr;
    if (auto* a = dom.interior_intervals(ve.k - 1); a) nbr.insert(nbr.end(), a->begin(), a->end());
    if (auto* b = dom.interior_intervals(ve.k + 1); b) nbr.insert(nbr.end(), b->begin(), b->end());
    nbr = merge_intervals(nbr);
    auto uncovered = subtract_intervals({ve.span}, nbr);
    if (total_length(uncovered) > 1e-12 * lattice.delta) {
      std::ostringstream os;
      os << "vertical boundary on column " << ve.k << " has no interior neighbour";
      throw Error(ErrorCode::ViolatedNeighborAssumption, os.str());
    }
  }

  // Marks.
  if (kind == DomainKind::dobrushin) {
    if (!marks) throw Error(ErrorCode::MissingMarks, "dobrushin domain needs marks a and b");
    struct Jog {
      int medial;
      double t;
      bool domain_above;
    };
    std::vector<Jog> jogs;
    for (const auto& he : dom.horizontal_edges)
      if (he.k_hi - he.k_lo == 1) jogs.push_back({he.k_lo, he.t, he.domain_above});
    auto find_jog = [&](const MedialPoint& m) -> const Jog* {
      for (const auto& j : jogs)
        if (j.medial == m.medial_index && j.t == m.t) return &j;
      return nullptr;
    };
    const Jog* ja = find_jog(marks->first);
    const Jog* jb = find_jog(marks->second);
    if (!ja || !jb || ja == jb)
      throw Error(ErrorCode::InvalidMarks, "marks must sit on the two boundary jogs");
    auto departs = [](const Jog& j) {
      Dir d = Lattice::medial_dir(j.medial);
      return j.domain_above ? d == Dir::up : d == Dir::down;
    };
    if (!departs(*ja) || departs(*jb))
      throw Error(ErrorCode::InvalidMarks, "interface direction conflicts with mark roles");
    Marks m;
    m.a = marks->first;
    m.b = marks->second;
    m.a_start = Lattice::medial_dir(ja->medial);
    m.b_arrive = Lattice::medial_dir(jb->medial);
    dom.marks = m;
  } else if (marks) {
    throw Error(ErrorCode::InvalidMarks, "marks are only valid for dobrushin domains");
  }

  return dom;
}

SemiDiscreteDomain rebuild_domain(const SemiDiscreteDomain& d) {
  std::vector<std::pair<double, double>> xy;
  for (const auto& v : d.path) xy.push_back({d.lattice.column_x(v.x_half), v.t});
  std::optional<std::pair<MedialPoint, MedialPoint>> mk;
  if (d.marks) mk = std::make_pair(d.marks->a, d.marks->b);
  return build_domain(d.lattice, d.kind, xy, mk);
}

SemiDiscreteDomain make_dobrushin_rect(double delta, int n_black, double height, double t_a,
                                       double t_b) {
  if (n_black < 2) throw Error(ErrorCode::SchemaError, "need at least two black columns");
  Lattice latt{delta};
  int kr = 2 * (n_black - 1);  // rightmost black column
  auto X = [&](int k) { return latt.column_x(k); };
  std::vector<std::pair<double, double>> path = {
      {X(0), t_a},      {X(-1), t_a},    {X(-1), 0.0},    {X(kr + 1), 0.0},
      {X(kr + 1), t_b}, {X(kr), t_b},    {X(kr), height}, {X(0), height},
  };
  MedialPoint a{-1, t_a}, b{kr, t_b};
  return build_domain(latt, DomainKind::dobrushin, path, std::make_pair(a, b));
}

SemiDiscreteDomain make_primal_rect(double delta, int k0, int k1, double t0, double t1) {
  Lattice latt{delta};
  auto X = [&](int k) { return latt.column_x(k); };
  std::vector<std::pair<double, double>> path = {
      {X(k0), t0}, {X(k1), t0}, {X(k1), t1}, {X(k0), t1}};
  return build_domain(latt, DomainKind::primal, path);
}

SemiDiscreteDomain make_dual_rect(double delta, int k0, int k1, double t0, double t1) {
  Lattice latt{delta};
  auto X = [&](int k) { return latt.column_x(k); };
  std::vector<std::pair<double, double>> path = {
      {X(k0), t0}, {X(k1), t0}, {X(k1), t1}, {X(k0), t1}};
  return build_domain(latt, DomainKind::dual, path);
}

}  // namespace semihol

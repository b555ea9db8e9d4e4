#ifndef SEMIHOL_GEOMETRY_HPP
#define SEMIHOL_GEOMETRY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semihol/common.hpp"

namespace semihol {

// Semi-discrete lattice delta*Z + i*R.  Columns are vertical lines indexed by
// integer half-steps of delta: even index = black (primal), odd = white (dual).
// Medial lines sit between adjacent columns; medial index j names the line
// between columns j and j+1, at x = (2j+1)*delta/4.
struct Lattice {
  double delta = 1.0;
  double column_x(int half_index) const { return 0.5 * delta * half_index; }
  double medial_x(int medial_index) const { return 0.25 * delta * (2 * medial_index + 1); }
  static bool is_black(int half_index) { return (half_index % 2) == 0; }
  // Medial lines with a black column immediately west carry upward travel,
  // those with black east carry downward travel (black stays left of the curve).
  static Dir medial_dir(int medial_index) {
    int r = medial_index % 2;
    if (r < 0) r += 2;
    return r == 0 ? Dir::up : Dir::down;
  }
};

struct Interval {
  double lo = 0, hi = 0;
  double length() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
  bool contains_strictly(double t) const { return t > lo && t < hi; }
};

struct ColumnSpan {
  int x_index = 0;                  // half-step index; even black, odd white
  std::vector<Interval> intervals;  // disjoint, sorted, positive length
};

enum class DomainKind { primal, dual, dobrushin };
enum class PointColor { black, white };
enum class PointPosition { interior, vertical_boundary, horizontal_boundary, exterior };

struct PointClass {
  PointColor color;
  PointPosition position;
};

struct LatticePoint {
  int col = 0;  // half-step column index
  double t = 0;
};

struct PathVertex {
  int x_half = 0;  // snapped to half-steps of delta
  double t = 0;
};

// Horizontal segment of the boundary path, with the arc colour it belongs to.
struct HorizontalEdge {
  int k_lo = 0, k_hi = 0;  // half-step x-range, k_lo < k_hi
  double t = 0;
  PointColor color = PointColor::black;
  bool domain_above = false;  // interior side
};

struct VerticalEdge {
  int k = 0;
  Interval span;
  PointColor color = PointColor::black;
};

struct MedialPoint {
  int medial_index = 0;
  double t = 0;
};

struct Marks {
  MedialPoint a, b;
  Dir a_start = Dir::down;  // direction the interface leaves a
  Dir b_arrive = Dir::up;   // vertical direction it reaches the b jog
};

class SemiDiscreteDomain {
 public:
  Lattice lattice;
  DomainKind kind = DomainKind::primal;
  std::vector<PathVertex> path;  // closed, counter-clockwise, last != first
  std::map<int, ColumnSpan> columns;
  std::optional<Marks> marks;

  std::vector<HorizontalEdge> horizontal_edges;
  std::vector<VerticalEdge> vertical_edges;

  // Per column: sub-intervals where points are interior (open ends excluded
  // only as single points; stored closed for interval arithmetic).
  std::map<int, std::vector<Interval>> interior;

  PointClass classify(int col, double t) const;
  PointClass classify(const LatticePoint& z) const { return classify(z.col, z.t); }

  bool has_column(int col) const { return columns.count(col) != 0; }
  const std::vector<Interval>* column_intervals(int col) const;
  const std::vector<Interval>* interior_intervals(int col) const;
  double interior_length(int col) const;
  double total_interior_length(PointColor c) const;

  // In-domain closed intervals of a medial line.
  std::vector<Interval> medial_intervals(int medial_index) const;

  int min_col() const { return columns.empty() ? 0 : columns.begin()->first; }
  int max_col() const { return columns.empty() ? 0 : columns.rbegin()->first; }

  // Arcs of a Dobrushin boundary, split at the marks.  First = black arc
  // (clockwise from a to b), second = white arc (counter-clockwise).
  struct Arc {
    std::vector<VerticalEdge> verticals;
    std::vector<HorizontalEdge> horizontals;
  };
  std::pair<Arc, Arc> boundary_arcs() const;
};

// Builds a domain from a simple closed rectilinear path.  Vertex x snaps to
// half-steps of delta within 1e-9*delta.  For dobrushin kind the path must
// contain exactly two width-delta/2 jog segments carrying the marks.
SemiDiscreteDomain build_domain(const Lattice& lattice, DomainKind kind,
                                const std::vector<std::pair<double, double>>& path_xy,
                                std::optional<std::pair<MedialPoint, MedialPoint>> marks = {});

// Rebuilds from an existing domain's path (idempotence helper).
SemiDiscreteDomain rebuild_domain(const SemiDiscreteDomain& d);

// Axis-aligned Dobrushin test domain: black columns 0..n_black-1 (times delta),
// height [0, height], a on the left boundary at t_a, b on the right at t_b.
// The boundary jogs half a step outward at each mark as the arcs change colour.
SemiDiscreteDomain make_dobrushin_rect(double delta, int n_black, double height, double t_a,
                                       double t_b);

// Plain primal rectangle covering black columns k0..k1 (even half-indices).
SemiDiscreteDomain make_primal_rect(double delta, int k0, int k1, double t0, double t1);

// Dual rectangle: vertical boundary on white columns k0,k1 (odd half-indices).
SemiDiscreteDomain make_dual_rect(double delta, int k0, int k1, double t0, double t1);

}  // namespace semihol

#endif

#include "semihol/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace semihol {

namespace {

struct Canvas {
  std::ostringstream body;
  double x0, x1, t0, t1;
  double scale = 120;
  double pad = 30;

  double X(double x) const { return pad + (x - x0) * scale; }
  double Y(double t) const { return pad + (t1 - t) * scale; }  // t grows upward
  double W() const { return 2 * pad + (x1 - x0) * scale; }
  double H() const { return 2 * pad + (t1 - t0) * scale; }

  void line(double xa, double ta, double xb, double tb, const std::string& stroke, double w,
            const std::string& extra = "") {
    body << "<line x1='" << X(xa) << "' y1='" << Y(ta) << "' x2='" << X(xb) << "' y2='" << Y(tb)
         << "' stroke='" << stroke << "' stroke-width='" << w << "' " << extra << "/>\n";
  }
  void cross(double x, double t, const std::string& stroke) {
    double r = 0.035 * scale / 120 * 120;
    body << "<path d='M" << X(x) - r << ' ' << Y(t) - r << " L" << X(x) + r << ' ' << Y(t) + r
         << " M" << X(x) - r << ' ' << Y(t) + r << " L" << X(x) + r << ' ' << Y(t) - r
         << "' stroke='" << stroke << "' stroke-width='1.6'/>\n";
  }
  void rect(double x, double t, double w, double h, const std::string& fill) {
    body << "<rect x='" << X(x) << "' y='" << Y(t) << "' width='" << w * scale << "' height='"
         << h * scale << "' fill='" << fill << "'/>\n";
  }
  void text(double px, double py, const std::string& s) {
    body << "<text x='" << px << "' y='" << py << "' font-size='11' font-family='sans-serif'>"
         << s << "</text>\n";
  }
  std::string finish() {
    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' version='1.1' width='" << W() << "' height='"
       << H() << "'>\n<rect width='100%' height='100%' fill='white'/>\n"
       << body.str() << "</svg>\n";
    return os.str();
  }
};

std::string heat_color(double v) {
  // v in [0,1]: blue -> white -> red.
  double r, g, b;
  if (v < 0.5) {
    double s = v / 0.5;
    r = 60 + 195 * s;
    g = 90 + 165 * s;
    b = 200 + 55 * s;
  } else {
    double s = (v - 0.5) / 0.5;
    r = 255;
    g = 255 - 175 * s;
    b = 255 - 195 * s;
  }
  std::ostringstream os;
  os << "rgb(" << int(r) << ',' << int(g) << ',' << int(b) << ')';
  return os.str();
}

void draw_scale_bar(Canvas& c, double vmin, double vmax) {
  double bx = c.W() - 22, by0 = c.pad, h = c.H() - 2 * c.pad;
  for (int i = 0; i < 64; ++i) {
    double v = 1.0 - double(i) / 63.0;
    c.body << "<rect x='" << bx << "' y='" << by0 + i * h / 64 << "' width='10' height='"
           << h / 64 + 0.5 << "' fill='" << heat_color(v) << "'/>\n";
  }
  std::ostringstream hi, lo;
  hi.precision(3);
  lo.precision(3);
  hi << vmax;
  lo << vmin;
  c.text(bx - 4, by0 - 4, hi.str());
  c.text(bx - 4, by0 + h + 12, lo.str());
}

}  // namespace

std::string render_scene_svg(const SemiDiscreteDomain& dom, const Configuration* cfg,
                             const InterfaceTrace* trace) {
  Canvas c{};
  c.x0 = dom.lattice.column_x(dom.min_col()) - 0.5 * dom.lattice.delta;
  c.x1 = dom.lattice.column_x(dom.max_col()) + 0.5 * dom.lattice.delta;
  double tmin = 1e300, tmax = -1e300;
  for (const auto& [k, span] : dom.columns)
    for (const auto& iv : span.intervals) {
      tmin = std::min(tmin, iv.lo);
      tmax = std::max(tmax, iv.hi);
    }
  c.t0 = tmin - 0.2;
  c.t1 = tmax + 0.2;

  // Columns: black solid, white dashed gray.
  for (const auto& [k, span] : dom.columns) {
    double x = dom.lattice.column_x(k);
    bool black = Lattice::is_black(k);
    for (const auto& iv : span.intervals)
      c.line(x, iv.lo, x, iv.hi, black ? "black" : "gray", black ? 1.4 : 1.0,
             black ? "" : "stroke-dasharray='4 3'");
  }
  // Boundary path.
  for (size_t i = 0; i < dom.path.size(); ++i) {
    const auto& p = dom.path[i];
    const auto& q = dom.path[(i + 1) % dom.path.size()];
    c.line(dom.lattice.column_x(p.x_half), p.t, dom.lattice.column_x(q.x_half), q.t, "#335",
           0.8, "stroke-dasharray='2 2'");
  }
  // Marks.
  if (dom.marks) {
    c.body << "<circle cx='" << c.X(dom.lattice.medial_x(dom.marks->a.medial_index)) << "' cy='"
           << c.Y(dom.marks->a.t) << "' r='4' fill='#151'/>\n";
    c.body << "<circle cx='" << c.X(dom.lattice.medial_x(dom.marks->b.medial_index)) << "' cy='"
           << c.Y(dom.marks->b.t) << "' r='4' fill='#511'/>\n";
  }
  // Configuration: cuts as crosses, bridges as horizontal segments.
  if (cfg) {
    double d2 = 0.5 * dom.lattice.delta;
    for (const auto& [k, ts] : cfg->cuts)
      for (double t : ts) c.cross(dom.lattice.column_x(k), t, "#b30");
    for (const auto& [k, ts] : cfg->bridges)
      for (double t : ts)
        c.line(dom.lattice.column_x(k) - d2, t, dom.lattice.column_x(k) + d2, t, "#06c", 2.0);
  }
  // Interface and loops.
  if (trace) {
    auto draw_seg = [&](const TraceSegment& s, const char* color, double w) {
      if (s.kind == TraceSegment::Kind::vertical) {
        double x = dom.lattice.medial_x(s.medial);
        c.line(x, s.t_lo, x, s.t_hi, color, w);
      } else if (s.kind == TraceSegment::Kind::hop) {
        double x = dom.lattice.column_x(s.col);
        double q = 0.25 * dom.lattice.delta;
        c.line(x - q, s.t, x + q, s.t, color, w);
      }
    };
    for (const auto& loop : trace->loops)
      for (const auto& s : loop.segments) draw_seg(s, "#394", 1.3);
    for (const auto& s : trace->interface) draw_seg(s, "#c2203a", 1.8);
  }
  return c.finish();
}

std::string render_field_svg(const ComplexField& field) {
  Canvas c{};
  double xmin = 1e300, xmax = -1e300, tmin = 1e300, tmax = -1e300;
  double vmin = 1e300, vmax = -1e300;
  Lattice latt{field.delta};
  for (size_t i = 0; i < field.grid.size(); ++i) {
    double x = latt.column_x(field.grid[i].z.col);
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    tmin = std::min(tmin, field.grid[i].z.t);
    tmax = std::max(tmax, field.grid[i].z.t);
    double v = field.sites[i].F.mean.real();
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  if (vmax <= vmin) vmax = vmin + 1;
  c.x0 = xmin - 0.5 * field.delta;
  c.x1 = xmax + 0.9 * field.delta;
  c.t0 = tmin - 0.3;
  c.t1 = tmax + 0.3;
  double cw = 0.22 * field.delta, ch = field.grid_spacing;
  for (size_t i = 0; i < field.grid.size(); ++i) {
    double x = latt.column_x(field.grid[i].z.col);
    double v = (field.sites[i].F.mean.real() - vmin) / (vmax - vmin);
    c.rect(x - cw / 2, field.grid[i].z.t + ch / 2, cw, ch, heat_color(v));
  }
  draw_scale_bar(c, vmin, vmax);
  return c.finish();
}

std::string render_real_svg(const RealField& f, double delta, const std::string& title) {
  Canvas c{};
  double xmin = 1e300, xmax = -1e300, tmin = 1e300, tmax = -1e300, vmin = 1e300, vmax = -1e300;
  Lattice latt{delta};
  for (const auto& [col, cc] : f.cols) {
    double x = latt.column_x(col);
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    for (size_t i = 0; i < cc.vals.size(); ++i) {
      double t = f.t0 + (cc.row0 + int(i)) * f.eta;
      tmin = std::min(tmin, t);
      tmax = std::max(tmax, t);
      vmin = std::min(vmin, cc.vals[i]);
      vmax = std::max(vmax, cc.vals[i]);
    }
  }
  if (vmax <= vmin) vmax = vmin + 1;
  c.x0 = xmin - 0.5 * delta;
  c.x1 = xmax + 0.9 * delta;
  c.t0 = tmin - 0.3;
  c.t1 = tmax + 0.3;
  for (const auto& [col, cc] : f.cols) {
    double x = latt.column_x(col);
    for (size_t i = 0; i < cc.vals.size(); ++i) {
      double t = f.t0 + (cc.row0 + int(i)) * f.eta;
      double v = (cc.vals[i] - vmin) / (vmax - vmin);
      c.rect(x - 0.11 * delta, t + f.eta / 2, 0.22 * delta, f.eta, heat_color(v));
    }
  }
  draw_scale_bar(c, vmin, vmax);
  c.text(c.pad, 14, title);
  return c.finish();
}

}  // namespace semihol

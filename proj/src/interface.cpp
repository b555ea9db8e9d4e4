#include "semihol/interface.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace semihol {

namespace {

struct Run {
  int medial;
  double lo, hi;
  Dir dir;
  double entry_t() const { return dir == Dir::up ? lo : hi; }
  double exit_t() const { return dir == Dir::up ? hi : lo; }
};

struct HopLink {
  int col;
  double t;
  Dir dir;
  bool above;
  int to_run;
};

struct Builder {
  const SemiDiscreteDomain& dom;
  const Configuration& cfg;
  std::vector<Run> runs;
  // Per medial line, runs sorted by position: lookups by binary search.
  int jmin = 0, jmax = 0;
  std::vector<std::vector<int>> medial_runs;  // run ids in ascending t order
  std::vector<HopLink> next_of;               // per run; to_run < 0 when absent

  explicit Builder(const SemiDiscreteDomain& d, const Configuration& c) : dom(d), cfg(c) {}

  std::vector<std::vector<double>> column_events() const {
    int kmin = dom.min_col(), kmax = dom.max_col();
    std::vector<std::vector<double>> ev(kmax - kmin + 1);
    auto add = [&](int col, double t) {
      if (col >= kmin && col <= kmax) ev[col - kmin].push_back(t);
    };
    for (const auto& [k, v] : cfg.cuts)
      for (double t : v) add(k, t);
    for (const auto& [k, v] : cfg.bridges)
      for (double t : v) add(k, t);
    for (const auto& he : dom.horizontal_edges) {
      for (int k = he.k_lo + 1; k < he.k_hi; ++k) {
        bool col_black = Lattice::is_black(k);
        bool edge_black = he.color == PointColor::black;
        if (col_black != edge_black) add(k, he.t);  // opposite colour: a crossing
      }
    }
    for (size_t c = 0; c < ev.size(); ++c) {
      auto& v = ev[c];
      std::sort(v.begin(), v.end());
      for (size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i] == v[i + 1]) {
          std::ostringstream os;
          os << "coincident events at column " << int(c) + kmin << " t=" << v[i];
          throw Error(ErrorCode::TieBreak, os.str());
        }
    }
    return ev;
  }

  // Run on medial j whose top (or bottom) sits exactly at t; -1 when absent.
  int run_at(int j, double t, bool top) const {
    if (j < jmin || j > jmax) return -1;
    const auto& v = medial_runs[j - jmin];
    // Binary search on the requested end.
    int lo = 0, hi = int(v.size()) - 1;
    while (lo <= hi) {
      int mid = (lo + hi) / 2;
      double key = top ? runs[v[mid]].hi : runs[v[mid]].lo;
      if (key == t) return v[mid];
      if (key < t)
        lo = mid + 1;
      else
        hi = mid - 1;
    }
    return -1;
  }

  void build_runs() {
    auto events = column_events();
    int kmin = dom.min_col(), kmax = dom.max_col();
    jmin = kmin - 1;
    jmax = kmax;
    medial_runs.assign(jmax - jmin + 1, {});
    std::vector<double> splitters;
    for (int j = jmin; j <= jmax; ++j) {
      auto intervals = dom.medial_intervals(j);
      if (intervals.empty()) continue;
      Dir dir = Lattice::medial_dir(j);
      splitters.clear();
      for (int k : {j, j + 1}) {
        if (k < kmin || k > kmax) continue;
        const auto& v = events[k - kmin];
        splitters.insert(splitters.end(), v.begin(), v.end());
      }
      std::sort(splitters.begin(), splitters.end());
      for (size_t i = 0; i + 1 < splitters.size(); ++i)
        if (splitters[i] == splitters[i + 1])
          throw Error(ErrorCode::TieBreak, "coincident events on adjacent columns");
      auto& mine = medial_runs[j - jmin];
      for (const auto& iv : intervals) {
        double lo = iv.lo;
        auto it = std::upper_bound(splitters.begin(), splitters.end(), iv.lo);
        for (; it != splitters.end() && *it < iv.hi; ++it) {
          mine.push_back(int(runs.size()));
          runs.push_back(Run{j, lo, *it, dir});
          lo = *it;
        }
        if (iv.hi <= lo) throw Error(ErrorCode::TieBreak, "zero-length medial run");
        mine.push_back(int(runs.size()));
        runs.push_back(Run{j, lo, iv.hi, dir});
      }
    }

    // Each event connects the two flanking medial lines.  The passage below
    // the event joins the runs whose tops meet it; the passage above joins the
    // runs whose bottoms meet it.
    next_of.assign(runs.size(), HopLink{0, 0, Dir::right, false, -1});
    for (int k = kmin; k <= kmax; ++k) {
      int jw = k - 1, je = k;
      int ju = Lattice::medial_dir(jw) == Dir::up ? jw : je;
      int jd = ju == jw ? je : jw;
      for (double t : events[k - kmin]) {
        int iu = run_at(ju, t, true);
        int id_ = run_at(jd, t, true);
        if (iu >= 0 && id_ >= 0) {
          Dir hd = (jd > ju) ? Dir::right : Dir::left;
          next_of[iu] = HopLink{k, t, hd, false, id_};
        }
        int bd = run_at(jd, t, false);
        int bu = run_at(ju, t, false);
        if (bd >= 0 && bu >= 0) {
          Dir hd = (ju > jd) ? Dir::right : Dir::left;
          next_of[bd] = HopLink{k, t, hd, true, bu};
        }
      }
    }
  }
};

TraceSegment run_segment(const Run& r) {
  TraceSegment s;
  s.kind = TraceSegment::Kind::vertical;
  s.medial = r.medial;
  s.t_lo = r.lo;
  s.t_hi = r.hi;
  s.dir = r.dir;
  return s;
}

TraceSegment hop_segment(const HopLink& h) {
  TraceSegment s;
  s.kind = TraceSegment::Kind::hop;
  s.col = h.col;
  s.t = h.t;
  s.t_lo = s.t_hi = h.t;
  s.dir = h.dir;
  s.above = h.above;
  return s;
}

}  // namespace

InterfaceTrace trace_arrangement(const SemiDiscreteDomain& dom, const Configuration& cfg) {
  if (dom.kind != DomainKind::dobrushin || !dom.marks)
    throw Error(ErrorCode::NotDobrushin, "tracing needs a dobrushin domain");
  Builder b(dom, cfg);
  b.build_runs();
  const Marks& m = *dom.marks;

  auto find_run = [&](const MedialPoint& p, bool entry) -> int {
    Dir d = Lattice::medial_dir(p.medial_index);
    bool at_bottom = entry ? (d == Dir::up) : (d == Dir::down);
    int r = b.run_at(p.medial_index, p.t, !at_bottom);
    if (r < 0) throw Error(ErrorCode::InvalidMarks, "mark is not on the medial curve");
    return r;
  };
  int start = find_run(m.a, true);
  int goal = find_run(m.b, false);

  InterfaceTrace tr;
  std::vector<char> used(b.runs.size(), 0);
  int cur = start;
  while (true) {
    used[cur] = 1;
    tr.interface.push_back(run_segment(b.runs[cur]));
    if (cur == goal) break;
    const HopLink& h = b.next_of[cur];
    if (h.to_run < 0) throw Error(ErrorCode::InvalidConfig, "interface ended away from b");
    tr.turn_after.push_back(quarter_turn(b.runs[cur].dir, h.dir));
    tr.interface.push_back(hop_segment(h));
    tr.turn_after.push_back(quarter_turn(h.dir, b.runs[h.to_run].dir));
    cur = h.to_run;
  }
  // Final quarter-step; the interface leaves pointing right into b.
  tr.turn_after.push_back(quarter_turn(b.runs[goal].dir, Dir::right));
  TraceSegment exit;
  exit.kind = TraceSegment::Kind::exit;
  exit.medial = m.b.medial_index;
  exit.t_lo = exit.t_hi = exit.t = m.b.t;
  exit.dir = Dir::right;
  tr.interface.push_back(exit);
  tr.turn_after.push_back(0);

  tr.suffix_turn.assign(tr.interface.size() + 1, 0);
  for (int i = int(tr.interface.size()) - 1; i >= 0; --i)
    tr.suffix_turn[i] = tr.suffix_turn[i + 1] + tr.turn_after[i];

  // Remaining runs close up into loops.
  for (size_t i = 0; i < b.runs.size(); ++i) {
    if (used[i]) continue;
    InterfaceTrace::Loop loop;
    int r = int(i);
    while (!used[r]) {
      used[r] = 1;
      loop.segments.push_back(run_segment(b.runs[r]));
      const HopLink& h = b.next_of[r];
      if (h.to_run < 0)
        throw Error(ErrorCode::InvalidConfig, "open curve in the loop arrangement");
      loop.total_quarters += quarter_turn(b.runs[r].dir, h.dir);
      loop.segments.push_back(hop_segment(h));
      loop.total_quarters += quarter_turn(h.dir, b.runs[h.to_run].dir);
      r = h.to_run;
    }
    if (r != int(i))
      throw Error(ErrorCode::InvalidConfig, "loop arrangement failed to close");
    tr.loops.push_back(std::move(loop));
  }
  return tr;
}

PassRecord passes_at(const InterfaceTrace& trace, const LatticePoint& z) {
  PassRecord rec;
  rec.z = z;
  for (size_t i = 0; i < trace.interface.size(); ++i) {
    const TraceSegment& s = trace.interface[i];
    bool hit = false;
    if (s.kind == TraceSegment::Kind::vertical) {
      hit = (s.medial == z.col - 1 || s.medial == z.col) && z.t > s.t_lo && z.t < s.t_hi;
    } else if (s.kind == TraceSegment::Kind::hop) {
      hit = s.col == z.col && s.t == z.t;
    }
    if (hit) {
      Pass p;
      p.dir = s.dir;
      p.segment_index = int(i);
      p.winding_quarters = trace.suffix_turn[i];
      rec.passes.push_back(p);
    }
  }
  return rec;
}

double winding_to_exit(const InterfaceTrace& trace, const Pass& pass) {
  if (pass.segment_index < 0 || pass.segment_index >= int(trace.interface.size()))
    throw Error(ErrorCode::ForeignPass, "pass does not belong to this trace");
  return double(pass.winding_quarters) * kPi / 2.0;
}

}  // namespace semihol

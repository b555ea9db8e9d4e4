#ifndef SEMIHOL_INTERFACE_HPP
#define SEMIHOL_INTERFACE_HPP

#include <vector>

#include "semihol/configuration.hpp"
#include "semihol/geometry.hpp"

namespace semihol {

// One piece of the medial curve system.
//  vertical: a run along medial line `medial` over [t_lo, t_hi], travelled in `dir`.
//  hop:      a horizontal crossing of column `col` at level `t`, travelled in `dir`;
//            `above` tells whether the passage squeezes just above the event point.
//  exit:     the final quarter-step into b, always pointing right.
struct TraceSegment {
  enum class Kind { vertical, hop, exit } kind = Kind::vertical;
  int medial = 0;  // vertical/exit: medial line index
  int col = 0;     // hop: column crossed
  double t_lo = 0, t_hi = 0;
  double t = 0;  // hop level
  Dir dir = Dir::up;
  bool above = false;
};

struct Pass {
  Dir dir;
  long winding_quarters = 0;  // signed quarter turns from this pass to the exit
  int segment_index = -1;     // position along the interface (traversal order)
};

struct PassRecord {
  LatticePoint z;
  std::vector<Pass> passes;
  const Pass* first(Dir d) const {
    for (const auto& p : passes)
      if (p.dir == d) return &p;
    return nullptr;
  }
};

struct InterfaceTrace {
  std::vector<TraceSegment> interface;  // from a to b, ending with the exit stub
  std::vector<int> turn_after;          // quarter turn between segment i and i+1
  std::vector<long> suffix_turn;        // sum of turn_after[j], j >= i

  struct Loop {
    std::vector<TraceSegment> segments;
    int total_quarters = 0;  // +4 around black, -4 around white
  };
  std::vector<Loop> loops;

  int loop_count() const { return int(loops.size()); }
  long total_turn_quarters() const { return suffix_turn.empty() ? 0 : suffix_turn.front(); }
};

// Traces the interface from a to b plus the loops around interior components.
// The curve travels on medial lines between events and crosses columns at
// cuts, bridges, and opposite-colour boundary segments, with black always on
// its left.  Throws TieBreak on coincident event times.
InterfaceTrace trace_arrangement(const SemiDiscreteDomain& dom, const Configuration& cfg);

// Interface passes at a black or white point: vertical passes on the two
// adjacent medial lines, horizontal passes at hops crossing z exactly.
PassRecord passes_at(const InterfaceTrace& trace, const LatticePoint& z);

double winding_to_exit(const InterfaceTrace& trace, const Pass& pass);

// exp(i sigma W) factor of a pass, from the exact quarter-turn winding.
inline Complex pass_phase(const Pass& p, double sigma) {
  return sigma_phase(sigma, p.winding_quarters);
}

}  // namespace semihol

#endif

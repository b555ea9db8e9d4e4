#ifndef SEMIHOL_CONFIGURATION_HPP
#define SEMIHOL_CONFIGURATION_HPP

#include <map>
#include <vector>

#include "semihol/geometry.hpp"
#include "semihol/rng.hpp"

namespace semihol {

enum class TimeTopology { interval, periodic };

// Finite point configuration: cuts on black columns, bridges on white columns,
// strictly increasing times per column, all points interior.
struct Configuration {
  std::map<int, std::vector<double>> cuts;     // black column index -> times
  std::map<int, std::vector<double>> bridges;  // white column index -> times
  TimeTopology topology = TimeTopology::interval;
  double beta = 0.0;  // period, used when topology == periodic

  std::size_t cut_count() const;
  std::size_t bridge_count() const;
  std::size_t size() const { return cut_count() + bridge_count(); }
  bool contains(int col, double t) const;
  const std::vector<double>* column_points(int col) const;
};

bool operator==(const Configuration& a, const Configuration& b);

enum class BoundaryMode { free, dobrushin_wired, periodic };

struct ComponentCount {
  int k_black = 0;
  int k_white = 0;
  int loops = 0;  // k_black + k_white - 2
};

// Poisson configuration on the interior of the domain, sorted per column.
Configuration sample_poisson(const SemiDiscreteDomain& dom, double rate_black, double rate_white,
                             SplitMix64& rng);

// Periodic-strip variant: every column carries a full circle of length beta.
Configuration sample_poisson_periodic(const SemiDiscreteDomain& dom, double rate_black,
                                      double rate_white, double beta, SplitMix64& rng);

// Swap cuts and bridges; the result lives on the half-step-shifted lattice
// where column parities are reversed.  Requires no cuts on the outermost black
// columns of the domain.
Configuration dual_configuration(const SemiDiscreteDomain& dom, const Configuration& cfg);

ComponentCount count_components(const SemiDiscreteDomain& dom, const Configuration& cfg,
                                BoundaryMode mode);

// Insert z if absent, remove it if present.  z must be an interior point.
Configuration toggle(const SemiDiscreteDomain& dom, const Configuration& cfg,
                     const LatticePoint& z);

// Weighted union-find over integer nodes.
class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), size_(n, 1), count_(n) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  int find(int x) {
    int root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      int nx = parent_[x];
      parent_[x] = root;
      x = nx;
    }
    return root;
  }
  void unite(int a, int b) {
    int ra = find(a), rb = find(b);
    if (ra == rb) return;
    if (size_[ra] < size_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    size_[ra] += size_[rb];
    --count_;
  }
  bool connected(int a, int b) { return find(a) == find(b); }
  int count() const { return count_; }

 private:
  std::vector<int> parent_, size_;
  int count_;
};

}  // namespace semihol

#endif

// Benchmark: serial vs OpenMP-parallel chain execution, plus tracer and
// component-count kernel throughput.

#include <chrono>
#include <cstdio>

#include "semihol/fk_observable.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace semihol;
namespace chrono = std::chrono;

namespace {

double seconds_since(chrono::steady_clock::time_point t0) {
  return chrono::duration<double>(chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int n_samples = argc > 1 ? atoi(argv[1]) : 400;
  auto dom = make_dobrushin_rect(1.0, 4, 2.0, 1.0, 1.0);
  auto w = make_weight_spec(2.0, 1.0);

  // Kernel throughput.
  {
    SplitMix64 rng(7);
    auto cfg = sample_poisson(dom, w.base_rate, w.base_rate, rng);
    const int reps = 20000;
    auto t0 = chrono::steady_clock::now();
    long acc = 0;
    for (int i = 0; i < reps; ++i)
      acc += count_components(dom, cfg, BoundaryMode::dobrushin_wired).loops;
    double tc = seconds_since(t0);
    t0 = chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) acc += trace_arrangement(dom, cfg).loop_count();
    double tt = seconds_since(t0);
    printf("component count: %.2f us/call   trace: %.2f us/call   (checksum %ld)\n",
           1e6 * tc / reps, 1e6 * tt / reps, acc);
  }

  ChainParams p;
  p.seed = 99;
  p.n_chains = 8;
  p.n_samples = n_samples;
  p.burn_in = 100;
  p.thinning = 3;
  FieldOptions fo;
  fo.grid_spacing = 0.25;
  fo.boundary_margin = 0.2;

  fo.parallel = false;
  auto t0 = chrono::steady_clock::now();
  auto serial = fk_field(dom, p, fo);
  double ts = seconds_since(t0);

  fo.parallel = true;
  t0 = chrono::steady_clock::now();
  auto parallel = fk_field(dom, p, fo);
  double tp = seconds_since(t0);

  bool identical = serial.grid.size() == parallel.grid.size();
  for (size_t i = 0; identical && i < serial.sites.size(); ++i)
    identical = serial.sites[i].F.mean == parallel.sites[i].F.mean;

#ifdef _OPENMP
  int threads = omp_get_max_threads();
#else
  int threads = 1;
#endif
  printf("field estimation, %d chains x %d samples: serial %.2f s, parallel %.2f s "
         "(%d threads, speedup %.2fx), results %s\n",
         p.n_chains, p.n_samples, ts, tp, threads, ts / tp,
         identical ? "identical" : "DIFFER");
  return identical ? 0 : 1;
}

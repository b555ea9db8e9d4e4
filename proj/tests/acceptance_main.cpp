// Acceptance suite: one line per criterion, nonzero exit on any failure.
// SEMIHOL_ACCEPT_SCALE (default 1.0) multiplies the Monte Carlo sample counts.

#include <cstdio>
#include <cstdlib>

#include "semihol/verify.hpp"

int main(int argc, char** argv) {
  semihol::VerifyOptions o;
  o.seed = 20260809;
  if (const char* s = std::getenv("SEMIHOL_ACCEPT_SCALE")) o.scale = atof(s);
  if (argc > 1) o.scale = atof(argv[1]);

  static const char* criteria[] = {
      "1 pathwise turn identities",
      "2 loop-count cross-check and Euler relation",
      "3 statistical s-holomorphicity on the reference rectangle",
      "4 H construction on manufactured exact fields",
      "5 representation estimates vs exact diagonalization",
      "6 spin observable: exit value, winding cases, boundary phase",
      "7 Kramers-Wannier free-energy offset",
      "8 hand-encoded figure configurations",
      "9 mesh-halving trends",
  };

  using Suite = semihol::CriterionResult (*)(const semihol::VerifyOptions&);
  static const Suite suites[] = {
      semihol::verify_pathwise, semihol::verify_loops,   semihol::verify_sholo_mc,
      semihol::verify_hfield,   semihol::verify_oracle,  semihol::verify_spin,
      semihol::verify_kw,       semihol::verify_figures, semihol::verify_scaling,
  };
  bool all = true;
  double total = 0;
  for (size_t i = 0; i < 9; ++i) {
    auto r = suites[i](o);
    all = all && r.pass;
    total += r.runtime_s;
    std::printf("[%s] criterion %s — %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", criteria[i],
                r.summary.c_str(), r.runtime_s);
    std::fflush(stdout);
  }
  std::printf("%s — 9 criteria, %.1f s total\n", all ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              total);
  return all ? 0 : 1;
}

#ifndef SEMIHOL_VERIFY_HPP
#define SEMIHOL_VERIFY_HPP

#include <string>
#include <vector>

#include "json.hpp"

namespace semihol {

struct VerifyOptions {
  std::uint64_t seed = 2026;
  double scale = 1.0;            // multiplies sample counts (CI vs full runs)
  bool parallel = true;
  bool inject_winding_bug = false;  // test hook: flips hop-pass windings
};

struct CriterionResult {
  std::string name;
  bool pass = false;
  double runtime_s = 0;
  std::string summary;
  nlohmann::json details;
};

CriterionResult verify_pathwise(const VerifyOptions& o);     // exact turn identities
CriterionResult verify_loops(const VerifyOptions& o);        // loop counts + Euler relation
CriterionResult verify_sholo_mc(const VerifyOptions& o);     // statistical s-holomorphicity
CriterionResult verify_hfield(const VerifyOptions& o);       // H construction on exact fields
CriterionResult verify_oracle(const VerifyOptions& o);       // representation agreement
CriterionResult verify_spin(const VerifyOptions& o);         // spin observable checks
CriterionResult verify_kw(const VerifyOptions& o);           // duality free-energy identity
CriterionResult verify_figures(const VerifyOptions& o);      // hand-encoded counts
CriterionResult verify_scaling(const VerifyOptions& o);      // mesh-halving trends

// All suites, or the named subset.
std::vector<CriterionResult> verify_all(const VerifyOptions& o,
                                        const std::vector<std::string>& subset = {});

}  // namespace semihol

#endif

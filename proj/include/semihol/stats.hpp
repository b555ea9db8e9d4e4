#ifndef SEMIHOL_STATS_HPP
#define SEMIHOL_STATS_HPP

#include <vector>

#include "semihol/common.hpp"

namespace semihol {

struct WeightedEstimate {
  Complex mean{0, 0};
  Complex std_error{0, 0};  // componentwise
  double n_effective = 0;

  // z-score of the difference to a reference value, using the larger of the
  // per-component errors of this estimate combined with a reference error.
  double z_against(Complex ref, Complex ref_se = {0, 0}) const;
};

// Mean and standard error of independent replicates (chain or batch means).
WeightedEstimate combine_means(const std::vector<Complex>& replicate_means);

// Batch-means estimate from a single correlated stream.  Throws TooFewSamples
// when fewer than 10 batches can be formed.
WeightedEstimate batch_means(const std::vector<Complex>& stream, int target_batches = 20);

// Self-normalized importance-sampling ratio with a delta-method error.
WeightedEstimate ratio_estimate(const std::vector<Complex>& values,
                                const std::vector<double>& weights);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

// Chi-squared upper tail probability with k degrees of freedom.
double chi2_sf(double stat, int dof);

// Pearson statistic for observed counts vs expected probabilities; bins with
// expected count below min_expected are pooled into the tail.
struct Chi2Result {
  double stat = 0;
  int dof = 0;
  double p_value = 1;
};
Chi2Result chi2_gof(const std::vector<long>& observed, const std::vector<double>& expected_probs,
                    long n_total, double min_expected = 5.0);

}  // namespace semihol

#endif

#include "semihol/stats.hpp"

#include <algorithm>
#include <cmath>

namespace semihol {

double WeightedEstimate::z_against(Complex ref, Complex ref_se) const {
  double se_re = std::hypot(std_error.real(), ref_se.real());
  double se_im = std::hypot(std_error.imag(), ref_se.imag());
  double zr = se_re > 0 ? std::abs(mean.real() - ref.real()) / se_re
                        : (mean.real() == ref.real() ? 0.0 : INFINITY);
  double zi = se_im > 0 ? std::abs(mean.imag() - ref.imag()) / se_im
                        : (mean.imag() == ref.imag() ? 0.0 : INFINITY);
  // Exact agreement in a component with zero spread is a pass, not a 0/0.
  if (se_re == 0 && std::abs(mean.real() - ref.real()) < 1e-12) zr = 0;
  if (se_im == 0 && std::abs(mean.imag() - ref.imag()) < 1e-12) zi = 0;
  return std::max(zr, zi);
}

WeightedEstimate combine_means(const std::vector<Complex>& ms) {
  WeightedEstimate e;
  std::size_t k = ms.size();
  if (k == 0) throw Error(ErrorCode::TooFewSamples, "no replicates");
  Complex sum{0, 0};
  for (const auto& m : ms) sum += m;
  e.mean = sum / double(k);
  if (k == 1) {
    e.std_error = {0, 0};
    e.n_effective = 1;
    return e;
  }
  double vr = 0, vi = 0;
  for (const auto& m : ms) {
    vr += (m.real() - e.mean.real()) * (m.real() - e.mean.real());
    vi += (m.imag() - e.mean.imag()) * (m.imag() - e.mean.imag());
  }
  vr /= double(k - 1);
  vi /= double(k - 1);
  e.std_error = {std::sqrt(vr / double(k)), std::sqrt(vi / double(k))};
  e.n_effective = double(k);
  return e;
}

WeightedEstimate batch_means(const std::vector<Complex>& stream, int target_batches) {
  std::size_t n = stream.size();
  if (n < 10) throw Error(ErrorCode::TooFewSamples, "need at least 10 samples");
  int b = std::min<std::size_t>(target_batches, n);
  std::size_t per = n / b;
  if (b < 10) throw Error(ErrorCode::TooFewSamples, "fewer than 10 batches");
  std::vector<Complex> means;
  for (int i = 0; i < b; ++i) {
    Complex s{0, 0};
    for (std::size_t j = i * per; j < (i + 1) * per; ++j) s += stream[j];
    means.push_back(s / double(per));
  }
  return combine_means(means);
}

WeightedEstimate ratio_estimate(const std::vector<Complex>& values,
                                const std::vector<double>& weights) {
  if (values.size() != weights.size() || values.empty())
    throw Error(ErrorCode::TooFewSamples, "empty or mismatched sample set");
  double wsum = 0;
  Complex num{0, 0};
  for (std::size_t i = 0; i < values.size(); ++i) {
    wsum += weights[i];
    num += weights[i] * values[i];
  }
  if (wsum <= 0) throw Error(ErrorCode::ZeroWeightSum, "weights sum to zero");
  WeightedEstimate e;
  e.mean = num / wsum;
  double vr = 0, vi = 0, w2 = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    Complex d = values[i] - e.mean;
    vr += weights[i] * weights[i] * d.real() * d.real();
    vi += weights[i] * weights[i] * d.imag() * d.imag();
    w2 += weights[i] * weights[i];
  }
  e.std_error = {std::sqrt(vr) / wsum, std::sqrt(vi) / wsum};
  e.n_effective = w2 > 0 ? wsum * wsum / w2 : 0.0;
  return e;
}

namespace {

double gamma_p_series(double a, double x) {
  double ap = a, sum = 1.0 / a, del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a, c = 1e308, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
  if (x < 0 || a <= 0) return 0;
  if (x == 0) return 0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double chi2_sf(double stat, int dof) {
  if (dof <= 0) return 1.0;
  return 1.0 - gamma_p(0.5 * dof, 0.5 * stat);
}

Chi2Result chi2_gof(const std::vector<long>& observed, const std::vector<double>& expected_probs,
                    long n_total, double min_expected) {
  // Pool the tail so every bin has a workable expected count.
  std::vector<double> exp_counts;
  std::vector<long> obs_counts;
  double acc_e = 0;
  long acc_o = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    acc_e += expected_probs[i] * double(n_total);
    acc_o += observed[i];
    if (acc_e >= min_expected) {
      exp_counts.push_back(acc_e);
      obs_counts.push_back(acc_o);
      acc_e = 0;
      acc_o = 0;
    }
  }
  if (acc_e > 0 && !exp_counts.empty()) {
    exp_counts.back() += acc_e;
    obs_counts.back() += acc_o;
  }
  Chi2Result r;
  if (exp_counts.size() < 2) return r;
  for (std::size_t i = 0; i < exp_counts.size(); ++i) {
    double d = double(obs_counts[i]) - exp_counts[i];
    r.stat += d * d / exp_counts[i];
  }
  r.dof = int(exp_counts.size()) - 1;
  r.p_value = chi2_sf(r.stat, r.dof);
  return r;
}

}  // namespace semihol

#include "doctest.h"
#include "semihol/oracle.hpp"

using namespace semihol;

namespace {

// Independent route: tr(exp(beta M)) by scaling-and-squaring Taylor series.
#include <vector>
double taylor_trace_exp(int n_sites, double coupling, double field, double beta) {
  int dim = 1 << n_sites;
  auto sz = [&](int st, int x) { return (st >> (x - 1)) & 1 ? -1.0 : 1.0; };
  std::vector<double> m(dim * dim, 0.0);
  for (int st = 0; st < dim; ++st) {
    double diag = 0;
    for (int x = 1; x < n_sites; ++x) diag += coupling * sz(st, x) * sz(st, x + 1);
    m[st * dim + st] += beta * diag;
    for (int x = 1; x <= n_sites; ++x) m[(st ^ (1 << (x - 1))) * dim + st] += beta * field;
  }
  int scale = 10;
  double f = 1.0 / double(1 << scale);
  for (auto& v : m) v *= f;
  // exp(A) by Taylor.
  std::vector<double> acc(dim * dim, 0.0), term(dim * dim, 0.0), tmp(dim * dim);
  for (int i = 0; i < dim; ++i) acc[i * dim + i] = term[i * dim + i] = 1.0;
  for (int k = 1; k <= 24; ++k) {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double s = 0;
        for (int l = 0; l < dim; ++l) s += term[i * dim + l] * m[l * dim + j];
        tmp[i * dim + j] = s / k;
      }
    term = tmp;
    for (int i = 0; i < dim * dim; ++i) acc[i] += term[i];
  }
  for (int s = 0; s < scale; ++s) {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double v = 0;
        for (int l = 0; l < dim; ++l) v += acc[i * dim + l] * acc[l * dim + j];
        tmp[i * dim + j] = v;
      }
    acc = tmp;
  }
  double tr = 0;
  for (int i = 0; i < dim; ++i) tr += acc[i * dim + i];
  return tr;
}

}  // namespace

TEST_CASE("single site partition function") {
  QuantumSpec s{1, 0.5, 0.7, 1.3};
  CHECK(partition_function(s) == doctest::Approx(2.0 * std::cosh(1.3 * 0.7)));
}

TEST_CASE("small beta limit approaches the dimension") {
  QuantumSpec s{3, 0.5, 0.5, 1e-6};
  CHECK(std::abs(partition_function(s) - 8.0) < 1e-4);
}

TEST_CASE("eigendecomposition agrees with a series evaluation") {
  for (int n : {2, 3}) {
    QuantumSpec s{n, 0.5, 0.5, 1.0};
    double z1 = partition_function(s);
    double z2 = taylor_trace_exp(n, 0.5, 0.5, 1.0);
    CHECK(z1 == doctest::Approx(z2).epsilon(1e-10));
  }
}

TEST_CASE("two point basics") {
  QuantumSpec s{2, 0.5, 0.5, 1.0};
  CHECK(two_point(s, 1, 1) == doctest::Approx(1.0));
  CHECK(two_point(s, 1, 2) == doctest::Approx(two_point(s, 2, 1)));
  CHECK_THROWS_AS(two_point(s, 0, 1), Error);
  // Near-classical limit: correlation approaches tanh(beta J).
  QuantumSpec cl{2, 0.5, 1e-8, 1.0};
  CHECK(two_point(cl, 1, 2) == doctest::Approx(std::tanh(0.5)).epsilon(1e-6));
}

TEST_CASE("representations agree with the exact oracle") {
  QuantumSpec s{2, 0.5, 0.5, 1.0};
  auto rep = compare_representations(s, 1, 2, 60000, 99, 6);
  CHECK(rep.z_fk < 3.5);
  CHECK(rep.z_rpr < 3.5);
  CHECK(rep.z_stim < 3.5);
  CHECK(rep.zz_fk < 3.5);
  CHECK(rep.zz_rpr < 3.5);
  CHECK(rep.zz_stim < 3.5);
  // Identical sites give exactly one in every representation.
  auto eq = compare_representations(s, 2, 2, 2000, 3, 2);
  CHECK(eq.fk_corr.mean == Complex{1, 0});
  CHECK(eq.rpr_corr.mean == Complex{1, 0});
  CHECK(eq.stim_corr.mean == Complex{1, 0});
}

TEST_CASE("kw identity at asymmetric couplings") {
  auto r = kw_identity_check(3, 1.0, 0.7, 0.4, 60000, 13, 6);
  CHECK(r.z_score < 3.5);
}

#include "doctest.h"
#include "semihol/rng.hpp"
#include "semihol/sholo.hpp"

using namespace semihol;

namespace {

// Sample an analytic function of z = x + i t on a column range.
SampledFunction sample_function(int col0, int col1, double t0, double t1, double eta, double delta,
                                Complex (*f)(Complex)) {
  SampledFunction F;
  F.t0 = t0;
  F.eta = eta;
  int rows = int(std::llround((t1 - t0) / eta)) + 1;
  for (int c = col0; c <= col1; ++c) {
    auto& col = F.cols[c];
    col.row0 = 0;
    for (int r = 0; r < rows; ++r) {
      double x = 0.5 * delta * c;
      col.vals.push_back(f(Complex(x, t0 + r * eta)));
    }
  }
  return F;
}

}  // namespace

TEST_CASE("projection identities") {
  Complex eup = std::polar(1.0, -kPi / 4);
  CHECK(std::abs(proj(eup, eup) - eup) < 1e-15);
  CHECK(std::abs(proj(Complex(1, 1), eup)) < 1e-15);  // 1+i is orthogonal to it
  Complex p = proj(Complex(1, 0), eup);
  CHECK(p.real() == doctest::Approx(0.5));
  CHECK(p.imag() == doctest::Approx(-0.5));
  // Idempotent and an orthogonal decomposition.
  SplitMix64 rng(6);
  for (int i = 0; i < 100; ++i) {
    Complex z(uniform_in(rng, -2, 2), uniform_in(rng, -2, 2));
    CHECK(std::abs(proj_up(proj_up(z)) - proj_up(z)) < 1e-15);
    CHECK(std::abs(proj_up(z) + proj_down(z) - z) < 1e-15);
  }
  CHECK_THROWS_AS(proj(Complex(1, 0), Complex(2, 0)), Error);
}

TEST_CASE("constant functions are exactly s-holomorphic") {
  auto F = sample_function(0, 4, 0, 1, 1.0 / 16, 1.0, +[](Complex) { return Complex(0.3, -1.1); });
  auto rep = check_sholo(F, 1.0);
  CHECK(rep.max_res < 1e-13);
  auto pre = check_prehol(F, 1.0);
  CHECK(pre.max_res < 1e-13);
}

TEST_CASE("the identity function separates the two notions") {
  double delta = 1.0;
  auto F = sample_function(0, 4, 0, 1, 1.0 / 16, delta, +[](Complex z) { return z; });
  auto pre = check_prehol(F, delta);
  CHECK(pre.max_res < 1e-12);
  auto rep = check_sholo(F, delta);
  CHECK(rep.max_pair_res == doctest::Approx(delta / (2 * std::sqrt(2.0))));
}

TEST_CASE("conjugation violates preholomorphicity by 2") {
  auto F = sample_function(0, 4, 0, 1, 1.0 / 16, 1.0, +[](Complex z) { return std::conj(z); });
  auto pre = check_prehol(F, 1.0);
  CHECK(pre.max_res == doctest::Approx(2.0));
}

TEST_CASE("manufactured solutions are s-holomorphic") {
  SUBCASE("zero data stays zero") {
    std::vector<Complex> init(4, Complex{0, 0});
    auto F = exact_sholo(0, 4, 0.0, 1.0, 1.0 / 32, 1.0, init, 1e-10);
    for (const auto& [c, col] : F.cols)
      for (const auto& v : col.vals) CHECK(std::abs(v) == 0.0);
  }
  SUBCASE("constant data stays constant") {
    std::vector<Complex> init(4, Complex{0.4, 0.4});
    auto F = exact_sholo(0, 4, 0.0, 1.0, 1.0 / 32, 1.0, init, 1e-10);
    for (const auto& [c, col] : F.cols)
      for (const auto& v : col.vals) CHECK(std::abs(v - Complex(0.4, 0.4)) < 1e-12);
    auto rep = check_sholo(F, 1.0);
    CHECK(rep.max_res < 1e-10);
  }
  SUBCASE("random data on four columns") {
    SplitMix64 rng(21);
    std::vector<Complex> init;
    for (int c = 0; c < 4; ++c)
      init.push_back(Complex(uniform_in(rng, -1, 1), uniform_in(rng, -1, 1)));
    // Make the initial data satisfy the projection equalities: share the
    // medial coefficients by projecting through the pair structure.
    for (int c = 0; c + 1 < 4; ++c) {
      bool black = Lattice::is_black(c);
      if (black)
        init[c + 1] = proj_up(init[c]) + proj_down(init[c + 1]);
      else
        init[c + 1] = proj_down(init[c]) + proj_up(init[c + 1]);
    }
    auto F = exact_sholo(0, 4, 0.0, 1.0, 1.0 / 64, 1.0, init, 1e-10);
    auto rep = check_sholo(F, 1.0);
    CHECK(rep.max_res < 1e-8);
    auto pre = check_prehol(F, 1.0);
    CHECK(pre.max_res <= 2.0 * rep.max_res + 1e-12);
  }
}

TEST_CASE("inconsistent initial data is rejected") {
  std::vector<Complex> init = {Complex(1, 0), Complex(0, 1), Complex(1, 1), Complex(-1, 0)};
  CHECK_THROWS_AS(exact_sholo(0, 4, 0.0, 1.0, 1.0 / 8, 1.0, init, 1e-10), Error);
}

TEST_CASE("H of a line-valued constant is a staircase") {
  // F = c with c on the up line: the down projection vanishes, so vertical
  // increments vanish, white->black steps are -|c|^2 and black->white 0...
  Complex c = 0.7 * std::polar(1.0, -kPi / 4);
  auto F = sample_function(0, 4, 0, 1, 1.0 / 16, 1.0, +[](Complex) { return Complex(); });
  for (auto& [k, col] : F.cols)
    for (auto& v : col.vals) v = c;
  auto H = build_H(F, 1.0);
  CHECK(H.max_contour_residual < 1e-14);
  // Vertical increments vanish.
  for (const auto& [k, col] : H.h.cols)
    for (size_t i = 1; i < col.vals.size(); ++i)
      CHECK(std::abs(col.vals[i] - col.vals[i - 1]) < 1e-14);
  // Steps: black->white -|c|^2, white->black 0.
  double c2 = std::norm(c);
  for (int k = 0; k < 4; ++k) {
    double step = *H.h.value(k + 1, 0) - *H.h.value(k, 0);
    if (Lattice::is_black(k))
      CHECK(step == doctest::Approx(-c2));
    else
      CHECK(step == doctest::Approx(0.0));
  }
}

TEST_CASE("H of a manufactured field") {
  // Modes of the coupled system grow like exp(2t/delta), so the evolution span
  // is kept short to hold the field at order one.
  SplitMix64 rng(33);
  std::vector<Complex> init;
  for (int c = 0; c < 6; ++c)
    init.push_back(0.5 * Complex(uniform_in(rng, -1, 1), uniform_in(rng, -1, 1)));
  for (int c = 0; c + 1 < 6; ++c) {
    if (Lattice::is_black(c))
      init[c + 1] = proj_up(init[c]) + proj_down(init[c + 1]);
    else
      init[c + 1] = proj_down(init[c]) + proj_up(init[c + 1]);
  }
  double delta = 1.0, eta = 1.0 / 128;
  auto F = exact_sholo(0, 6, 0.0, 0.5, eta, delta, init, 1e-10);
  auto H = build_H(F, delta);
  CHECK(H.max_contour_residual < 1e-8);

  // Two-step identity: H(v) - H(u) = Im[F(w)^2] across each black-white-black
  // triple, at a spread of grid rows.
  for (int u = 0; u + 2 <= 5; u += 2) {
    for (int r = 16; r <= 48; r += 16) {
      double lhs = *H.h.value(u + 2, r) - *H.h.value(u, r);
      Complex fw = *F.value(u + 1, r);
      CHECK(std::abs(lhs - (fw * fw).imag()) < 1e-7);
    }
  }

  // Vertical integral identity: H(u') - H(u) = (1/delta) Im[ int F^2 dz ]
  // along a column, the integrand evaluated independently from F^2.
  {
    int col = 2;
    const auto& vals = F.cols.at(col).vals;
    std::vector<double> re2(vals.size());
    for (size_t i = 0; i < vals.size(); ++i) re2[i] = (vals[i] * vals[i]).real();
    // Simpson over an even row count.
    double integral = 0;
    for (size_t i = 0; i + 2 < re2.size(); i += 2)
      integral += eta / 3.0 * (re2[i] + 4 * re2[i + 1] + re2[i + 2]);
    int last = int(re2.size() - 1);
    if (last % 2 != 0) {
      integral += eta / 12.0 * (-re2[last - 2] + 8 * re2[last - 1] + 5 * re2[last]);
    }
    double lhs = *H.h.value(col, last) - *H.h.value(col, 0);
    CHECK(std::abs(lhs - integral / 1.0) < 1e-7);
  }

  // Harmonicity: the Laplacian of H matches +|dF|^2 on black and -|dF|^2 on
  // white columns.
  auto harm = check_H_harmonicity(H, F, delta);
  REQUIRE(!harm.entries.empty());
  CHECK(harm.max_residual < 1e-6);
  CHECK(harm.sign_ok);
}

TEST_CASE("laplacian stencils") {
  double delta = 1.0, eta = 1.0 / 16;
  auto make_real = [&](double (*g)(double, double)) {
    RealField f;
    f.t0 = 0;
    f.eta = eta;
    for (int c = 0; c <= 6; ++c) {
      auto& col = f.cols[c];
      col.row0 = 0;
      for (int r = 0; r <= 32; ++r) col.vals.push_back(g(0.5 * delta * c, r * eta));
    }
    return f;
  };
  auto fconst = make_real(+[](double, double) { return 3.7; });
  CHECK(laplacian(fconst, 3, 16, delta) == doctest::Approx(0.0));
  auto ft2 = make_real(+[](double, double t) { return t * t; });
  CHECK(laplacian(ft2, 3, 16, delta) == doctest::Approx(2.0));
  auto fharm = make_real(+[](double x, double t) { return x * x - t * t; });
  CHECK(laplacian(fharm, 3, 16, delta) == doctest::Approx(0.0));
  CHECK_THROWS_AS(laplacian(fconst, 0, 16, delta), Error);
}

#include "semihol/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "semihol/configuration.hpp"
#include "semihol/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace semihol {

void QuantumSpec::validate() const {
  if (n_sites < 1 || n_sites > 12)
    throw Error(ErrorCode::NTooLarge, "dense diagonalization supports 1..12 sites");
  if (coupling <= 0 || field <= 0 || beta <= 0)
    throw Error(ErrorCode::SchemaError, "couplings and beta must be positive");
}

namespace {

// M = J sum s3 s3 + h sum s1, dense in the computational basis.  Bit x-1 of
// the state index holds site x, set bit = spin down.
Eigen::MatrixXd chain_matrix(const QuantumSpec& s) {
  int dim = 1 << s.n_sites;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  auto sz = [&](int state, int site) { return (state >> (site - 1)) & 1 ? -1.0 : 1.0; };
  for (int st = 0; st < dim; ++st) {
    double diag = 0;
    for (int x = 1; x < s.n_sites; ++x) diag += s.coupling * sz(st, x) * sz(st, x + 1);
    m(st, st) += diag;
    for (int x = 1; x <= s.n_sites; ++x) m(st ^ (1 << (x - 1)), st) += s.field;
  }
  return m;
}

struct EigenSystem {
  Eigen::VectorXd evals;
  Eigen::MatrixXd evecs;
};

EigenSystem diagonalize(const QuantumSpec& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(chain_matrix(s));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

double partition_function(const QuantumSpec& spec) {
  spec.validate();
  auto sys = diagonalize(spec);
  double z = 0;
  for (int k = 0; k < sys.evals.size(); ++k) z += std::exp(spec.beta * sys.evals[k]);
  return z;
}

double two_point(const QuantumSpec& spec, int x, int y) {
  spec.validate();
  if (x < 1 || x > spec.n_sites || y < 1 || y > spec.n_sites)
    throw Error(ErrorCode::SiteOutOfRange, "two-point sites must lie in the chain");
  auto sys = diagonalize(spec);
  auto sz = [&](int state, int site) { return (state >> (site - 1)) & 1 ? -1.0 : 1.0; };
  double num = 0, den = 0;
  int dim = 1 << spec.n_sites;
  for (int k = 0; k < dim; ++k) {
    double w = std::exp(spec.beta * sys.evals[k]);
    double val = 0;
    for (int st = 0; st < dim; ++st) {
      double c = sys.evecs(st, k);
      val += c * c * sz(st, x) * sz(st, y);
    }
    num += w * val;
    den += w;
  }
  return num / den;
}

// --- periodic strip machinery ---------------------------------------------------

namespace {

struct Strip {
  int n = 0;
  double beta = 0;
  std::vector<std::vector<double>> cuts;     // per site, sorted
  std::vector<std::vector<double>> bridges;  // per gap x -> between sites x+1, x+2
};

Strip sample_strip(int n, double beta, double cut_rate, double bridge_rate, SplitMix64& rng) {
  Strip s;
  s.n = n;
  s.beta = beta;
  s.cuts.resize(n);
  s.bridges.resize(std::max(0, n - 1));
  for (int x = 0; x < n; ++x) poisson_points(rng, cut_rate, beta, &s.cuts[x]);
  for (int g = 0; g + 1 < n; ++g) poisson_points(rng, bridge_rate, beta, &s.bridges[g]);
  return s;
}

// Connected components of the cut circles joined by bridges; also answers
// whether the time-zero points of two sites are connected.
struct StripComponents {
  int k = 0;
  bool connected_at_zero = false;
};

StripComponents strip_components(const Strip& s, int x, int y) {
  std::vector<int> base(s.n), count(s.n);
  int total = 0;
  for (int c = 0; c < s.n; ++c) {
    base[c] = total;
    count[c] = std::max<size_t>(1, s.cuts[c].size());
    total += count[c];
  }
  // Segment index of time t on column c: arcs wrap, arc i starts at cut i.
  auto seg = [&](int c, double t) {
    const auto& v = s.cuts[c];
    if (v.empty()) return base[c];
    auto it = std::upper_bound(v.begin(), v.end(), t);
    int i = int(it - v.begin());
    return base[c] + (i % int(v.size()));
  };
  UnionFind uf(total);
  for (int g = 0; g + 1 < s.n; ++g)
    for (double t : s.bridges[g]) uf.unite(seg(g, t), seg(g + 1, t));
  StripComponents out;
  out.k = uf.count();
  out.connected_at_zero = uf.connected(seg(x - 1, 0.0), seg(y - 1, 0.0));
  return out;
}

// Base-0 one-length per site of the parity labelling: switches at bridge
// endpoints and at time-zero sources.
std::vector<double> parity_lengths(const Strip& s, int src_a, int src_b, bool& valid) {
  std::vector<double> len(s.n, 0.0);
  valid = true;
  for (int c = 0; c < s.n; ++c) {
    std::vector<double> ev;
    if (c > 0) ev.insert(ev.end(), s.bridges[c - 1].begin(), s.bridges[c - 1].end());
    if (c + 1 < s.n) ev.insert(ev.end(), s.bridges[c].begin(), s.bridges[c].end());
    bool sourced = (c + 1 == src_a) != (c + 1 == src_b);
    std::sort(ev.begin(), ev.end());
    if ((ev.size() + (sourced ? 1 : 0)) % 2 != 0) {
      valid = false;
      return len;
    }
    int v = sourced ? 1 : 0;  // value just after the time-zero seam
    double prev = 0, acc = 0;
    for (double t : ev) {
      if (v) acc += t - prev;
      prev = t;
      v = 1 - v;
    }
    if (v) acc += s.beta - prev;
    len[c] = acc;
  }
  return len;
}

double rpr_sum(const Strip& s, double h, int src_a, int src_b) {
  bool valid = false;
  auto len = parity_lengths(s, src_a, src_b, valid);
  if (!valid) return 0.0;
  // Sum over the 2^n base labels; flipping the base swaps the one-length.
  double total = 0;
  for (unsigned mask = 0; mask < (1u << s.n); ++mask) {
    double ell = 0;
    for (int c = 0; c < s.n; ++c)
      ell += ((mask >> c) & 1) ? (s.beta - len[c]) : len[c];
    total += std::exp(-2.0 * h * ell);
  }
  return total;
}

double stim_sum(const Strip& s, double coupling, int x, int y) {
  for (const auto& v : s.cuts)
    if (v.size() % 2 != 0) return 0.0;
  std::vector<double> pair_integral(std::max(0, s.n - 1), 0.0);
  for (int g = 0; g + 1 < s.n; ++g) {
    std::vector<std::pair<double, int>> ev;
    for (double t : s.cuts[g]) ev.push_back({t, 0});
    for (double t : s.cuts[g + 1]) ev.push_back({t, 1});
    std::sort(ev.begin(), ev.end());
    double prev = 0, acc = 0;
    int s0 = 1, s1 = 1;
    for (const auto& [t, which] : ev) {
      acc += s0 * s1 * (t - prev);
      prev = t;
      (which == 0 ? s0 : s1) *= -1;
    }
    acc += s0 * s1 * (s.beta - prev);
    pair_integral[g] = acc;
  }
  double total = 0;
  for (unsigned mask = 0; mask < (1u << s.n); ++mask) {
    double e = 0;
    for (int g = 0; g + 1 < s.n; ++g) {
      int bx = (mask >> g) & 1 ? 1 : -1;
      int by = (mask >> (g + 1)) & 1 ? 1 : -1;
      e += bx * by * pair_integral[g];
    }
    double sign = 1.0;
    if (x > 0 && y > 0)
      sign = ((mask >> (x - 1)) & 1 ? -1.0 : 1.0) * ((mask >> (y - 1)) & 1 ? -1.0 : 1.0);
    total += sign * std::exp(coupling * e);
  }
  return total;
}

struct ChainAcc {
  double fk_w = 0, fk_wc = 0;      // 2^k and indicator * 2^k
  double rpr_den = 0, rpr_num = 0;
  double stim_den = 0, stim_num = 0;
  long n = 0;
};

}  // namespace

RepresentationReport compare_representations(const QuantumSpec& spec, int x, int y,
                                             long n_samples, std::uint64_t seed, int n_chains,
                                             bool parallel) {
  spec.validate();
  if (spec.n_sites > 8)
    throw Error(ErrorCode::NTooLarge, "representation sampling capped at 8 sites");
  if (x < 1 || x > spec.n_sites || y < 1 || y > spec.n_sites)
    throw Error(ErrorCode::SiteOutOfRange, "sites must lie in the chain");

  RepresentationReport rep;
  rep.exact_corr = two_point(spec, x, y);
  rep.exact_z = partition_function(spec);
  rep.n_samples = n_samples;

  const int n = spec.n_sites;
  const double beta = spec.beta, h = spec.field, J = spec.coupling;
  long per_chain = n_samples / n_chains;

  std::vector<ChainAcc> acc(n_chains);
  auto run_one = [&](int c) {
    SplitMix64 rng = SplitMix64::stream(seed, 101 + c);
    ChainAcc& a = acc[c];
    for (long i = 0; i < per_chain; ++i) {
      // FK: cuts at rate h, bridges at rate 2J, weight 2^k.
      Strip fk = sample_strip(n, beta, h, 2.0 * J, rng);
      auto comps = strip_components(fk, x, y);
      double w = std::ldexp(1.0, comps.k);  // 2^k
      a.fk_w += w;
      if (comps.connected_at_zero || x == y) a.fk_wc += w;
      // Random parity: bridges at rate J only.
      Strip rp = sample_strip(n, beta, 0.0, J, rng);
      a.rpr_den += rpr_sum(rp, h, 0, 0);
      a.rpr_num += (x == y) ? rpr_sum(rp, h, 0, 0) : rpr_sum(rp, h, x, y);
      // Space-time spin: cuts at rate h only.
      Strip st = sample_strip(n, beta, h, 0.0, rng);
      a.stim_den += stim_sum(st, J, 0, 0);
      a.stim_num += stim_sum(st, J, x, y);
      ++a.n;
    }
  };
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < n_chains; ++c) run_one(c);
  } else
#endif
  {
    for (int c = 0; c < n_chains; ++c) run_one(c);
  }

  auto collect = [&](auto num_of, auto den_of, double scale) {
    std::vector<Complex> ratios(n_chains), dens(n_chains);
    for (int c = 0; c < n_chains; ++c) {
      double dn = den_of(acc[c]) / double(acc[c].n);
      double nm = num_of(acc[c]) / double(acc[c].n);
      ratios[c] = Complex(nm / dn, 0);
      dens[c] = Complex(scale * dn, 0);
    }
    return std::make_pair(combine_means(ratios), combine_means(dens));
  };

  double zfk = std::exp(beta * J * (n - 1));
  auto [fkc, fkz] = collect([](const ChainAcc& a) { return a.fk_wc; },
                            [](const ChainAcc& a) { return a.fk_w; }, zfk);
  rep.fk_corr = fkc;
  rep.fk_z = fkz;
  double zrp = std::exp(beta * h * n + beta * J * (n - 1));
  auto [rpc, rpz] = collect([](const ChainAcc& a) { return a.rpr_num; },
                            [](const ChainAcc& a) { return a.rpr_den; }, zrp);
  rep.rpr_corr = rpc;
  rep.rpr_z = rpz;
  double zst = std::exp(beta * h * n);
  auto [stc, stz] = collect([](const ChainAcc& a) { return a.stim_num; },
                            [](const ChainAcc& a) { return a.stim_den; }, zst);
  rep.stim_corr = stc;
  rep.stim_z = stz;

  rep.z_fk = rep.fk_corr.z_against({rep.exact_corr, 0});
  rep.z_rpr = rep.rpr_corr.z_against({rep.exact_corr, 0});
  rep.z_stim = rep.stim_corr.z_against({rep.exact_corr, 0});
  rep.zz_fk = rep.fk_z.z_against({rep.exact_z, 0});
  rep.zz_rpr = rep.rpr_z.z_against({rep.exact_z, 0});
  rep.zz_stim = rep.stim_z.z_against({rep.exact_z, 0});
  return rep;
}

KwIdentityReport kw_identity_check(int n_sites, double beta, double h, double coupling,
                                   long n_samples, std::uint64_t seed, int n_chains,
                                   bool parallel) {
  if (n_sites < 3) throw Error(ErrorCode::SchemaError, "duality check needs at least 3 sites");
  long per_chain = n_samples / n_chains;
  std::vector<double> plus_sum(n_chains, 0.0), zero_sum(n_chains, 0.0);

  auto run_one = [&](int c) {
    SplitMix64 rng = SplitMix64::stream(seed, 777 + c);
    for (long i = 0; i < per_chain; ++i) {
      // Wired spin side: the frozen outer spins carry no flip process, so the
      // cuts live on the interior columns only; zero weight unless every
      // column sees an even count.
      Strip st = sample_strip(n_sites, beta, 0.0, 0.0, rng);
      for (int x = 1; x + 1 < n_sites; ++x) poisson_points(rng, h, beta, &st.cuts[x]);
      bool ok = true;
      for (const auto& v : st.cuts) ok = ok && v.size() % 2 == 0;
      if (ok) {
        // Unique spin function: all base signs +1.
        double e = 0;
        for (int g = 0; g + 1 < n_sites; ++g) {
          std::vector<std::pair<double, int>> ev;
          for (double t : st.cuts[g]) ev.push_back({t, 0});
          for (double t : st.cuts[g + 1]) ev.push_back({t, 1});
          std::sort(ev.begin(), ev.end());
          double prev = 0, acc2 = 0;
          int s0 = 1, s1 = 1;
          for (const auto& [t, which] : ev) {
            acc2 += s0 * s1 * (t - prev);
            prev = t;
            (which == 0 ? s0 : s1) *= -1;
          }
          acc2 += s0 * s1 * (beta - prev);
          e += acc2;
        }
        plus_sum[c] += std::exp(coupling * e);
      }
      // Zero-boundary parity side on n_sites-1 columns, parameters swapped:
      // bridges at rate h, one-lengths weighted by exp(-2 J |I|), base 0.
      Strip rp = sample_strip(n_sites - 1, beta, 0.0, h, rng);
      bool valid = false;
      auto len = parity_lengths(rp, 0, 0, valid);
      if (valid) {
        double ell = 0;
        for (double l : len) ell += l;
        zero_sum[c] += std::exp(-2.0 * coupling * ell);
      }
    }
  };
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < n_chains; ++c) run_one(c);
  } else
#endif
  {
    for (int c = 0; c < n_chains; ++c) run_one(c);
  }

  std::vector<Complex> pm(n_chains), zm(n_chains);
  for (int c = 0; c < n_chains; ++c) {
    pm[c] = Complex(plus_sum[c] / double(per_chain), 0);
    zm[c] = Complex(zero_sum[c] / double(per_chain), 0);
  }
  auto pe = combine_means(pm);
  auto ze = combine_means(zm);

  KwIdentityReport out;
  double m = n_sites - 1;
  out.log_z_plus = beta * h * n_sites + std::log(pe.mean.real());
  out.log_z_zero = beta * coupling * m + beta * h * (m - 1) + std::log(ze.mean.real());
  out.se_plus = pe.std_error.real() / pe.mean.real();
  out.se_zero = ze.std_error.real() / ze.mean.real();
  out.target = 2.0 * beta * h;
  double se = std::hypot(out.se_plus, out.se_zero);
  out.z_score = std::abs(out.log_z_plus - out.log_z_zero - out.target) / se;
  return out;
}

}  // namespace semihol

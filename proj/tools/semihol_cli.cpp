// Command-line driver: domain construction, sampling, field estimation,
// verification suites, the quantum oracle, and SVG rendering.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "semihol/fk_observable.hpp"
#include "semihol/json_io.hpp"
#include "semihol/oracle.hpp"
#include "semihol/parity.hpp"
#include "semihol/sholo.hpp"
#include "semihol/svg.hpp"
#include "semihol/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace semihol;
namespace fs = std::filesystem;

constexpr const char* kVersion = "0.1.0";

struct Manifest {
  Json j;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Manifest(const std::string& command, std::uint64_t seed, int threads) {
    j["command"] = command;
    j["version"] = kVersion;
    j["seed"] = seed;
    j["threads"] = threads;
    j["outputs"] = Json::array();
  }
  void add_output(const std::string& path) { j["outputs"].push_back(path); }
  void write(const fs::path& dir) {
    j["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    save_json_file((dir / "manifest.json").string(), j);
  }
};

int resolve_threads(int requested) {
#ifdef _OPENMP
  if (requested > 0) {
    omp_set_num_threads(requested);
    return requested;
  }
  return omp_get_max_threads();  // honours OMP_NUM_THREADS
#else
  (void)requested;
  return 1;
#endif
}

int cmd_sample(const std::string& domain_path, const std::string& outdir, std::uint64_t seed,
               double q, bool q_given, int n, int threads) {
  int nt = resolve_threads(threads);
  if (!q_given) std::cerr << "note: q not given, using the critical default q = 2\n";
  auto dom = domain_from_json(load_json_file(domain_path));
  auto w = make_weight_spec(q, dom.lattice.delta);
  fs::create_directories(outdir);
  Manifest man("sample", seed, nt);
  man.j["domain"] = domain_path;
  man.j["q"] = q;
  man.j["n"] = n;

  ChainParams p;
  p.seed = seed;
  McmcChain chain(dom, w, seed);
  chain.advance(p.burn_in);
  for (int i = 0; i < n; ++i) {
    chain.advance(p.thinning);
    auto cfg = chain.config();
    std::string base = "config_" + std::to_string(i);
    save_json_file((fs::path(outdir) / (base + ".json")).string(), config_to_json(cfg));
    man.add_output(base + ".json");
    if (dom.kind == DomainKind::dobrushin) {
      auto tr = trace_arrangement(dom, cfg);
      save_json_file((fs::path(outdir) / (base + "_trace.json")).string(),
                     trace_to_json(dom, tr));
      save_text_file((fs::path(outdir) / (base + ".svg")).string(),
                     render_scene_svg(dom, &cfg, &tr));
      man.add_output(base + ".svg");
    }
  }
  save_json_file((fs::path(outdir) / "checkpoint.json").string(),
                 checkpoint_to_json(chain.config(), chain.rng().state(), chain.sweeps_done()));
  man.write(outdir);
  return 0;
}

int cmd_estimate(const std::string& mode, const std::string& domain_path,
                 const std::string& outdir, std::uint64_t seed, double q, int n_samples,
                 int n_chains, double grid_spacing, bool check_sholo_flag, int threads) {
  int nt = resolve_threads(threads);
  auto doc = load_json_file(domain_path);
  auto dom = domain_from_json(doc);
  fs::create_directories(outdir);
  Manifest man("estimate/" + mode, seed, nt);
  man.j["domain"] = domain_path;
  man.j["n_samples"] = n_samples;
  man.j["n_chains"] = n_chains;

  if (mode == "fk" || mode == "parafermionic") {
    ChainParams p;
    p.seed = seed;
    p.n_samples = n_samples;
    p.n_chains = n_chains;
    FieldOptions fo;
    if (grid_spacing > 0) fo.grid_spacing = grid_spacing;
    auto field = mode == "fk" ? fk_field(dom, p, fo) : parafermionic_field(dom, q, p, fo);
    save_text_file((fs::path(outdir) / "field.csv").string(), field_to_csv(field));
    man.add_output("field.csv");
    save_text_file((fs::path(outdir) / "field.svg").string(), render_field_svg(field));
    man.add_output("field.svg");
    Json summary;
    summary["q"] = field.q;
    summary["sigma"] = field.sigma;
    summary["n_samples"] = field.n_samples;
    if (check_sholo_flag) {
      auto rep = check_phi_dots(field);
      summary["identities"] = phi_dots_to_json(rep);
    }
    // H field from the estimated means, as CSV and heatmap.
    try {
      auto H = build_H(field.mean_function(), dom.lattice.delta);
      std::ostringstream hcsv;
      hcsv.precision(17);
      hcsv << "col_index,color,t,h\n";
      for (const auto& [col, c] : H.h.cols)
        for (size_t i = 0; i < c.vals.size(); ++i)
          hcsv << col << ',' << (Lattice::is_black(col) ? "black" : "white") << ','
               << H.h.t0 + (c.row0 + int(i)) * H.h.eta << ',' << c.vals[i] << '\n';
      save_text_file((fs::path(outdir) / "h_field.csv").string(), hcsv.str());
      save_text_file((fs::path(outdir) / "h_field.svg").string(),
                     render_real_svg(H.h, dom.lattice.delta, "H"));
      man.add_output("h_field.csv");
      man.add_output("h_field.svg");
      summary["h_contour_residual"] = H.max_contour_residual;
    } catch (const Error& e) {
      summary["h_field_skipped"] = e.what();
    }
    save_json_file((fs::path(outdir) / "summary.json").string(), summary);
    man.add_output("summary.json");
  } else if (mode == "spin") {
    if (!doc.contains("spin_marks"))
      throw Error(ErrorCode::SchemaError,
                  "spin mode needs spin_marks {a:[col,t], b:[col,t]} in the domain document");
    LatticePoint a{doc["spin_marks"]["a"][0].get<int>(), doc["spin_marks"]["a"][1].get<double>()};
    LatticePoint b{doc["spin_marks"]["b"][0].get<int>(), doc["spin_marks"]["b"][1].get<double>()};
    SpinFieldParams p;
    p.seed = seed;
    p.n_samples = n_samples;
    p.n_chains = n_chains;
    double spacing = grid_spacing > 0 ? grid_spacing : dom.lattice.delta / 4;
    std::vector<LatticePoint> sites;
    for (const auto& gs : measurement_grid(dom, spacing, dom.lattice.delta / 8))
      sites.push_back(gs.z);
    auto f = spin_field(dom, a, b, sites, p);
    std::ostringstream csv;
    csv.precision(17);
    csv << "col_index,color,t,re,im,se_re,se_im,n\n";
    for (const auto& s : f.sites)
      csv << s.z.col << ',' << (s.color == PointColor::black ? "black" : "white") << ',' << s.z.t
          << ',' << s.value.mean.real() << ',' << s.value.mean.imag() << ','
          << s.value.std_error.real() << ',' << s.value.std_error.imag() << ',' << f.n_samples
          << '\n';
    save_text_file((fs::path(outdir) / "field.csv").string(), csv.str());
    man.add_output("field.csv");
  } else {
    throw Error(ErrorCode::SchemaError, "estimate mode must be fk, parafermionic, or spin");
  }
  man.write(outdir);
  return 0;
}

int cmd_verify(const std::vector<std::string>& suites, const std::string& outdir,
               std::uint64_t seed, double scale, int threads) {
  int nt = resolve_threads(threads);
  VerifyOptions o;
  o.seed = seed;
  o.scale = scale;
  auto results = verify_all(o, suites);
  Json report = Json::array();
  bool all_pass = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  (" << r.runtime_s << " s)  "
              << r.summary << "\n";
    all_pass = all_pass && r.pass;
    Json e;
    e["name"] = r.name;
    e["pass"] = r.pass;
    e["runtime_s"] = r.runtime_s;
    e["summary"] = r.summary;
    e["details"] = r.details;
    report.push_back(e);
  }
  if (!outdir.empty()) {
    fs::create_directories(outdir);
    Manifest man("verify", seed, nt);
    man.j["scale"] = scale;
    save_json_file((fs::path(outdir) / "verify_report.json").string(), report);
    man.add_output("verify_report.json");
    man.write(outdir);
  }
  return all_pass ? 0 : 1;
}

int cmd_oracle(int n_sites, double beta, double coupling, double field, int x, int y,
               long n_samples, std::uint64_t seed, const std::string& outdir, int threads) {
  int nt = resolve_threads(threads);
  QuantumSpec spec{n_sites, coupling, field, beta};
  auto rep = compare_representations(spec, x, y, n_samples, seed, 8);
  Json j;
  j["exact"] = rep.exact_corr;
  j["fk"] = {{"mean", rep.fk_corr.mean.real()}, {"se", rep.fk_corr.std_error.real()}};
  j["rpr"] = {{"mean", rep.rpr_corr.mean.real()}, {"se", rep.rpr_corr.std_error.real()}};
  j["stim"] = {{"mean", rep.stim_corr.mean.real()}, {"se", rep.stim_corr.std_error.real()}};
  j["z_scores"] = {rep.z_fk, rep.z_rpr, rep.z_stim};
  j["partition_function"] = {{"exact", rep.exact_z},
                             {"fk", rep.fk_z.mean.real()},
                             {"rpr", rep.rpr_z.mean.real()},
                             {"stim", rep.stim_z.mean.real()},
                             {"z_scores", {rep.zz_fk, rep.zz_rpr, rep.zz_stim}}};
  std::cout << j.dump(2) << "\n";
  if (!outdir.empty()) {
    fs::create_directories(outdir);
    Manifest man("oracle", seed, nt);
    save_json_file((fs::path(outdir) / "oracle_report.json").string(), j);
    man.add_output("oracle_report.json");
    man.write(outdir);
  }
  double worst = std::max({rep.z_fk, rep.z_rpr, rep.z_stim, rep.zz_fk, rep.zz_rpr, rep.zz_stim});
  return worst <= 3.0 ? 0 : 1;
}

int cmd_render(const std::string& domain_path, const std::string& config_path,
               const std::string& out, bool with_trace, std::uint64_t seed) {
  auto dom = domain_from_json(load_json_file(domain_path));
  Configuration cfg;
  bool have_cfg = false;
  if (!config_path.empty()) {
    cfg = config_from_json(load_json_file(config_path));
    have_cfg = true;
  } else if (with_trace) {
    SplitMix64 rng(seed);
    double rate = 1.0 / (dom.lattice.delta * std::sqrt(2.0));
    cfg = sample_poisson(dom, rate, rate, rng);
    have_cfg = true;
  }
  std::optional<InterfaceTrace> tr;
  if (with_trace && dom.kind == DomainKind::dobrushin) tr = trace_arrangement(dom, cfg);
  save_text_file(out, render_scene_svg(dom, have_cfg ? &cfg : nullptr, tr ? &*tr : nullptr));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semi-discrete critical Ising simulation and verification engine"};
  app.require_subcommand(1);

  std::string domain_path, config_path, outdir = "out", out_file = "scene.svg", mode = "fk";
  std::uint64_t seed = 1;
  double q = 2.0, scale = 1.0, grid_spacing = 0.0;
  int n = 10, n_samples = 20000, n_chains = 8, threads = 0;
  bool with_trace = false, check_sholo_flag = false;
  std::vector<std::string> suites;
  int osites = 2, ox = 1, oy = 2;
  double obeta = 1.0, oj = 0.5, oh = 0.5;
  long on = 1000000;

  auto* sample = app.add_subcommand("sample", "draw loop-weighted configurations");
  sample->add_option("--domain", domain_path, "domain JSON document")->required();
  sample->add_option("--out", outdir, "output directory");
  sample->add_option("--seed", seed, "random seed");
  auto* qopt = sample->add_option("--q", q, "loop weight parameter");
  sample->add_option("--n", n, "number of configurations");
  sample->add_option("--threads", threads, "thread count (default: OMP_NUM_THREADS)");

  auto* est = app.add_subcommand("estimate", "estimate observables on a measurement grid");
  est->add_option("--mode", mode, "fk | parafermionic | spin");
  est->add_option("--domain", domain_path, "domain JSON document")->required();
  est->add_option("--out", outdir, "output directory");
  est->add_option("--seed", seed, "random seed");
  est->add_option("--q", q, "loop weight parameter");
  est->add_option("--samples", n_samples, "samples per chain");
  est->add_option("--chains", n_chains, "independent chains");
  est->add_option("--grid", grid_spacing, "measurement grid spacing");
  est->add_flag("--check-sholo", check_sholo_flag, "append the identity residual report");
  est->add_option("--threads", threads, "thread count");

  auto* ver = app.add_subcommand("verify", "run the verification suites");
  ver->add_option("--suite", suites, "subset of suites to run");
  ver->add_option("--out", outdir, "output directory for the report");
  ver->add_option("--seed", seed, "random seed");
  ver->add_option("--scale", scale, "sample-size multiplier");
  ver->add_option("--threads", threads, "thread count");

  auto* orc = app.add_subcommand("oracle", "compare representations against diagonalization");
  orc->add_option("--N", osites, "chain length (<= 8 for sampling)");
  orc->add_option("--beta", obeta, "inverse temperature");
  orc->add_option("--J", oj, "coupling");
  orc->add_option("--field", oh, "transverse field strength");
  orc->add_option("--x", ox, "first site");
  orc->add_option("--y", oy, "second site");
  orc->add_option("--samples", on, "Monte Carlo samples");
  orc->add_option("--seed", seed, "random seed");
  orc->add_option("--out", outdir, "output directory");
  orc->add_option("--threads", threads, "thread count");

  auto* ren = app.add_subcommand("render", "render a domain/configuration/interface SVG");
  ren->add_option("--domain", domain_path, "domain JSON document")->required();
  ren->add_option("--config", config_path, "configuration JSON document");
  ren->add_option("--out", out_file, "output SVG path");
  ren->add_flag("--trace", with_trace, "draw the interface and loops");
  ren->add_option("--seed", seed, "seed when sampling a configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sample->parsed())
      return cmd_sample(domain_path, outdir, seed, q, qopt->count() > 0, n, threads);
    if (est->parsed())
      return cmd_estimate(mode, domain_path, outdir, seed, q, n_samples, n_chains, grid_spacing,
                          check_sholo_flag, threads);
    if (ver->parsed()) return cmd_verify(suites, outdir, seed, scale, threads);
    if (orc->parsed()) return cmd_oracle(osites, obeta, oj, oh, ox, oy, on, seed, outdir, threads);
    if (ren->parsed()) return cmd_render(domain_path, config_path, out_file, with_trace, seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

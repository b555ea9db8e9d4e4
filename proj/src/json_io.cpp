#include "semihol/json_io.hpp"

#include <fstream>
#include <sstream>

namespace semihol {

namespace {

const char* kind_name(DomainKind k) {
  switch (k) {
    case DomainKind::primal: return "primal";
    case DomainKind::dual: return "dual";
    default: return "dobrushin";
  }
}

DomainKind kind_from(const std::string& s) {
  if (s == "primal") return DomainKind::primal;
  if (s == "dual") return DomainKind::dual;
  if (s == "dobrushin") return DomainKind::dobrushin;
  throw Error(ErrorCode::SchemaError, "unknown domain kind '" + s + "'");
}

const char* dir_name(Dir d) {
  switch (d) {
    case Dir::up: return "up";
    case Dir::down: return "down";
    case Dir::left: return "left";
    default: return "right";
  }
}

}  // namespace

Json domain_to_json(const SemiDiscreteDomain& dom) {
  Json j;
  j["delta"] = dom.lattice.delta;
  j["kind"] = kind_name(dom.kind);
  Json path = Json::array();
  for (const auto& v : dom.path) path.push_back({dom.lattice.column_x(v.x_half), v.t});
  j["path"] = path;
  if (dom.marks) {
    j["marks"]["a"] = {dom.lattice.medial_x(dom.marks->a.medial_index), dom.marks->a.t};
    j["marks"]["b"] = {dom.lattice.medial_x(dom.marks->b.medial_index), dom.marks->b.t};
  }
  return j;
}

SemiDiscreteDomain domain_from_json(const Json& j) {
  if (!j.contains("delta") || !j.contains("kind") || !j.contains("path"))
    throw Error(ErrorCode::SchemaError, "domain document needs delta, kind, path");
  Lattice latt{j.at("delta").get<double>()};
  DomainKind kind = kind_from(j.at("kind").get<std::string>());
  std::vector<std::pair<double, double>> path;
  for (const auto& v : j.at("path")) {
    if (!v.is_array() || v.size() < 2)
      throw Error(ErrorCode::SchemaError, "path vertices are [x, t] pairs");
    path.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  std::optional<std::pair<MedialPoint, MedialPoint>> marks;
  if (j.contains("marks")) {
    auto to_medial = [&](const Json& m) {
      double x = m[0].get<double>();
      double t = m[1].get<double>();
      double jf = (4.0 * x / latt.delta - 1.0) / 2.0;
      double jr = std::round(jf);
      if (std::abs(jf - jr) > 1e-6)
        throw Error(ErrorCode::InvalidMarks, "mark is not on a medial line");
      return MedialPoint{int(jr), t};
    };
    marks = std::make_pair(to_medial(j.at("marks").at("a")), to_medial(j.at("marks").at("b")));
  }
  return build_domain(latt, kind, path, marks);
}

Json config_to_json(const Configuration& cfg) {
  Json j;
  Json cuts = Json::object(), bridges = Json::object();
  for (const auto& [k, v] : cfg.cuts) cuts[std::to_string(k)] = v;
  for (const auto& [k, v] : cfg.bridges) bridges[std::to_string(k)] = v;
  j["cuts"] = cuts;
  j["bridges"] = bridges;
  j["topology"] = cfg.topology == TimeTopology::periodic ? "periodic" : "interval";
  if (cfg.topology == TimeTopology::periodic) j["beta"] = cfg.beta;
  return j;
}

Configuration config_from_json(const Json& j) {
  Configuration cfg;
  auto load = [&](const char* key, std::map<int, std::vector<double>>& dst, bool black) {
    if (!j.contains(key)) return;
    for (const auto& [ks, v] : j.at(key).items()) {
      int col = std::stoi(ks);
      if (Lattice::is_black(col) != black)
        throw Error(ErrorCode::SchemaError, "configuration column parity mismatch");
      std::vector<double> times = v.get<std::vector<double>>();
      for (size_t i = 0; i + 1 < times.size(); ++i)
        if (times[i] >= times[i + 1])
          throw Error(ErrorCode::SchemaError, "column times must be strictly increasing");
      if (!times.empty()) dst[col] = std::move(times);
    }
  };
  load("cuts", cfg.cuts, true);
  load("bridges", cfg.bridges, false);
  if (j.value("topology", "interval") == std::string("periodic")) {
    cfg.topology = TimeTopology::periodic;
    cfg.beta = j.at("beta").get<double>();
  }
  return cfg;
}

Json checkpoint_to_json(const Configuration& cfg, std::uint64_t rng_state, long sweeps) {
  Json j;
  j["config"] = config_to_json(cfg);
  j["rng_state"] = rng_state;
  j["sweeps"] = sweeps;
  return j;
}

void checkpoint_from_json(const Json& j, Configuration& cfg, std::uint64_t& rng_state,
                          long& sweeps) {
  cfg = config_from_json(j.at("config"));
  rng_state = j.at("rng_state").get<std::uint64_t>();
  sweeps = j.at("sweeps").get<long>();
}

Json trace_to_json(const SemiDiscreteDomain& dom, const InterfaceTrace& tr) {
  auto seg_json = [&](const TraceSegment& s) {
    Json e;
    if (s.kind == TraceSegment::Kind::vertical) {
      e["kind"] = "run";
      e["x"] = dom.lattice.medial_x(s.medial);
      e["t0"] = s.t_lo;
      e["t1"] = s.t_hi;
    } else if (s.kind == TraceSegment::Kind::hop) {
      e["kind"] = "hop";
      e["x"] = dom.lattice.column_x(s.col);
      e["t0"] = s.t;
      e["t1"] = s.t;
    } else {
      e["kind"] = "exit";
      e["x"] = dom.lattice.medial_x(s.medial);
      e["t0"] = s.t;
      e["t1"] = s.t;
    }
    e["dir"] = dir_name(s.dir);
    return e;
  };
  Json j;
  Json iface = Json::array();
  for (const auto& s : tr.interface) iface.push_back(seg_json(s));
  j["interface"] = iface;
  Json loops = Json::array();
  for (const auto& loop : tr.loops) {
    Json l = Json::array();
    for (const auto& s : loop.segments) l.push_back(seg_json(s));
    loops.push_back(l);
  }
  j["loops"] = loops;
  j["loop_count"] = tr.loop_count();
  return j;
}

Json labelling_to_json(const ParityLabelling& lab) {
  Json j;
  j["exists"] = lab.exists;
  Json ivs = Json::array();
  for (const auto& p : lab.intervals) ivs.push_back({p.col, p.lo, p.hi});
  j["intervals"] = ivs;
  Json path = Json::array();
  for (const auto& st : lab.path) {
    Json e;
    e["horizontal"] = st.horizontal;
    e["col"] = st.col;
    e["t0"] = st.t0;
    e["t1"] = st.t1;
    e["dir"] = dir_name(st.dir);
    e["half_edge"] = st.half_edge;
    path.push_back(e);
  }
  j["path"] = path;
  j["loops"] = lab.loops;
  j["total_length"] = lab.total_length;
  j["winding_quarters"] = lab.winding_quarters;
  return j;
}

std::string field_to_csv(const ComplexField& field) {
  std::ostringstream os;
  os.precision(17);
  os << "col_index,color,t,re,im,se_re,se_im,n\n";
  for (size_t i = 0; i < field.grid.size(); ++i) {
    const auto& s = field.grid[i];
    const auto& st = field.sites[i];
    os << s.z.col << ',' << (s.color == PointColor::black ? "black" : "white") << ',' << s.z.t
       << ',' << st.F.mean.real() << ',' << st.F.mean.imag() << ',' << st.F.std_error.real()
       << ',' << st.F.std_error.imag() << ',' << field.n_samples << '\n';
  }
  return os.str();
}

Json phi_dots_to_json(const PhiDotsReport& rep) {
  auto table = [](const std::vector<IdentityCheck>& v) {
    Json t = Json::array();
    for (const auto& c : v) {
      Json e;
      e["name"] = c.name;
      e["col"] = c.col;
      e["t"] = c.t;
      e["residual"] = {c.residual.real(), c.residual.imag()};
      e["se"] = {c.se.real(), c.se.imag()};
      e["z"] = c.z_score;
      t.push_back(e);
    }
    return t;
  };
  Json j;
  j["turn_relations"] = table(rep.turn_eq);
  j["derivative_relations"] = table(rep.phi_dots);
  j["finite_difference_cross_check"] = table(rep.fd_cross);
  j["max_z_turn"] = rep.max_z_turn;
  j["max_z_derivative"] = rep.max_z_dots;
  j["max_z_finite_difference"] = rep.max_z_fd;
  j["fraction_within_2se"] = rep.frac_within_2se;
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SchemaError, "cannot open " + path);
  Json j;
  in >> j;
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::SchemaError, "cannot write " + path);
  out << j.dump(2) << '\n';
}

void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::SchemaError, "cannot write " + path);
  out << text;
}

}  // namespace semihol

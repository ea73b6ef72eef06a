#include "ferro/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace ferro {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double unit_multiplier(const std::string& unit, int line) {
  static const std::map<std::string, double> table = {
      {"m", 1.0},       {"mm", 1e-3},     {"cm", 1e-2},      {"um", 1e-6},
      {"N", 1.0},       {"V", 1.0},       {"kV", 1e3},       {"V/m", 1.0},
      {"V/mm", 1e3},    {"kV/mm", 1e6},   {"Pa", 1.0},       {"N/m^2", 1.0},
      {"N/m2", 1.0},    {"MPa", 1e6},     {"GPa", 1e9},      {"N/mm^2", 1e6},
      {"N/mm2", 1e6},   {"C/m^2", 1.0},   {"C/m2", 1.0},     {"m/V", 1.0},
      {"V*m/C", 1.0},   {"Vm/C", 1.0},    {"C/(V*m)", 1.0},  {"C/(Vm)", 1.0}};
  const auto it = table.find(unit);
  if (it == table.end()) throw ParseError(line, "unknown unit '" + unit + "'");
  return it->second;
}

double parse_value(const std::string& text, int line) {
  const std::string s = trim(text);
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ParseError(line, "expected a number, got '" + s + "'");
  }
  const std::string unit = trim(s.substr(pos));
  if (!unit.empty()) v *= unit_multiplier(unit, line);
  return v;
}

int parse_int(const std::string& text, int line) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(trim(text), &pos);
    if (pos != trim(text).size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + trim(text) + "'");
  }
}

bool parse_flag(const std::string& text, int line) {
  const std::string s = trim(text);
  if (s == "on" || s == "true" || s == "1" || s == "yes") return true;
  if (s == "off" || s == "false" || s == "0" || s == "no") return false;
  throw ParseError(line, "expected on/off, got '" + s + "'");
}

struct RawConfig {
  // section -> key -> (value text, line)
  std::map<std::string, std::map<std::string, std::pair<std::string, int>>> data;
  std::vector<int> schedule_ids;
};

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ParseError(lineno, "unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      if (section.empty()) throw ParseError(lineno, "empty section name");
      if (section.rfind("schedule.", 0) == 0) {
        const int id = parse_int(section.substr(9), lineno);
        raw.schedule_ids.push_back(id);
      }
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key = value");
    if (section.empty()) throw ParseError(lineno, "key outside any section");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ParseError(lineno, "empty key");
    raw.data[section][key] = {value, lineno};
  }
  return raw;
}

class SectionReader {
 public:
  SectionReader(const RawConfig& raw, const std::string& name) : name_(name) {
    const auto it = raw.data.find(name);
    if (it != raw.data.end()) entries_ = &it->second;
  }
  bool has(const std::string& key) const {
    return entries_ && entries_->count(key);
  }
  double number(const std::string& key) const {
    const auto& [text, line] = entries_->at(key);
    return parse_value(text, line);
  }
  int integer(const std::string& key) const {
    const auto& [text, line] = entries_->at(key);
    return parse_int(text, line);
  }
  bool flag(const std::string& key) const {
    const auto& [text, line] = entries_->at(key);
    return parse_flag(text, line);
  }
  std::string text(const std::string& key) const {
    return trim(entries_->at(key).first);
  }
  double require_number(const std::string& key) const {
    if (!has(key)) throw ValidationError(key, "missing in [" + name_ + "]");
    return number(key);
  }

 private:
  std::string name_;
  const std::map<std::string, std::pair<std::string, int>>* entries_ = nullptr;
};

void apply_role(FacetBc& bc, const std::string& token) {
  if (token == "fix")
    bc.clamp = true;
  else if (token == "rollerx")
    bc.roller_x = true;
  else if (token == "rollery")
    bc.roller_y = true;
  else if (token == "ins")
    bc.insulated = true;
  else if (token == "trac")
    bc.traction = true;
  else if (token == "piny")
    bc.pin_y_mid = true;
  else if (token == "el") {
    bc.electrode = true;
    bc.phi_a = 1.0;
  } else if (token == "ground" || token == "free" || token.empty()) {
    // natural boundary, no term
  } else {
    throw ValidationError("boundary role", "unknown role '" + token + "'");
  }
}

FacetBc parse_roles(const std::string& roles) {
  FacetBc bc;
  std::stringstream ss(roles);
  std::string tok;
  while (std::getline(ss, tok, ',')) apply_role(bc, trim(tok));
  return bc;
}

bool is_fem_type(const std::string& type) {
  return type == "square" || type == "beam" || type == "triangle" ||
         type == "mesh";
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ensure_parent_dir(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  const RawConfig raw = tokenize(text);
  RunConfig cfg;

  const SectionReader mat(raw, "material");
  const std::string model = [&] {
    if (!mat.has("model")) throw ValidationError("model", "missing in [material]");
    return mat.text("model");
  }();
  if (model == "quadratic")
    cfg.material.model = ModelKind::QuadraticNoSaturation;
  else if (model == "saturating")
    cfg.material.model = ModelKind::SaturatingLandis;
  else
    throw ValidationError("model", "expected quadratic or saturating");
  cfg.material.kinematic_strain =
      mat.has("kinematic_strain") ? mat.flag("kinematic_strain") : true;

  cfg.material.E0 = mat.require_number("E0");
  cfg.material.P0 = mat.require_number("P0");
  cfg.material.eps = mat.require_number("eps");
  cfg.material.E_Y = mat.require_number("E_Y");
  cfg.material.nu = mat.require_number("nu");
  cfg.material.H0 = mat.require_number("H0");
  cfg.material.m =
      cfg.material.model == ModelKind::SaturatingLandis ? mat.require_number("m")
      : mat.has("m")                                    ? mat.number("m")
                                                        : 2.0;
  cfg.material.S0 = cfg.material.kinematic_strain ? mat.require_number("S0")
                    : mat.has("S0")               ? mat.number("S0")
                                                  : 0.0;
  cfg.material.d31 = mat.has("d31") ? mat.number("d31") : 0.0;
  cfg.material.d33 = mat.has("d33") ? mat.number("d33") : 0.0;
  cfg.material.reg_eps =
      mat.has("reg_eps") ? mat.number("reg_eps") : cfg.material.P0 * 1e-6;
  try {
    cfg.material.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError("material", e.what());
  }

  const SectionReader geo(raw, "geometry");
  if (!geo.has("type")) throw ValidationError("type", "missing in [geometry]");
  cfg.geometry.type = geo.text("type");
  if (cfg.geometry.type == "point") {
    cfg.geometry.dim = geo.has("dim") ? geo.integer("dim") : 3;
    if (cfg.geometry.dim != 2 && cfg.geometry.dim != 3)
      throw ValidationError("dim", "must be 2 or 3");
  } else if (is_fem_type(cfg.geometry.type)) {
    if (geo.has("nx")) cfg.geometry.nx = geo.integer("nx");
    if (geo.has("ny")) cfg.geometry.ny = geo.integer("ny");
    if (geo.has("length")) cfg.geometry.length = geo.number("length");
    if (geo.has("height")) cfg.geometry.height = geo.number("height");
    if (cfg.geometry.nx < 1 || cfg.geometry.ny < 1)
      throw ValidationError("nx", "grid sizes must be positive");
    if (!(cfg.geometry.length > 0.0) || !(cfg.geometry.height > 0.0))
      throw ValidationError("length", "dimensions must be positive");
    if (cfg.geometry.type == "mesh") {
      if (!geo.has("path")) throw ValidationError("path", "missing in [geometry]");
      cfg.geometry.path = geo.text("path");
    }
    for (const char* side : {"left", "right", "top", "bottom"}) {
      if (!geo.has(side)) continue;
      const std::string roles = geo.text(side);
      parse_roles(roles);  // validate tokens now
      if (side == std::string("left")) cfg.geometry.left = roles;
      if (side == std::string("right")) cfg.geometry.right = roles;
      if (side == std::string("top")) cfg.geometry.top = roles;
      if (side == std::string("bottom")) cfg.geometry.bottom = roles;
    }
  } else {
    throw ValidationError("type", "unknown geometry '" + cfg.geometry.type + "'");
  }

  std::vector<int> ids = raw.schedule_ids;
  std::sort(ids.begin(), ids.end());
  if (ids.empty()) throw ValidationError("schedule", "no schedule segments");
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] != static_cast<int>(i) + 1)
      throw ValidationError("schedule", "segments must be numbered 1..N");
  for (int id : ids) {
    const SectionReader seg(raw, "schedule." + std::to_string(id));
    ScheduleSegment s;
    if (seg.has("steps")) s.steps = seg.integer("steps");
    if (s.steps < 1) throw ValidationError("steps", "must be >= 1");
    if (seg.has("E")) s.E = seg.number("E");
    if (seg.has("T")) s.T = seg.number("T");
    if (seg.has("phi0")) s.phi0 = seg.number("phi0");
    if (seg.has("tx")) s.tx = seg.number("tx");
    if (seg.has("ty")) s.ty = seg.number("ty");
    if (cfg.geometry.type == "point" && (s.phi0 || s.tx || s.ty))
      throw ValidationError("schedule", "phi0/tx/ty are fem-only keys");
    if (cfg.geometry.type != "point" && s.T)
      throw ValidationError("schedule", "T is a point-only key");
    if (cfg.geometry.type == "triangle" && s.phi0)
      throw ValidationError("schedule", "triangle geometry is driven by E");
    if (cfg.geometry.type == "mesh" && s.E)
      throw ValidationError("schedule", "mesh geometry is driven by phi0");
    cfg.schedule.push_back(s);
  }

  const SectionReader sol(raw, "solver");
  if (sol.has("tol")) cfg.solver.tol = sol.number("tol");
  if (sol.has("max_iter")) cfg.solver.max_iter = sol.integer("max_iter");
  if (!(cfg.solver.tol > 0.0)) throw ValidationError("tol", "must be positive");
  if (cfg.solver.max_iter < 1) throw ValidationError("max_iter", "must be >= 1");
  if (sol.has("seed")) cfg.seed = static_cast<unsigned>(sol.integer("seed"));

  const SectionReader outp(raw, "output");
  if (outp.has("csv")) cfg.output.csv = outp.text("csv");
  if (outp.has("vtk")) cfg.output.vtk_prefix = outp.text("vtk");
  if (outp.has("iteration_log")) cfg.output.iteration_log = outp.text("iteration_log");
  if (outp.has("vtk_every")) cfg.output.vtk_every = outp.integer("vtk_every");
  if (cfg.output.vtk_every < 1) throw ValidationError("vtk_every", "must be >= 1");

  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize(const RunConfig& cfg) {
  std::ostringstream o;
  o << "[material]\n";
  o << "model = "
    << (cfg.material.model == ModelKind::QuadraticNoSaturation ? "quadratic"
                                                               : "saturating")
    << "\n";
  o << "kinematic_strain = " << (cfg.material.kinematic_strain ? "on" : "off")
    << "\n";
  o << "E0 = " << fmt(cfg.material.E0) << "\n";
  o << "P0 = " << fmt(cfg.material.P0) << "\n";
  o << "S0 = " << fmt(cfg.material.S0) << "\n";
  o << "m = " << fmt(cfg.material.m) << "\n";
  o << "eps = " << fmt(cfg.material.eps) << "\n";
  o << "E_Y = " << fmt(cfg.material.E_Y) << "\n";
  o << "nu = " << fmt(cfg.material.nu) << "\n";
  o << "d31 = " << fmt(cfg.material.d31) << "\n";
  o << "d33 = " << fmt(cfg.material.d33) << "\n";
  o << "H0 = " << fmt(cfg.material.H0) << "\n";
  o << "reg_eps = " << fmt(cfg.material.reg_eps) << "\n";
  o << "\n[geometry]\n";
  o << "type = " << cfg.geometry.type << "\n";
  if (cfg.geometry.type == "point") {
    o << "dim = " << cfg.geometry.dim << "\n";
  } else {
    o << "nx = " << cfg.geometry.nx << "\n";
    o << "ny = " << cfg.geometry.ny << "\n";
    o << "length = " << fmt(cfg.geometry.length) << "\n";
    o << "height = " << fmt(cfg.geometry.height) << "\n";
    if (!cfg.geometry.path.empty()) o << "path = " << cfg.geometry.path << "\n";
    if (!cfg.geometry.left.empty()) o << "left = " << cfg.geometry.left << "\n";
    if (!cfg.geometry.right.empty()) o << "right = " << cfg.geometry.right << "\n";
    if (!cfg.geometry.top.empty()) o << "top = " << cfg.geometry.top << "\n";
    if (!cfg.geometry.bottom.empty())
      o << "bottom = " << cfg.geometry.bottom << "\n";
  }
  for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
    const ScheduleSegment& s = cfg.schedule[i];
    o << "\n[schedule." << i + 1 << "]\n";
    o << "steps = " << s.steps << "\n";
    if (s.E) o << "E = " << fmt(*s.E) << "\n";
    if (s.T) o << "T = " << fmt(*s.T) << "\n";
    if (s.phi0) o << "phi0 = " << fmt(*s.phi0) << "\n";
    if (s.tx) o << "tx = " << fmt(*s.tx) << "\n";
    if (s.ty) o << "ty = " << fmt(*s.ty) << "\n";
  }
  o << "\n[solver]\n";
  o << "tol = " << fmt(cfg.solver.tol) << "\n";
  o << "max_iter = " << cfg.solver.max_iter << "\n";
  o << "seed = " << cfg.seed << "\n";
  o << "\n[output]\n";
  if (!cfg.output.csv.empty()) o << "csv = " << cfg.output.csv << "\n";
  if (!cfg.output.vtk_prefix.empty()) o << "vtk = " << cfg.output.vtk_prefix << "\n";
  if (!cfg.output.iteration_log.empty())
    o << "iteration_log = " << cfg.output.iteration_log << "\n";
  o << "vtk_every = " << cfg.output.vtk_every << "\n";
  return o.str();
}

std::vector<double> schedule_times(const RunConfig& cfg) {
  std::vector<double> t;
  for (std::size_t seg = 0; seg < cfg.schedule.size(); ++seg)
    for (int k = 1; k <= cfg.schedule[seg].steps; ++k)
      t.push_back(static_cast<double>(seg) +
                  static_cast<double>(k) / cfg.schedule[seg].steps);
  return t;
}

std::vector<PointLoadStep> expand_point_schedule(const RunConfig& cfg) {
  const int dim = cfg.geometry.dim;
  const int nv = voigt_size(dim);
  std::vector<PointLoadStep> steps;
  double e_prev = 0.0, t_prev = 0.0, time = 0.0;
  for (const ScheduleSegment& s : cfg.schedule) {
    const double e_end = s.E.value_or(e_prev);
    const double t_end = s.T.value_or(t_prev);
    for (int k = 1; k <= s.steps; ++k) {
      const double r = static_cast<double>(k) / s.steps;
      PointLoadStep ls;
      ls.t = time + r;
      ls.E_app = Eigen::VectorXd::Zero(dim);
      ls.E_app[dim - 1] = e_prev + r * (e_end - e_prev);
      ls.T_app = Eigen::VectorXd::Zero(nv);
      ls.T_app[dim - 1] = t_prev + r * (t_end - t_prev);
      steps.push_back(ls);
    }
    e_prev = e_end;
    t_prev = t_end;
    time += 1.0;
  }
  return steps;
}

std::vector<LoadData> expand_fe_schedule(const RunConfig& cfg) {
  // conversion from an axial-field target to the electrode scale
  double e_to_phi = 0.0;
  if (cfg.geometry.type == "square")
    e_to_phi = -cfg.geometry.height;
  else if (cfg.geometry.type == "beam")
    e_to_phi = -cfg.geometry.length;
  else if (cfg.geometry.type == "triangle")
    e_to_phi = 1.0;

  std::vector<LoadData> loads;
  double phi_prev = 0.0, tx_prev = 0.0, ty_prev = 0.0;
  for (const ScheduleSegment& s : cfg.schedule) {
    double phi_end = phi_prev;
    if (s.phi0)
      phi_end = *s.phi0;
    else if (s.E)
      phi_end = *s.E * e_to_phi;
    const double tx_end = s.tx.value_or(tx_prev);
    const double ty_end = s.ty.value_or(ty_prev);
    for (int k = 1; k <= s.steps; ++k) {
      const double r = static_cast<double>(k) / s.steps;
      LoadData ld;
      ld.phi_scale = phi_prev + r * (phi_end - phi_prev);
      ld.traction = {tx_prev + r * (tx_end - tx_prev),
                     ty_prev + r * (ty_end - ty_prev)};
      loads.push_back(ld);
    }
    phi_prev = phi_end;
    tx_prev = tx_end;
    ty_prev = ty_end;
  }
  return loads;
}

std::unique_ptr<FeSystem> build_fe_system(const RunConfig& cfg) {
  const GeometrySpec& g = cfg.geometry;
  Mesh mesh;
  std::vector<FacetBc> bc;
  auto side_bc = [&](const std::string& spec, const std::string& fallback) {
    return parse_roles(spec.empty() ? fallback : spec);
  };
  if (g.type == "square") {
    mesh = make_rect_mesh(g.length, g.height, g.nx, g.ny);
    std::map<std::string, FacetBc> by_side;
    by_side["left"] = side_bc(g.left, "rollerx,ins");
    by_side["right"] = side_bc(g.right, "ins");
    by_side["bottom"] = side_bc(g.bottom, "rollery,ground");
    by_side["top"] = side_bc(g.top, "el");
    for (const auto& f : mesh.boundary) bc.push_back(by_side[f.tag]);
  } else if (g.type == "beam") {
    mesh = make_rect_mesh(g.length, g.height, g.nx, g.ny, 0.0, -g.height / 2.0);
    std::map<std::string, FacetBc> by_side;
    by_side["left"] = side_bc(g.left, "rollerx,piny,ground");
    by_side["right"] = side_bc(g.right, "el,trac");
    by_side["top"] = side_bc(g.top, "ins");
    by_side["bottom"] = side_bc(g.bottom, "ins");
    for (const auto& f : mesh.boundary) bc.push_back(by_side[f.tag]);
  } else if (g.type == "triangle") {
    mesh = make_single_triangle(g.length);
    bc.resize(3);
    bc[0].roller_y = true;  // bottom, grounded electrode is natural
    bc[1].electrode = true;  // hypotenuse carries the affine potential data
    bc[1].phi_by = -1.0;
    bc[2].roller_x = true;  // left
    bc[2].insulated = true;
  } else if (g.type == "mesh") {
    mesh = read_mesh(g.path);
    bc = bc_from_tags(mesh);
  } else {
    throw ValidationError("type", "not a fem geometry: " + g.type);
  }
  return std::make_unique<FeSystem>(std::move(mesh), cfg.material, std::move(bc));
}

namespace {

void write_point_csv(const std::string& path,
                     const std::vector<PointCurveRow>& rows) {
  ensure_parent_dir(path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << "step,t,E3,T33,D3,P3,S33,absP\n";
  for (const PointCurveRow& r : rows)
    out << r.step << "," << fmt(r.t) << "," << fmt(r.E_ax) << "," << fmt(r.T_ax)
        << "," << fmt(r.D_ax) << "," << fmt(r.P_ax) << "," << fmt(r.S_ax) << ","
        << fmt(r.absP) << "\n";
}

void write_iteration_log(const std::string& path,
                         const std::vector<IterationRecord>& log) {
  ensure_parent_dir(path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << "step,iter,residual,alpha\n";
  for (const IterationRecord& r : log)
    out << r.step << "," << r.iteration << "," << fmt(r.residual) << ","
        << fmt(r.alpha) << "\n";
}

RunOutcome run_point_mode(const RunConfig& cfg, std::ostream* log) {
  PointExperiment exp;
  exp.params = cfg.material;
  exp.dim = cfg.geometry.dim;
  exp.steps = expand_point_schedule(cfg);
  NewtonOptions opt;
  opt.tol = cfg.solver.tol;
  opt.max_iter = cfg.solver.max_iter;
  std::vector<IterationRecord> iters;
  const PointRunResult res = run_point(exp, opt, &iters);
  if (!cfg.output.csv.empty()) write_point_csv(cfg.output.csv, res.rows);
  if (!cfg.output.iteration_log.empty())
    write_iteration_log(cfg.output.iteration_log, iters);
  if (log)
    *log << "point run complete: " << res.rows.size() << " steps, final |P| = "
         << fmt(res.rows.empty() ? 0.0 : res.rows.back().absP) << "\n";
  return {0, ""};
}

RunOutcome run_fem_mode(const RunConfig& cfg, std::ostream* log) {
  std::unique_ptr<FeSystem> sys = build_fe_system(cfg);
  const std::vector<LoadData> loads = expand_fe_schedule(cfg);
  Schedule sched;
  sched.times = schedule_times(cfg);
  for (const LoadData& ld : loads) sched.loads.push_back(sys->assemble_load(ld));

  NewtonOptions opt;
  opt.tol = cfg.solver.tol;
  opt.max_iter = cfg.solver.max_iter;

  std::ofstream csv;
  if (!cfg.output.csv.empty()) {
    ensure_parent_dir(cfg.output.csv);
    csv.open(cfg.output.csv);
    if (!csv) throw std::runtime_error("cannot open output file: " + cfg.output.csv);
    csv << "step,t,phi0,tx,ty,min_absP,max_absP,tip_uy\n";
  }

  std::vector<IterationRecord> iters;
  auto on_step = [&](int step, const Eigen::VectorXd& w, const SolveReport& rep) {
    if (log)
      *log << "step " << step << ": " << rep.iterations << " iterations, residual "
           << fmt(rep.residual_norms.back()) << "\n";
    const bool want_vtk = !cfg.output.vtk_prefix.empty() &&
                          (step % cfg.output.vtk_every == 0);
    if (want_vtk || csv.is_open()) {
      const CellFields f = postprocess(*sys, w);
      if (want_vtk) {
        char suffix[32];
        std::snprintf(suffix, sizeof suffix, "_%04d.vtk", step);
        ensure_parent_dir(cfg.output.vtk_prefix + suffix);
        write_vtk(cfg.output.vtk_prefix + suffix, sys->mesh(), f);
      }
      if (csv.is_open()) {
        const LoadData& ld = loads[step - 1];
        // tip deflection: max-x vertex, vertical displacement
        int tip = 0;
        for (int v = 0; v < sys->mesh().num_vertices(); ++v)
          if (sys->mesh().vertices(v, 0) > sys->mesh().vertices(tip, 0)) tip = v;
        csv << step << "," << fmt(sched.times[step - 1]) << ","
            << fmt(ld.phi_scale) << "," << fmt(ld.traction[0]) << ","
            << fmt(ld.traction[1]) << "," << fmt(f.abs_p.minCoeff()) << ","
            << fmt(f.abs_p.maxCoeff()) << "," << fmt(f.u(tip, 1)) << "\n";
      }
    }
  };

  const Eigen::VectorXd w0 = Eigen::VectorXd::Zero(sys->num_dofs());
  run_schedule(*sys, w0, sched, opt, on_step, &iters);
  if (!cfg.output.iteration_log.empty())
    write_iteration_log(cfg.output.iteration_log, iters);
  if (log) *log << "fem run complete: " << sched.size() << " steps\n";
  return {0, ""};
}

}  // namespace

RunOutcome run(const RunConfig& cfg, std::ostream* log) {
  try {
    if (cfg.geometry.type == "point") return run_point_mode(cfg, log);
    return run_fem_mode(cfg, log);
  } catch (const ParseError& e) {
    return {2, e.what()};
  } catch (const ValidationError& e) {
    return {2, e.what()};
  } catch (const std::invalid_argument& e) {
    return {2, e.what()};
  } catch (const std::exception& e) {
    return {3, e.what()};
  }
}

}  // namespace ferro

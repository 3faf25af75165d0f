#include "ekv/config.hpp"

#include "ekv/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace ekv {

namespace {

[[noreturn]] void fail_at(ErrorKind kind, const std::string& msg, const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  if (m.is_null()) throw ConfigError(kind, msg);
  throw ConfigError(kind, msg, m.line + 1, m.column + 1);
}

[[noreturn]] void invalid(const std::string& msg) { throw ConfigError(ErrorKind::ValidationError, msg); }

// A YAML mapping whose keys are consumed one by one; leftovers are errors.
class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) fail_at(ErrorKind::ParseError, path_ + " must be a mapping", node_);
  }

  bool has(const std::string& key) const { return node_ && node_.IsMap() && node_[key]; }

  YAML::Node raw(const std::string& key) {
    seen_.insert(key);
    if (!node_ || !node_.IsMap()) return YAML::Node();
    return node_[key];
  }

  double num(const std::string& key, double def) {
    YAML::Node n = raw(key);
    if (!n || n.IsNull()) return def;
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      fail_at(ErrorKind::ParseError, name(key) + " must be a number", n);
    }
  }

  int integer(const std::string& key, int def) {
    YAML::Node n = raw(key);
    if (!n || n.IsNull()) return def;
    try {
      return n.as<int>();
    } catch (const YAML::Exception&) {
      fail_at(ErrorKind::ParseError, name(key) + " must be an integer", n);
    }
  }

  bool boolean(const std::string& key, bool def) {
    YAML::Node n = raw(key);
    if (!n || n.IsNull()) return def;
    try {
      return n.as<bool>();
    } catch (const YAML::Exception&) {
      fail_at(ErrorKind::ParseError, name(key) + " must be true or false", n);
    }
  }

  std::string str(const std::string& key, const std::string& def) {
    YAML::Node n = raw(key);
    if (!n || n.IsNull()) return def;
    if (!n.IsScalar()) fail_at(ErrorKind::ParseError, name(key) + " must be a string", n);
    return n.as<std::string>();
  }

  Vec2 vec2(const std::string& key, const Vec2& def) {
    YAML::Node n = raw(key);
    if (!n || n.IsNull()) return def;
    if (!n.IsSequence() || n.size() != 2) fail_at(ErrorKind::ParseError, name(key) + " must be a list of 2 numbers", n);
    try {
      return Vec2(n[0].as<double>(), n[1].as<double>());
    } catch (const YAML::Exception&) {
      fail_at(ErrorKind::ParseError, name(key) + " must be a list of 2 numbers", n);
    }
  }

  Mat2 mat2(const std::string& key, const Mat2& def) {
    YAML::Node n = raw(key);
    if (!n || n.IsNull()) return def;
    if (!n.IsSequence() || n.size() != 2 || !n[0].IsSequence() || !n[1].IsSequence() || n[0].size() != 2 ||
        n[1].size() != 2)
      fail_at(ErrorKind::ParseError, name(key) + " must be a 2x2 list of rows", n);
    Mat2 A;
    try {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) A(i, j) = n[i][j].as<double>();
    } catch (const YAML::Exception&) {
      fail_at(ErrorKind::ParseError, name(key) + " must hold numbers", n);
    }
    return A;
  }

  Section sub(const std::string& key) { return Section(raw(key), name(key)); }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const std::string k = kv.first.as<std::string>();
      if (!seen_.count(k)) fail_at(ErrorKind::ValidationError, "unknown key " + name(k), kv.first);
    }
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

struct ParamDefault {
  const char* name;
  double value;
};

const std::vector<ParamDefault>& material_defaults(const std::string& name) {
  static const std::vector<ParamDefault> nh = {{"K", 1.0},     {"G", 0.5},    {"c0", 1.0},
                                               {"kappa", 0.01}, {"mu1", 0.01}, {"muq", 0.001}};
  static const std::vector<ParamDefault> sma = {{"K_A", 1.0},   {"G_A", 0.5},     {"K_M", 1.0},
                                                {"G_M", 0.3},   {"offset_M", 0.05}, {"c0", 1.0},
                                                {"theta_c", 1.0}, {"width", 0.1},   {"kappa", 0.01},
                                                {"mu1", 0.01},  {"muq", 0.001}};
  static const std::vector<ParamDefault> vpt = {{"K", 1.0},      {"G", 0.5},     {"c0", 1.0},  {"width", 0.02},
                                                {"kappa", 0.01}, {"mu1", 0.01}, {"muq", 0.001}};
  if (name == "neo_hookean_thermal" || name == "neo_hookean_multiplicative") return nh;
  if (name == "sma_two_phase") return sma;
  if (name == "volumetric_pt") return vpt;
  invalid("unknown material '" + name + "' (known: neo_hookean_thermal, neo_hookean_multiplicative, "
          "sma_two_phase, volumetric_pt)");
}

bool uses_alpha(const std::string& name) {
  return name == "neo_hookean_thermal" || name == "neo_hookean_multiplicative";
}

const std::vector<ParamDefault>& alpha_defaults(const std::string& kind) {
  static const std::vector<ParamDefault> bounded = {{"alpha_max", 0.01}, {"theta0", 1.0}};
  static const std::vector<ParamDefault> quadratic = {{"a", 0.01}};
  static const std::vector<ParamDefault> zero = {};
  if (kind == "bounded") return bounded;
  if (kind == "quadratic") return quadratic;
  if (kind == "zero") return zero;
  invalid("unknown material.alpha.kind '" + kind + "' (known: bounded, quadratic, zero)");
}

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <class E>
struct Names {
  std::vector<std::pair<E, const char*>> table;
  const char* name(E e) const {
    for (const auto& [k, n] : table)
      if (k == e) return n;
    return "?";
  }
  E parse(const std::string& s, const std::string& key) const {
    std::string known;
    for (const auto& [k, n] : table) {
      if (s == n) return k;
      known += (known.empty() ? "" : ", ") + std::string(n);
    }
    invalid(key + " '" + s + "' not recognised (known: " + known + ")");
  }
};

const Names<BcMode> kBc{{{BcMode::Periodic, "periodic"}, {BcMode::SlipRectangle, "slip"}}};
const Names<DomainShape> kShape{{{DomainShape::Rectangle, "rectangle"}, {DomainShape::Disk, "disk"}}};
const Names<VelocityInit> kVel{{{VelocityInit::Zero, "zero"},
                                {VelocityInit::ShearWave, "shear_wave"},
                                {VelocityInit::TaylorGreen, "taylor_green"},
                                {VelocityInit::Translation, "translation"},
                                {VelocityInit::Compression, "compression"}}};
const Names<PrescribedVelocity> kPresc{
    {{PrescribedVelocity::None, "none"}, {PrescribedVelocity::RigidRotation, "rigid_rotation"}}};
const Names<TimeScheme> kScheme{{{TimeScheme::ImexArs232, "imex_ars232"},
                                 {TimeScheme::RK4, "rk4"},
                                 {TimeScheme::ForwardEuler, "forward_euler"}}};

const char* kEdgeNames[4] = {"left", "right", "bottom", "top"};

void apply_override(YAML::Node& root, const std::string& ov) {
  const auto eq = ov.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError(ErrorKind::ParseError, "override '" + ov + "' must have the form key.path=value");
  const std::string path = ov.substr(0, eq), value = ov.substr(eq + 1);
  std::vector<std::string> keys;
  std::stringstream ss(path);
  for (std::string k; std::getline(ss, k, '.');) {
    if (k.empty()) throw ConfigError(ErrorKind::ParseError, "override '" + ov + "' has an empty key");
    keys.push_back(k);
  }
  YAML::Node v;
  try {
    v = YAML::Load(value);
  } catch (const YAML::Exception& e) {
    throw ConfigError(ErrorKind::ParseError, "override '" + ov + "': " + e.msg);
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  YAML::Node cur = root;
  for (size_t i = 0; i + 1 < keys.size(); ++i) {
    YAML::Node next = cur[keys[i]];
    if (!next || next.IsNull()) {
      cur[keys[i]] = YAML::Node(YAML::NodeType::Map);
      next = cur[keys[i]];
    } else if (!next.IsMap()) {
      throw ConfigError(ErrorKind::ParseError, "override '" + ov + "': " + keys[i] + " is not a section");
    }
    cur.reset(next);
  }
  cur[keys.back()] = v;
}

MaterialSpec read_material(Section& s) {
  MaterialSpec m;
  m.name = s.str("name", m.name);
  for (const auto& p : material_defaults(m.name)) m.params[p.name] = s.num(p.name, p.value);
  if (uses_alpha(m.name)) {
    Section a = s.sub("alpha");
    m.alpha_kind = a.str("kind", m.alpha_kind);
    for (const auto& p : alpha_defaults(m.alpha_kind)) m.alpha_params[p.name] = a.num(p.name, p.value);
    a.finish();
  } else {
    m.alpha_kind.clear();
  }
  if (m.name == "volumetric_pt") {
    YAML::Node t = s.raw("transitions");
    if (t && !t.IsNull()) {
      if (!t.IsSequence()) fail_at(ErrorKind::ParseError, "material.transitions must be a list", t);
      for (size_t i = 0; i < t.size(); ++i) {
        Section e(t[i], "material.transitions[" + std::to_string(i) + "]");
        const double J = e.num("J", 0.8), drop = e.num("drop", 0.1);
        e.finish();
        m.transitions.emplace_back(J, drop);
      }
    } else {
      m.transitions = {{0.8, 0.1}};
    }
  }
  return m;
}

void validate_material(const MaterialSpec& m) {
  for (const auto& [k, v] : m.params) {
    if (!std::isfinite(v)) invalid("material." + k + " must be finite");
    if ((k == "kappa" || k == "mu1" || k == "muq") && v < 0.0) invalid("material." + k + " must be nonnegative");
    if ((k == "c0" || k == "width") && !(v > 0.0)) invalid("material." + k + " must be positive");
  }
  if (m.alpha_kind == "bounded" && !(m.alpha_params.at("theta0") > 0.0))
    invalid("material.alpha.theta0 must be positive");
  for (const auto& [J, d] : m.transitions)
    if (!(J > 0.0)) invalid("material.transitions J must be positive");
}

}  // namespace

std::vector<std::string> material_names() {
  return {"neo_hookean_thermal", "neo_hookean_multiplicative", "sma_two_phase", "volumetric_pt"};
}

MaterialSpec complete_material_spec(MaterialSpec spec) {
  const auto& defs = material_defaults(spec.name);
  for (const auto& [k, v] : spec.params) {
    bool ok = false;
    for (const auto& p : defs) ok = ok || k == p.name;
    if (!ok) invalid("unknown key material." + k);
  }
  for (const auto& p : defs) spec.params.emplace(p.name, p.value);
  if (uses_alpha(spec.name)) {
    if (spec.alpha_kind.empty()) spec.alpha_kind = "bounded";
    const auto& ad = alpha_defaults(spec.alpha_kind);
    for (const auto& [k, v] : spec.alpha_params) {
      bool ok = false;
      for (const auto& p : ad) ok = ok || k == p.name;
      if (!ok) invalid("unknown key material.alpha." + k);
    }
    for (const auto& p : ad) spec.alpha_params.emplace(p.name, p.value);
  } else {
    spec.alpha_kind.clear();
    spec.alpha_params.clear();
  }
  if (spec.name == "volumetric_pt" && spec.transitions.empty()) spec.transitions = {{0.8, 0.1}};
  validate_material(spec);
  return spec;
}

MaterialPtr<2> make_material(const MaterialSpec& in, double q) {
  const MaterialSpec s = complete_material_spec(in);
  const auto& p = s.params;
  DissipationLaw law;
  law.mu1 = p.at("mu1");
  law.muq = p.at("muq");
  law.q = q;
  const double kappa = p.at("kappa");
  if (uses_alpha(s.name)) {
    ScalarLaw alpha = s.alpha_kind == "bounded"     ? bounded_expansion(s.alpha_params.at("alpha_max"),
                                                                        s.alpha_params.at("theta0"))
                      : s.alpha_kind == "quadratic" ? quadratic_expansion(s.alpha_params.at("a"))
                                                    : zero_law();
    if (s.name == "neo_hookean_thermal")
      return neo_hookean_thermal<2>(p.at("K"), p.at("G"), p.at("c0"), alpha, kappa, law);
    return neo_hookean_multiplicative<2>(p.at("K"), p.at("G"), p.at("c0"), alpha, kappa, law);
  }
  if (s.name == "sma_two_phase") {
    typename SmaTwoPhase<2>::Phase A{p.at("K_A"), p.at("G_A"), 0.0};
    typename SmaTwoPhase<2>::Phase M{p.at("K_M"), p.at("G_M"), p.at("offset_M")};
    return sma_two_phase<2>(A, M, p.at("c0"), logistic_ramp(p.at("theta_c"), p.at("width")), kappa, law);
  }
  std::vector<typename VolumetricPT<2>::Transition> tr;
  for (const auto& [J, d] : s.transitions) tr.push_back({J, d});
  return volumetric_pt<2>(p.at("K"), p.at("G"), tr, p.at("width"), p.at("c0"), kappa, law);
}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(ErrorKind::ParseError, e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (root && !root.IsNull() && !root.IsMap())
    fail_at(ErrorKind::ParseError, "scenario file must be a mapping of sections", root);
  for (const auto& ov : overrides) apply_override(root, ov);

  RunConfig cfg;
  cfg.overrides = overrides;
  Scenario& sc = cfg.scenario;
  Section top(root, "");
  sc.name = top.str("name", sc.name);
  cfg.seed = static_cast<std::uint64_t>(top.integer("seed", 1));

  Section dom = top.sub("domain");
  sc.domain.Lx = dom.num("Lx", 1.0);
  sc.domain.Ly = dom.num("Ly", 1.0);
  sc.domain.bc = kBc.parse(dom.str("bc", "periodic"), "domain.bc");
  sc.domain.shape = kShape.parse(dom.str("shape", "rectangle"), "domain.shape");
  dom.finish();

  Section res = top.sub("resolution");
  sc.k = res.integer("k", 8);
  sc.n = res.integer("n", 64);
  res.finish();

  Section reg = top.sub("regularization");
  RegularizationParams& rp = sc.reg;
  rp.lambda = reg.num("lambda", rp.lambda);
  rp.epsilon = reg.num("epsilon", rp.epsilon);
  rp.nu = reg.num("nu", rp.nu);
  rp.nu_flat = reg.num("nu_flat", sc.domain.bc == BcMode::SlipRectangle ? 1.0 : 0.0);
  rp.p = reg.num("p", rp.p);
  rp.q = reg.num("q", rp.q);
  reg.finish();

  Section mat = top.sub("material");
  cfg.material = read_material(mat);
  mat.finish();

  Section loads = top.sub("loads");
  sc.loads.g = loads.vec2("g", Vec2::Zero());
  {
    Section tr = loads.sub("traction");
    for (int e = 0; e < 4; ++e) sc.loads.traction[e] = tr.vec2(kEdgeNames[e], Vec2::Zero());
    tr.finish();
    Section hf = loads.sub("heat_flux");
    sc.loads.beta = hf.num("beta", 0.0);
    sc.loads.theta_ext = hf.num("theta_ext", 0.0);
    hf.finish();
  }
  loads.finish();

  Section init = top.sub("initial");
  InitialData& in = sc.init;
  in.rho_R = init.num("rho_R", in.rho_R);
  in.F0 = init.mat2("F0", in.F0);
  in.velocity = kVel.parse(init.str("velocity", "zero"), "initial.velocity");
  in.v_amplitude = init.num("v_amplitude", in.v_amplitude);
  in.v_mode = init.integer("v_mode", in.v_mode);
  in.translation = init.vec2("translation", in.translation);
  in.theta_mean = init.num("theta_mean", in.theta_mean);
  in.theta_amplitude = init.num("theta_amplitude", in.theta_amplitude);
  in.theta_mode = init.integer("theta_mode", in.theta_mode);
  init.finish();

  Section kin = top.sub("kinematics");
  sc.prescribed = kPresc.parse(kin.str("prescribed", "none"), "kinematics.prescribed");
  sc.omega = kin.num("omega", 0.0);
  kin.finish();

  Section integ = top.sub("integrator");
  IntegratorSettings& is = sc.integ;
  is.scheme = kScheme.parse(integ.str("scheme", "imex_ars232"), "integrator.scheme");
  is.dt = integ.num("dt", is.dt);
  is.dt_min = integ.num("dt_min", is.dt_min);
  is.adaptive = integ.boolean("adaptive", is.adaptive);
  is.tol = integ.num("tol", is.tol);
  is.t_end = integ.num("t_end", is.t_end);
  is.solver_tol = integ.num("solver_tol", is.solver_tol);
  is.solver_max_iter = integ.integer("solver_max_iter", is.solver_max_iter);
  is.mass_refactor = integ.num("mass_refactor", is.mass_refactor);
  is.max_wall_seconds = integ.num("max_wall_seconds", is.max_wall_seconds);
  integ.finish();

  Section tr = top.sub("transport");
  sc.track_inverse_det = tr.boolean("track_inverse_det", false);
  sc.track_return_map = tr.boolean("track_return_map", false);
  tr.finish();

  Section out = top.sub("output");
  cfg.output.ledger_every = out.integer("ledger_every", 1);
  cfg.output.snapshot_every = out.integer("snapshot_every", 0);
  cfg.output.vtk = out.boolean("vtk", false);
  out.finish();

  top.finish();

  // validation
  if (sc.domain.shape != DomainShape::Rectangle)
    throw ConfigError(ErrorKind::UnsupportedDomain, "domain.shape: only rectangle domains are implemented");
  if (!(sc.domain.Lx > 0.0) || !(sc.domain.Ly > 0.0)) invalid("domain.Lx and domain.Ly must be positive");
  if (sc.k < 1 || sc.k > kMaxGalerkinOrder)
    invalid("resolution.k must lie in [1, " + std::to_string(kMaxGalerkinOrder) + "]");
  if (sc.n < 4 || sc.n > kMaxGridNodes) invalid("resolution.n must lie in [4, " + std::to_string(kMaxGridNodes) + "]");
  if (!(rp.lambda > 0.0 && rp.lambda < 1.0)) invalid("regularization.lambda must lie in (0, 1)");
  if (rp.epsilon < 0.0) invalid("regularization.epsilon must be nonnegative");
  if (rp.nu < 0.0 || rp.nu_flat < 0.0) invalid("regularization.nu and nu_flat must be nonnegative");
  if (!(std::min(rp.p, rp.q) > 2.0)) invalid("regularization: min(p, q) must exceed the dimension 2");
  if (sc.domain.bc == BcMode::Periodic && rp.nu_flat != 0.0)
    invalid("regularization.nu_flat must be 0 on the periodic box (no boundary)");
  validate_material(cfg.material);
  for (int e = 0; e < 4; ++e)
    if (std::abs(sc.loads.traction[e].dot(edge_normal(e))) > 0.0)
      invalid(std::string("loads.traction.") + kEdgeNames[e] + ": f must satisfy f.n = 0");
  if (sc.domain.bc == BcMode::Periodic) {
    for (int e = 0; e < 4; ++e)
      if (sc.loads.traction[e] != Vec2::Zero()) invalid("loads.traction requires domain.bc = slip");
    if (sc.loads.beta != 0.0) invalid("loads.heat_flux requires domain.bc = slip");
  }
  if (sc.loads.beta < 0.0) invalid("loads.heat_flux.beta must be nonnegative");
  if (!(in.rho_R > 0.0)) invalid("initial.rho_R must be positive");
  if (!(det<2, double>(in.F0) > 0.0)) invalid("initial.F0 must have positive determinant");
  if (in.theta_mean - std::abs(in.theta_amplitude) < 0.0)
    invalid("initial temperature must be nonnegative (theta_mean >= |theta_amplitude|)");
  if (in.v_mode < 1 || in.theta_mode < 0) invalid("initial.v_mode must be >= 1 and theta_mode >= 0");
  if (sc.domain.bc != BcMode::Periodic &&
      (in.velocity == VelocityInit::ShearWave || in.velocity == VelocityInit::Translation))
    invalid(std::string("initial.velocity = ") + kVel.name(in.velocity) + " requires domain.bc = periodic");
  if (!(is.dt > 0.0) || !(is.dt_min > 0.0)) invalid("integrator.dt and dt_min must be positive");
  if (is.t_end < 0.0) invalid("integrator.t_end must be nonnegative");
  if (!(is.tol > 0.0) || !(is.solver_tol > 0.0) || is.solver_max_iter < 1)
    invalid("integrator tolerances must be positive");
  if (cfg.output.ledger_every < 1 || cfg.output.snapshot_every < 0)
    invalid("output.ledger_every must be >= 1 and snapshot_every >= 0");

  sc.material = make_material(cfg.material, rp.q);
  return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream f(path);
  if (!f) throw ConfigError(ErrorKind::IOError, "cannot read scenario file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  RunConfig cfg = parse_config(ss.str(), overrides);
  cfg.scenario_path = path;
  return cfg;
}

std::string echo_config(const RunConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  YAML::Emitter e;
  auto num = [&](const char* k, double v) { e << YAML::Key << k << YAML::Value << fmt(v); };
  auto vec = [&](const char* k, const Vec2& v) {
    e << YAML::Key << k << YAML::Value << YAML::Flow << YAML::BeginSeq << fmt(v.x()) << fmt(v.y()) << YAML::EndSeq;
  };
  e << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << sc.name;
  e << YAML::Key << "seed" << YAML::Value << cfg.seed;

  e << YAML::Key << "domain" << YAML::Value << YAML::BeginMap;
  num("Lx", sc.domain.Lx);
  num("Ly", sc.domain.Ly);
  e << YAML::Key << "bc" << YAML::Value << kBc.name(sc.domain.bc);
  e << YAML::Key << "shape" << YAML::Value << kShape.name(sc.domain.shape);
  e << YAML::EndMap;

  e << YAML::Key << "resolution" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "k" << YAML::Value << sc.k << YAML::Key << "n" << YAML::Value << sc.n;
  e << YAML::EndMap;

  e << YAML::Key << "material" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << cfg.material.name;
  for (const auto& p : material_defaults(cfg.material.name)) num(p.name, cfg.material.params.at(p.name));
  if (uses_alpha(cfg.material.name)) {
    e << YAML::Key << "alpha" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "kind" << YAML::Value << cfg.material.alpha_kind;
    for (const auto& p : alpha_defaults(cfg.material.alpha_kind)) num(p.name, cfg.material.alpha_params.at(p.name));
    e << YAML::EndMap;
  }
  if (cfg.material.name == "volumetric_pt") {
    e << YAML::Key << "transitions" << YAML::Value << YAML::BeginSeq;
    for (const auto& [J, d] : cfg.material.transitions) {
      e << YAML::Flow << YAML::BeginMap;
      num("J", J);
      num("drop", d);
      e << YAML::EndMap;
    }
    e << YAML::EndSeq;
  }
  e << YAML::EndMap;

  e << YAML::Key << "regularization" << YAML::Value << YAML::BeginMap;
  num("lambda", sc.reg.lambda);
  num("epsilon", sc.reg.epsilon);
  num("nu", sc.reg.nu);
  num("nu_flat", sc.reg.nu_flat);
  num("p", sc.reg.p);
  num("q", sc.reg.q);
  e << YAML::EndMap;

  e << YAML::Key << "loads" << YAML::Value << YAML::BeginMap;
  vec("g", sc.loads.g);
  e << YAML::Key << "traction" << YAML::Value << YAML::BeginMap;
  for (int k = 0; k < 4; ++k) vec(kEdgeNames[k], sc.loads.traction[k]);
  e << YAML::EndMap;
  e << YAML::Key << "heat_flux" << YAML::Value << YAML::BeginMap;
  num("beta", sc.loads.beta);
  num("theta_ext", sc.loads.theta_ext);
  e << YAML::EndMap;
  e << YAML::EndMap;

  const InitialData& in = sc.init;
  e << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
  num("rho_R", in.rho_R);
  e << YAML::Key << "F0" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (int i = 0; i < 2; ++i) e << YAML::Flow << YAML::BeginSeq << fmt(in.F0(i, 0)) << fmt(in.F0(i, 1)) << YAML::EndSeq;
  e << YAML::EndSeq;
  e << YAML::Key << "velocity" << YAML::Value << kVel.name(in.velocity);
  num("v_amplitude", in.v_amplitude);
  e << YAML::Key << "v_mode" << YAML::Value << in.v_mode;
  vec("translation", in.translation);
  num("theta_mean", in.theta_mean);
  num("theta_amplitude", in.theta_amplitude);
  e << YAML::Key << "theta_mode" << YAML::Value << in.theta_mode;
  e << YAML::EndMap;

  e << YAML::Key << "kinematics" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "prescribed" << YAML::Value << kPresc.name(sc.prescribed);
  num("omega", sc.omega);
  e << YAML::EndMap;

  const IntegratorSettings& is = sc.integ;
  e << YAML::Key << "integrator" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "scheme" << YAML::Value << kScheme.name(is.scheme);
  num("dt", is.dt);
  num("dt_min", is.dt_min);
  e << YAML::Key << "adaptive" << YAML::Value << is.adaptive;
  num("tol", is.tol);
  num("t_end", is.t_end);
  num("solver_tol", is.solver_tol);
  e << YAML::Key << "solver_max_iter" << YAML::Value << is.solver_max_iter;
  num("mass_refactor", is.mass_refactor);
  num("max_wall_seconds", is.max_wall_seconds);
  e << YAML::EndMap;

  e << YAML::Key << "transport" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "track_inverse_det" << YAML::Value << sc.track_inverse_det;
  e << YAML::Key << "track_return_map" << YAML::Value << sc.track_return_map;
  e << YAML::EndMap;

  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "ledger_every" << YAML::Value << cfg.output.ledger_every;
  e << YAML::Key << "snapshot_every" << YAML::Value << cfg.output.snapshot_every;
  e << YAML::Key << "vtk" << YAML::Value << cfg.output.vtk;
  e << YAML::EndMap;

  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

ValidationConfig parse_validation_overrides(const std::string& name, const std::vector<std::string>& overrides) {
  YAML::Node root(YAML::NodeType::Map);
  root["material"]["name"] = name;
  for (const auto& ov : overrides) {
    const std::string key = ov.substr(0, ov.find('='));
    const bool known_prefix = key.rfind("material.", 0) == 0 || key.rfind("box.", 0) == 0 || key == "samples" ||
                              key == "seed" || key == "q";
    apply_override(root, known_prefix ? ov : "material." + ov);
  }
  ValidationConfig vc;
  Section top(root, "");
  Section mat = top.sub("material");
  vc.material = read_material(mat);
  mat.finish();
  Section box = top.sub("box");
  vc.box.J_min = box.num("J_min", vc.box.J_min);
  vc.box.J_max = box.num("J_max", vc.box.J_max);
  vc.box.anisotropy = box.num("anisotropy", vc.box.anisotropy);
  vc.box.theta_min = box.num("theta_min", vc.box.theta_min);
  vc.box.theta_max = box.num("theta_max", vc.box.theta_max);
  vc.box.e_max = box.num("e_max", vc.box.e_max);
  box.finish();
  vc.samples = top.integer("samples", vc.samples);
  vc.seed = static_cast<std::uint64_t>(top.integer("seed", 1));
  vc.q = top.num("q", vc.q);
  top.finish();
  validate_material(vc.material);
  return vc;
}

}  // namespace ekv

#include "eplag/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "eplag/error.hpp"

namespace eplag::cli {

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(Errc::ConfigInvalid, path + ": " + what);
}

void expect_map(const YAML::Node& node, const std::string& path, std::initializer_list<const char*> keys) {
  if (!node.IsMap()) invalid(path, "expected a mapping");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) invalid(path.empty() ? key : path + "." + key, "unknown key");
  }
}

std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

double as_real(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) invalid(path, "expected a number");
  double v = 0.0;
  try {
    v = n.as<double>();
  } catch (const YAML::Exception&) {
    invalid(path, "expected a number, got '" + n.Scalar() + "'");
  }
  if (!std::isfinite(v)) invalid(path, "number must be finite");
  return v;
}

std::size_t as_count(const YAML::Node& n, const std::string& path) {
  const double v = as_real(n, path);
  if (v < 0.0 || v != std::floor(v) || v > 1e12) invalid(path, "expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::string as_text(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) invalid(path, "expected a string");
  return n.Scalar();
}

std::vector<double> as_reals(const YAML::Node& n, const std::string& path) {
  if (n.IsScalar()) return {as_real(n, path)};
  if (!n.IsSequence()) invalid(path, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < n.size(); ++k) out.push_back(as_real(n[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

template <class T, class Read>
void read(const YAML::Node& parent, const std::string& path, const char* key, T& target, Read reader) {
  if (const YAML::Node n = parent[key]) target = reader(n, join(path, key));
}

void one_of(const std::string& value, const std::string& path, std::initializer_list<const char*> options) {
  for (const char* o : options) {
    if (value == o) return;
  }
  invalid(path, "unsupported value '" + value + "'");
}

ProfileSpec read_profile(const YAML::Node& n) {
  const std::string p = "profile";
  expect_map(n, p, {"type", "domain", "gamma_norm", "height", "grid", "values"});
  ProfileSpec s;
  read(n, p, "type", s.type, as_text);
  one_of(s.type, p + ".type", {"cosine", "uniform", "tabulated"});
  if (const YAML::Node d = n["domain"]) {
    const auto v = as_reals(d, p + ".domain");
    if (v.size() != 2) invalid(p + ".domain", "expected [a0, b0]");
    s.a0 = v[0];
    s.b0 = v[1];
  }
  if (const YAML::Node g = n["gamma_norm"]) s.gamma_norm = as_real(g, p + ".gamma_norm");
  if (const YAML::Node h = n["height"]) s.height = as_real(h, p + ".height");
  read(n, p, "grid", s.grid, as_reals);
  read(n, p, "values", s.values, as_reals);
  return s;
}

VelocitySpec read_velocity(const YAML::Node& n) {
  const std::string p = "velocity";
  expect_map(n, p, {"type", "intercept", "slope", "grid", "values"});
  VelocitySpec s;
  read(n, p, "type", s.type, as_text);
  one_of(s.type, p + ".type", {"zero", "linear", "tabulated"});
  read(n, p, "intercept", s.intercept, as_real);
  read(n, p, "slope", s.slope, as_real);
  read(n, p, "grid", s.grid, as_reals);
  read(n, p, "values", s.values, as_reals);
  return s;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(Errc::ConfigInvalid, std::string("parse error: ") + e.what());
  }
  ExperimentConfig c;
  if (root.IsNull()) return c;
  expect_map(root, "",
             {"profile", "velocity", "m0", "quadrature_n", "solver", "classify", "evaluate", "sweep", "asymptotics",
              "picard", "nsp", "output"});

  if (const YAML::Node n = root["profile"]) c.profile = read_profile(n);
  if (const YAML::Node n = root["velocity"]) c.velocity = read_velocity(n);
  if (const YAML::Node n = root["m0"]) c.m0 = as_real(n, "m0");
  read(root, "", "quadrature_n", c.quadrature_n, as_count);

  if (const YAML::Node n = root["solver"]) {
    const std::string p = "solver";
    expect_map(n, p, {"n", "dt", "t_end", "scheme", "record_every", "crossing_tol"});
    read(n, p, "n", c.solver.n, as_count);
    read(n, p, "dt", c.solver.dt, as_real);
    read(n, p, "t_end", c.solver.t_end, as_real);
    read(n, p, "record_every", c.solver.record_every, as_count);
    read(n, p, "crossing_tol", c.solver.crossing_tol, as_real);
    if (const YAML::Node s = n["scheme"]) {
      const auto name = as_text(s, p + ".scheme");
      one_of(name, p + ".scheme", {"rk4", "semi_implicit_euler"});
      c.solver.scheme = name == "rk4" ? Scheme::RK4 : Scheme::SemiImplicitEuler;
    }
  }
  if (const YAML::Node n = root["classify"]) {
    expect_map(n, "classify", {"scan_n"});
    read(n, "classify", "scan_n", c.classify.scan_n, as_count);
  }
  if (const YAML::Node n = root["evaluate"]) {
    const std::string p = "evaluate";
    expect_map(n, p, {"t_end", "nt", "nx"});
    read(n, p, "t_end", c.evaluate.t_end, as_real);
    read(n, p, "nt", c.evaluate.nt, as_count);
    read(n, p, "nx", c.evaluate.nx, as_count);
  }
  if (const YAML::Node n = root["sweep"]) {
    const std::string p = "sweep";
    expect_map(n, p, {"family", "lo", "hi", "tol", "points"});
    read(n, p, "family", c.sweep.family, as_text);
    one_of(c.sweep.family, p + ".family", {"c", "intercept", "m0"});
    read(n, p, "lo", c.sweep.lo, as_real);
    read(n, p, "hi", c.sweep.hi, as_real);
    read(n, p, "tol", c.sweep.tol, as_real);
    read(n, p, "points", c.sweep.points, as_count);
  }
  if (const YAML::Node n = root["asymptotics"]) {
    const std::string p = "asymptotics";
    expect_map(n, p, {"t_end", "samples", "fit_window"});
    read(n, p, "t_end", c.asymptotics.t_end, as_real);
    read(n, p, "samples", c.asymptotics.samples, as_count);
    if (const YAML::Node w = n["fit_window"]) {
      const auto v = as_reals(w, p + ".fit_window");
      if (v.size() != 2) invalid(p + ".fit_window", "expected [t_lo, t_hi]");
      c.asymptotics.fit_window = {v[0], v[1]};
    }
  }
  if (const YAML::Node n = root["picard"]) {
    const std::string p = "picard";
    expect_map(n, p, {"T0", "nt", "nx", "tol", "max_iter"});
    read(n, p, "T0", c.picard.t0, as_real);
    read(n, p, "nt", c.picard.nt, as_count);
    read(n, p, "nx", c.picard.nx, as_count);
    read(n, p, "tol", c.picard.tol, as_real);
    read(n, p, "max_iter", c.picard.max_iter, as_count);
  }
  if (const YAML::Node n = root["nsp"]) {
    const std::string p = "nsp";
    expect_map(n, p, {"d0", "dt", "blow_threshold", "gamma_adiabatic", "alpha_viscosity"});
    read(n, p, "d0", c.nsp.d0, as_reals);
    read(n, p, "dt", c.nsp.dt, as_real);
    read(n, p, "blow_threshold", c.nsp.blow_threshold, as_real);
    read(n, p, "gamma_adiabatic", c.nsp.gamma_adiabatic, as_real);
    read(n, p, "alpha_viscosity", c.nsp.alpha_viscosity, as_real);
  }
  if (const YAML::Node n = root["output"]) {
    expect_map(n, "output", {"dir", "prefix"});
    read(n, "output", "dir", c.output.dir, as_text);
    read(n, "output", "prefix", c.output.prefix, as_text);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

InitialData build_data(const ExperimentConfig& cfg) {
  const Interval dom = make_interval(cfg.profile.a0, cfg.profile.b0);
  const ProfileSpec& p = cfg.profile;
  DensityProfile rho;
  if (p.type == "cosine") {
    rho = CosineDensity{p.gamma_norm.value_or(1.0)};
  } else if (p.type == "uniform") {
    rho = UniformDensity{p.height.value_or(1.0)};
  } else {
    rho = Tabulated(p.grid, p.values);
  }
  if (cfg.m0) rho = normalize_mass(dom, rho, *cfg.m0);

  const VelocitySpec& v = cfg.velocity;
  VelocityProfile u;
  if (v.type == "zero") {
    u = ZeroVelocity{};
  } else if (v.type == "linear") {
    u = LinearVelocity{v.intercept, v.slope};
  } else {
    u = Tabulated(v.grid, v.values);
  }
  return build_initial_data(dom, rho, u, cfg.quadrature_n);
}

}  // namespace eplag::cli

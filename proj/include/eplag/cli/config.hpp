#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eplag/particles.hpp"
#include "eplag/profiles.hpp"

namespace eplag::cli {

struct ProfileSpec {
  std::string type = "cosine";  // cosine | uniform | tabulated
  double a0 = -0.75;
  double b0 = 0.75;
  std::optional<double> gamma_norm;  // cosine only
  std::optional<double> height;      // uniform only
  std::vector<double> grid;          // tabulated only
  std::vector<double> values;
};

struct VelocitySpec {
  std::string type = "zero";  // zero | linear | tabulated
  double intercept = 0.0;
  double slope = 0.0;
  std::vector<double> grid;
  std::vector<double> values;
};

struct SolverSpec {
  std::size_t n = 800;
  double dt = 1e-3;
  double t_end = 30.0;
  Scheme scheme = Scheme::RK4;
  std::size_t record_every = 1000;
  double crossing_tol = 0.0;
};

struct ClassifySpec {
  std::size_t scan_n = 1024;
};

struct EvaluateSpec {
  double t_end = 10.0;
  std::size_t nt = 51;
  std::size_t nx = 21;
};

struct SweepSpec {
  std::string family = "c";  // c | intercept | m0
  double lo = 0.0;
  double hi = 1.0;
  double tol = 1e-6;
  std::size_t points = 21;
};

struct AsymptoticsSpec {
  double t_end = 30.0;
  std::size_t samples = 61;
  std::pair<double, double> fit_window{5.0, 25.0};
};

struct PicardSpec {
  double t0 = 0.1;
  std::size_t nt = 101;
  std::size_t nx = 101;
  double tol = 1e-10;
  std::size_t max_iter = 50;
};

struct NspSpec {
  std::vector<double> d0{-1.0};
  double dt = 1e-4;
  double blow_threshold = -1e4;
  double gamma_adiabatic = 2.0;
  double alpha_viscosity = 2.0;
};

struct OutputSpec {
  std::string dir = "out";
  std::string prefix;
};

struct ExperimentConfig {
  ProfileSpec profile;
  VelocitySpec velocity;
  std::optional<double> m0;  // density rescaled to this mass when present
  std::size_t quadrature_n = 4096;
  SolverSpec solver;
  ClassifySpec classify;
  EvaluateSpec evaluate;
  SweepSpec sweep;
  AsymptoticsSpec asymptotics;
  PicardSpec picard;
  NspSpec nsp;
  OutputSpec output;
};

/// YAML or JSON text. Unknown keys, wrong types and non-finite numbers throw
/// ConfigInvalid with the offending key path.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

InitialData build_data(const ExperimentConfig& cfg);

}  // namespace eplag::cli

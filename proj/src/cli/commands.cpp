#include "eplag/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <thread>

#include "eplag/asymptotics.hpp"
#include "eplag/cli/csv.hpp"
#include "eplag/closed_form.hpp"
#include "eplag/error.hpp"
#include "eplag/nsp.hpp"
#include "eplag/particles.hpp"
#include "eplag/picard.hpp"
#include "eplag/thresholds.hpp"

namespace eplag::cli {

using nlohmann::json;

namespace {

struct Context {
  const ExperimentConfig& cfg;
  std::filesystem::path dir;
  RunManifest& manifest;
  unsigned threads;

  std::string file(const std::string& stem) const { return (dir / (cfg.output.prefix + stem + ".csv")).string(); }

  void emit(const std::string& stem, const std::vector<std::string>& header, const std::vector<Row>& rows) {
    const std::string path = file(stem);
    manifest.outputs.push_back({path, emit_csv(header, rows, path)});
  }
};

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  for (std::size_t k = 0; k < n; ++k) {
    g[k] = k + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  return g;
}

json verdict_json(const Verdict& v) {
  json j;
  j["verdict"] = v.is_global() ? "Global" : "BlowUp";
  j["scan_too_coarse"] = v.scan_too_coarse;
  j["boundary_vacuum"] = v.boundary_vacuum;
  j["predicate_boundaries"] = v.predicate_boundaries;
  if (v.blowup) {
    j["x_star"] = v.blowup->x_star;
    j["t_first_zero"] = v.blowup->t_first_zero;
    j["t_star_min"] = v.blowup->t_star_min;
    j["case_tag"] = std::string(to_string(v.blowup->witness.case_tag));
  }
  return j;
}

void cmd_classify(Context& ctx) {
  const InitialData data = build_data(ctx.cfg);
  const std::size_t scan_n = ctx.cfg.classify.scan_n;
  const Verdict v = classify(data, scan_n);
  std::vector<Row> rows;
  for (double x : linspace(data.domain.a0, data.domain.b0, scan_n + 1)) {
    const PointCondition pc = classify_point(data, x);
    rows.push_back({x, std::string(to_string(pc.case_tag)), pc.triggers_blowup, pc.min_etax, pc.t_min});
  }
  ctx.emit("classify", {"x", "case_tag", "triggers", "min_etax", "t_min"}, rows);
  ctx.manifest.summary = verdict_json(v);
  ctx.manifest.summary["regime"] = std::string(1, regime_letter(regime(data.m0).variant));
}

void cmd_evaluate(Context& ctx) {
  const InitialData data = build_data(ctx.cfg);
  const EvaluateSpec& e = ctx.cfg.evaluate;
  if (e.nt < 1 || e.nx < 2 || !(e.t_end >= 0.0)) throw Error(Errc::InvalidArgument, "need nt >= 1, nx >= 2, t_end >= 0");
  std::vector<Row> rows;
  std::size_t degenerate = 0;
  for (double x : linspace(data.domain.a0, data.domain.b0, e.nx)) {
    const Coefficients co = coefficients_at(data, x);
    for (double t : linspace(0.0, e.t_end, e.nt)) {
      const FlowState s = evaluate(co, t);
      degenerate += s.degenerate();
      rows.push_back({t, x, s.v, s.vx, s.eta, s.etax, s.f});
    }
  }
  ctx.emit("evaluate", {"t", "x", "v", "vx", "eta", "etax", "f"}, rows);
  ctx.manifest.summary = {{"regime", std::string(1, regime_letter(regime(data.m0).variant))},
                          {"m0", data.m0},
                          {"m1", data.m1},
                          {"degenerate_samples", degenerate}};
}

void cmd_simulate(Context& ctx) {
  const InitialData data = build_data(ctx.cfg);
  const SolverSpec& s = ctx.cfg.solver;
  SimConfig sc{s.dt, s.t_end, s.scheme, s.crossing_tol, s.record_every};
  const SimOutcome out = run(discretize(data, s.n), sc);

  std::vector<Row> traj;
  for (const Snapshot& snap : out.trajectory) {
    for (std::size_t i = 0; i < snap.positions.size(); ++i) {
      std::optional<double> left;
      if (i > 0) {
        const double w = snap.positions[i] - snap.positions[i - 1];
        const auto& m = out.final_state.masses;
        if (w > 0.0) left = 0.5 * (m[i - 1] + m[i]) / w;
      }
      traj.push_back({snap.t, i, snap.positions[i], snap.velocities[i], left});
    }
  }
  ctx.emit("simulate", {"t", "i", "position", "velocity", "density_left_cell"}, traj);

  std::vector<Row> obs;
  for (const Observables& o : out.observables) {
    obs.push_back({o.t, o.momentum, o.left, o.right,
                   std::isfinite(o.l1_to_limit) ? std::optional<double>(o.l1_to_limit) : std::nullopt, o.min_spacing});
  }
  ctx.emit("simulate_observables", {"t", "momentum", "left", "right", "l1_to_limit", "min_spacing"}, obs);

  json& j = ctx.manifest.summary;
  j["outcome"] = out.completed() ? "Completed" : "Crossed";
  j["t_cross"] = out.crossed ? json(out.crossed->t_cross) : json(nullptr);
  j["crossing_index"] = out.crossed ? json(out.crossed->index) : json(nullptr);
  j["snapshots"] = out.trajectory.size();
  j["final_time"] = out.final_state.time;
  j["final_support"] = {out.final_state.positions.front(), out.final_state.positions.back()};
  j["final_l1_to_limit"] = out.observables.back().l1_to_limit;
}

std::function<InitialData(double)> sweep_family(const ExperimentConfig& cfg) {
  const std::string fam = cfg.sweep.family;
  if ((fam == "c" || fam == "intercept") && cfg.velocity.type == "tabulated") {
    throw Error(Errc::ConfigInvalid, "sweep.family " + fam + " needs a zero or linear velocity");
  }
  return [cfg, fam](double p) {
    ExperimentConfig c = cfg;
    if (fam == "m0") {
      c.m0 = p;
    } else {
      c.velocity.type = "linear";
      (fam == "c" ? c.velocity.slope : c.velocity.intercept) = fam == "c" ? -p : p;
    }
    return build_data(c);
  };
}

void cmd_sweep(Context& ctx) {
  const SweepSpec& s = ctx.cfg.sweep;
  if (s.points < 2 || !(s.lo < s.hi) || !(s.tol > 0.0)) {
    throw Error(Errc::InvalidArgument, "sweep needs points >= 2, lo < hi and tol > 0");
  }
  const auto family = sweep_family(ctx.cfg);
  const std::size_t scan_n = ctx.cfg.classify.scan_n;
  const std::vector<double> params = linspace(s.lo, s.hi, s.points);

  std::vector<std::optional<Verdict>> verdicts(params.size());
  std::vector<std::exception_ptr> errors(params.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < params.size();) {
      try {
        verdicts[k] = classify(family(params[k]), scan_n);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned nthreads = std::max(1u, std::min<unsigned>(ctx.threads, static_cast<unsigned>(params.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < nthreads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<Row> rows;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const Verdict& v = *verdicts[k];
    rows.push_back({params[k], std::string(v.is_global() ? "Global" : "BlowUp"),
                    v.blowup ? std::optional<double>(v.blowup->t_first_zero) : std::nullopt});
  }
  ctx.emit("sweep", {"param", "verdict", "t_first_zero"}, rows);

  json& j = ctx.manifest.summary;
  j["family"] = s.family;
  std::size_t blowups = 0;
  for (const auto& v : verdicts) blowups += !v->is_global();
  j["blowup_points"] = blowups;
  j["global_points"] = params.size() - blowups;
  j["critical"] = nullptr;
  j["bracketed"] = false;
  for (std::size_t k = 0; k + 1 < params.size(); ++k) {
    if (verdicts[k]->is_global() != verdicts[k + 1]->is_global()) {
      const CriticalParameter cp = sweep_critical(family, params[k], params[k + 1], s.tol, scan_n);
      j["critical"] = cp.critical;
      j["global_side"] = cp.global_side;
      j["blowup_side"] = cp.blowup_side;
      j["bracketed"] = true;
      break;
    }
  }
}

void cmd_asymptotics(Context& ctx) {
  const InitialData data = build_data(ctx.cfg);
  const AsymptoticsSpec& a = ctx.cfg.asymptotics;
  if (a.samples < 2 || !(a.t_end > 0.0)) throw Error(Errc::InvalidArgument, "need samples >= 2 and t_end > 0");
  const auto series = l1_series(data, linspace(0.0, a.t_end, a.samples));
  std::vector<Row> rows;
  TimeSeries ts;
  for (const L1Distance& d : series) {
    rows.push_back({d.t, d.to_tilde, d.tilde_to_inf, d.total_bound});
    ts.emplace_back(d.t, d.total_bound);
  }
  ctx.emit("asymptotics", {"t", "to_tilde", "tilde_to_inf", "total_bound"}, rows);

  const AsymptoticProfile lim = limit_profile(data);
  json& j = ctx.manifest.summary;
  j["gamma_cap"] = lim.gamma_cap;
  j["omega_inf"] = {lim.omega_inf.a0, lim.omega_inf.b0};
  j["height"] = lim.height;
  j["lambda_theory"] = decay_rate(data.m0);
  j["total_bound_note"] = "upper bound on the L1 distance to the limit profile";
  try {
    const RateReport r = fit_rate(ts, a.fit_window);
    j["lambda_fit"] = r.lambda_fit;
    j["fit_window"] = {r.fit_window.first, r.fit_window.second};
    j["fit_residual"] = r.residual;
  } catch (const Error& e) {
    if (e.code() != Errc::NonPositiveValues && e.code() != Errc::InvalidArgument) throw;
    j["lambda_fit"] = nullptr;
    j["fit_error"] = e.what();
  }
}

void cmd_picard(Context& ctx) {
  const InitialData data = build_data(ctx.cfg);
  const PicardSpec& p = ctx.cfg.picard;
  const PicardResult res = solve(data, p.t0, p.nt, p.nx, p.tol, p.max_iter);
  std::vector<Row> rows;
  for (const IterateReport& r : res.reports) rows.push_back({r.n, r.sup_delta, r.l2_delta});
  ctx.emit("picard", {"n", "sup_delta", "l2_delta"}, rows);

  double v_err = 0.0, eta_err = 0.0;
  for (std::size_t it = 0; it < res.v.nt(); ++it) {
    for (std::size_t ix = 0; ix < res.v.nx(); ++ix) {
      const FlowState s = evaluate(data, res.v.x_grid[ix], res.v.t_grid[it]);
      v_err = std::max(v_err, std::abs(res.v.at(it, ix) - s.v));
      eta_err = std::max(eta_err, std::abs(res.eta.at(it, ix) - s.eta));
    }
  }
  std::vector<double> ratios;
  for (std::size_t k = 1; k < res.reports.size(); ++k) {
    if (res.reports[k - 1].sup_delta > 0.0) ratios.push_back(res.reports[k].sup_delta / res.reports[k - 1].sup_delta);
  }
  json& j = ctx.manifest.summary;
  j["iterations"] = res.reports.size();
  j["final_sup_delta"] = res.reports.back().sup_delta;
  j["contraction_ratios"] = ratios;
  j["max_abs_v_vs_closed_form"] = v_err;
  j["max_abs_eta_vs_closed_form"] = eta_err;
}

void cmd_nsp(Context& ctx) {
  if (!ctx.cfg.m0) throw Error(Errc::ConfigInvalid, "nsp needs m0");
  const NspSpec& n = ctx.cfg.nsp;
  const RiccatiSetup setup = make_riccati(*ctx.cfg.m0, n.gamma_adiabatic, n.alpha_viscosity);
  std::vector<Row> rows;
  json reports = json::array();
  for (double d0 : n.d0) {
    const BoundReport r = blowup_bound(setup, d0, n.dt, n.blow_threshold);
    rows.push_back({r.d0, r.bound, r.exact_blowup, r.numeric_blowup});
    reports.push_back({{"d0", r.d0}, {"bound", r.bound}, {"exact_blowup", r.exact_blowup},
                       {"numeric_blowup", r.numeric_blowup}});
  }
  ctx.emit("nsp", {"d0", "bound", "exact_blowup", "numeric_blowup"}, rows);
  json& j = ctx.manifest.summary;
  j["d_plus"] = setup.d_plus;
  j["d_minus"] = setup.d_minus;
  j["reports"] = reports;
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Classify: return "classify";
    case Command::Evaluate: return "evaluate";
    case Command::Simulate: return "simulate";
    case Command::Sweep: return "sweep";
    case Command::Asymptotics: return "asymptotics";
    case Command::Picard: return "picard";
    case Command::Nsp: return "nsp";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : kAllCommands) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

json RunManifest::to_json() const {
  json files = json::array();
  for (const OutputFile& f : outputs) files.push_back({{"path", f.path}, {"rows", f.rows}});
  return {{"command", command},           {"artifact_version", artifact_version},
          {"config", config},             {"wall_clock_seconds", wall_clock_seconds},
          {"summary", summary},           {"outputs", files}};
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  json prof = {{"type", c.profile.type}, {"domain", {c.profile.a0, c.profile.b0}}};
  if (c.profile.gamma_norm) prof["gamma_norm"] = *c.profile.gamma_norm;
  if (c.profile.height) prof["height"] = *c.profile.height;
  if (!c.profile.grid.empty()) prof["grid"] = c.profile.grid;
  if (!c.profile.values.empty()) prof["values"] = c.profile.values;
  j["profile"] = prof;
  json vel = {{"type", c.velocity.type}, {"intercept", c.velocity.intercept}, {"slope", c.velocity.slope}};
  if (!c.velocity.grid.empty()) vel["grid"] = c.velocity.grid;
  if (!c.velocity.values.empty()) vel["values"] = c.velocity.values;
  j["velocity"] = vel;
  j["m0"] = c.m0 ? json(*c.m0) : json(nullptr);
  j["quadrature_n"] = c.quadrature_n;
  j["solver"] = {{"n", c.solver.n},
                 {"dt", c.solver.dt},
                 {"t_end", c.solver.t_end},
                 {"scheme", c.solver.scheme == Scheme::RK4 ? "rk4" : "semi_implicit_euler"},
                 {"record_every", c.solver.record_every},
                 {"crossing_tol", c.solver.crossing_tol}};
  j["classify"] = {{"scan_n", c.classify.scan_n}};
  j["evaluate"] = {{"t_end", c.evaluate.t_end}, {"nt", c.evaluate.nt}, {"nx", c.evaluate.nx}};
  j["sweep"] = {{"family", c.sweep.family}, {"lo", c.sweep.lo}, {"hi", c.sweep.hi}, {"tol", c.sweep.tol},
                {"points", c.sweep.points}};
  j["asymptotics"] = {{"t_end", c.asymptotics.t_end},
                      {"samples", c.asymptotics.samples},
                      {"fit_window", {c.asymptotics.fit_window.first, c.asymptotics.fit_window.second}}};
  j["picard"] = {{"T0", c.picard.t0}, {"nt", c.picard.nt}, {"nx", c.picard.nx}, {"tol", c.picard.tol},
                 {"max_iter", c.picard.max_iter}};
  j["nsp"] = {{"d0", c.nsp.d0},
              {"dt", c.nsp.dt},
              {"blow_threshold", c.nsp.blow_threshold},
              {"gamma_adiabatic", c.nsp.gamma_adiabatic},
              {"alpha_viscosity", c.nsp.alpha_viscosity}};
  j["output"] = {{"dir", c.output.dir}, {"prefix", c.output.prefix}};
  return j;
}

std::string resolve_out_dir(const std::optional<std::string>& flag, const ExperimentConfig& cfg) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv("EPLAG_OUT_DIR"); env && *env) return env;
  return cfg.output.dir;
}

RunManifest run(const ExperimentConfig& cfg, Command command, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest m;
  m.command = std::string(to_string(command));
  m.config = config_to_json(cfg);

  const std::filesystem::path dir(options.out_dir.empty() ? cfg.output.dir : options.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoFailure, "cannot create output directory " + dir.string() + ": " + ec.message());

  Context ctx{cfg, dir, m, options.threads};
  try {
    switch (command) {
      case Command::Classify: cmd_classify(ctx); break;
      case Command::Evaluate: cmd_evaluate(ctx); break;
      case Command::Simulate: cmd_simulate(ctx); break;
      case Command::Sweep: cmd_sweep(ctx); break;
      case Command::Asymptotics: cmd_asymptotics(ctx); break;
      case Command::Picard: cmd_picard(ctx); break;
      case Command::Nsp: cmd_nsp(ctx); break;
    }
  } catch (const Error& e) {
    throw Error(e.code(), m.command + ": " + e.detail());
  }

  m.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string path = (dir / (cfg.output.prefix + m.command + "_manifest.json")).string();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot write " + path);
  out << m.to_json().dump(2) << '\n';
  if (!out) throw Error(Errc::IoFailure, "write failed for " + path);
  return m;
}

int exit_code(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    if (err->is_numerical()) return kExitNumerical;
    if (err->code() == Errc::IoFailure) return kExitOther;
    return kExitValidation;
  }
  return kExitOther;
}

}  // namespace eplag::cli

#include "monoperiod/cli/commands.hpp"

#include <chrono>
#include <random>

#include "monoperiod/errors.hpp"
#include "monoperiod/feasibility.hpp"
#include "monoperiod/galerkin.hpp"
#include "monoperiod/periodic.hpp"

namespace monoperiod::cli {

using nlohmann::ordered_json;

namespace {

ordered_json condition_json(const feasibility::ConditionResult& c) {
  return {{"holds", c.holds}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"margin", c.margin}};
}

ordered_json monitors_json(const galerkin::PeriodMonitors& m) {
  return {{"sup_energy", m.sup_energy},
          {"u_L2V", m.u_L2V},
          {"du_L2", m.du_L2},
          {"dw_L2", m.dw_L2}};
}

ordered_json apriori_json(const galerkin::AprioriReport& r) {
  ordered_json per = ordered_json::array();
  for (const auto& m : r.per_period) per.push_back(monitors_json(m));
  return {{"total", monitors_json(r.total)},
          {"per_period", per},
          {"period_spread", r.period_spread},
          {"unbounded_growth", r.unbounded_growth}};
}

std::vector<std::string> state_header(int modes) {
  std::vector<std::string> h{"t"};
  for (int i = 0; i < modes; ++i) h.push_back("u_" + std::to_string(i));
  for (int i = 0; i < modes; ++i) h.push_back("w_" + std::to_string(i));
  return h;
}

std::vector<double> state_row(double t, const Eigen::VectorXd& x) {
  std::vector<double> row{t};
  row.insert(row.end(), x.data(), x.data() + x.size());
  return row;
}

CsvTable curve_table(const feasibility::Curve& c) {
  CsvTable t{{"x", "value"}, {}};
  for (std::size_t k = 0; k < c.x.size(); ++k) t.rows.push_back({c.x[k], c.value[k]});
  return t;
}

ordered_json outcome(ordered_json result, ordered_json flags, const char* status = "ok") {
  return {{"status", status}, {"result", std::move(result)}, {"flags", std::move(flags)}};
}

}  // namespace

ordered_json cmd_feasibility(const RunConfig& rc, const OutputOptions& out) {
  const auto& fb = *rc.feasibility;
  const double rate = 1.0 / fb.h0;
  ordered_json cases = ordered_json::array();
  ordered_json temp12_flags = ordered_json::array();
  const auto temp11 = feasibility::check_resq1(fb.xi, fb.c3);

  write_csv(out, "h_curve.csv", curve_table(feasibility::h_curve(rate, fb.T_max, fb.points)));
  for (std::size_t i = 0; i < fb.aggregates.size(); ++i) {
    const auto& agg = fb.aggregates[i];
    const auto rep = feasibility::evaluate(agg, fb.h0, fb.xi, fb.c3);
    ordered_json c = {
        {"kappa", agg.kappa},
        {"beta", agg.beta},
        {"gamma", agg.gamma},
        {"delta", agg.delta},
        {"provenance", agg.provenance == feasibility::Provenance::direct ? "direct" : "derived"},
        {"R_star", rep.R_star},
        {"p_at_R_star", rep.p_at_R_star},
        {"h_at_zero", rep.h_at_zero},
        {"temp12", condition_json(rep.temp12)},
    };
    if (rep.bounds) {
      c["R1"] = rep.bounds->R1;
      c["R2"] = rep.bounds->R2;
      c["T_star_at_R_star"] = *rep.T_star_at_R_star;
    }
    if (fb.R && fb.T) {
      c["resq"] = condition_json(feasibility::check_resq(*fb.R, *fb.T, agg, rate));
      if (fb.raw && rc.model) {
        const auto& d = rc.model->derived;
        c["resq_unaggregated"] = condition_json(feasibility::check_resq_raw(
            *fb.R, *fb.T, *fb.raw, d.c4, d.epsilon, d.C, fb.literal_exponent));
      }
      if (rep.temp12.holds && *fb.R >= rep.bounds->R1 && *fb.R <= rep.bounds->R2)
        c["T_star_at_R"] = feasibility::t_star(*fb.R, agg, rate);
    }
    temp12_flags.push_back(rep.temp12.holds);
    cases.push_back(std::move(c));
    write_csv(out, "p_curve_" + std::to_string(i + 1) + ".csv",
              curve_table(feasibility::p_curve(agg, fb.R_max, fb.points)));
  }

  ordered_json result = {{"h_at_zero", fb.h0}, {"temp11", condition_json(temp11)}, {"cases", cases}};
  ordered_json flags = {{"temp11", temp11.holds}, {"temp12", temp12_flags}};

  if (fb.raw && rc.model) {
    const auto& d = rc.model->derived;
    feasibility::RegionParameters rp;
    rp.xi = d.xi;
    rp.c3 = d.c3;
    rp.K1 = fb.raw->K1;
    rp.kappa = fb.aggregates.front().kappa;
    rp.epsilon = d.epsilon;
    rp.C = d.C;
    rp.u_tr = d.u_tr;
    rp.u_pr = d.u_pr;
    rp.omega_measure = fb.raw->omega_measure;
    rp.B = fb.raw->s_hat * fb.raw->trace_norm * fb.raw->phi_norm;
    const auto t14 = feasibility::check_temp14(d.a1, d.a2, rp);
    const double bound = feasibility::a2_bound(d.a1, rp);
    result["temp14"] = condition_json(t14);
    result["temp15"] = {{"a1", d.a1}, {"a2", d.a2}, {"a2_bound", bound}, {"holds", d.a2 < bound}};
    flags["temp14"] = t14.holds;
    flags["temp15"] = d.a2 < bound;
  } else {
    result["temp14"] = "skipped: needs a model block and raw constants";
  }
  return outcome(std::move(result), std::move(flags));
}

ordered_json cmd_solve_cauchy(const RunConfig& rc, const OutputOptions& out) {
  const int m = rc.solver.m;
  const auto sys = build_system(rc, m);
  const auto x0 = initial_state(rc, m);
  const auto traj =
      galerkin::integrate_cauchy(sys, x0, rc.solver.t_end, rc.solver.dt, rc.solver.record_stride);

  CsvTable table{state_header(sys.modes()), {}};
  for (std::size_t k = 0; k < traj.size(); ++k)
    table.rows.push_back(state_row(traj.times[k], traj.states[k]));
  write_csv(out, "trajectory.csv", table);

  const auto last = traj.back();
  std::vector<double> xs;
  for (int k = 0; k <= 100; ++k) xs.push_back(rc.geometry.L * k / 100.0);
  const Eigen::VectorXd uf = spectral::evaluate_field(sys.basis(), last.u(), xs);
  const Eigen::VectorXd wf = spectral::evaluate_field(sys.basis(), last.w(), xs);
  CsvTable field{{"x", "u", "w"}, {}};
  for (std::size_t k = 0; k < xs.size(); ++k)
    field.rows.push_back({xs[k], uf(static_cast<Eigen::Index>(k)), wf(static_cast<Eigen::Index>(k))});
  write_csv(out, "field_final.csv", field);

  const auto nrm = spectral::norms(sys.basis(), last.u(), last.w());
  const auto mon = galerkin::apriori_monitor(sys, traj, sys.period());
  ordered_json result = {
      {"m", m},
      {"dimension", sys.dimension()},
      {"dt", rc.solver.dt},
      {"steps", galerkin::step_count(0.0, rc.solver.t_end, rc.solver.dt)},
      {"t_end", rc.solver.t_end},
      {"final", {{"u_H", nrm.u_H}, {"u_V", nrm.u_V}, {"w_H", nrm.w_H}}},
      {"monitors", apriori_json(mon)},
  };
  return outcome(std::move(result), {{"unbounded_growth", mon.unbounded_growth}});
}

namespace {

ordered_json orbit_json(const periodic::PeriodicOrbit& o, const std::optional<double>& R) {
  ordered_json j = {
      {"method", periodic::method_name(o.method)},
      {"converged", o.converged},
      {"iterations", o.iterations},
      {"fixed_point_residual", o.fixed_point_residual},
      {"periodicity_residual", o.periodicity_residual},
      {"ct_norm", o.ct_norm},
      {"worst_t", o.worst_t},
  };
  if (o.method == periodic::Method::picard)
    j["theta"] = o.theta;
  else
    j["rcond"] = o.rcond;
  j["history"] = o.history;
  if (R) {
    const auto c = periodic::certify_ball(o, *R);
    j["ball"] = {{"R", c.R}, {"member", c.member}, {"worst_t", c.worst_t}, {"margin", c.margin}};
  } else {
    j["ball"] = "skipped: ball.radius not set";
  }
  return j;
}

void write_orbit(const OutputOptions& out, const periodic::PeriodicOrbit& o) {
  CsvTable table{state_header(static_cast<int>(o.samples.cols() / 2)), {}};
  for (int k = 0; k < o.grid.nodes(); ++k)
    table.rows.push_back(state_row(o.grid.time(k), o.samples.row(k).transpose()));
  write_csv(out, std::string("orbit_") + periodic::method_name(o.method) + ".csv", table);
}

}  // namespace

ordered_json cmd_solve_periodic(const RunConfig& rc, const OutputOptions& out) {
  const auto& s = rc.solver;
  const auto sys = build_system(rc, s.m);
  const periodic::PeriodicGrid grid(sys.period(), s.nodes);
  const Eigen::VectorXd x0 = initial_state(rc, s.m).x;

  ordered_json orbits = ordered_json::array();
  ordered_json flags = ordered_json::object();
  std::optional<periodic::PeriodicOrbit> picard, shooting;
  bool all_converged = true;

  if (s.method != "shooting") {
    periodic::Samples U0 = x0.transpose().replicate(grid.nodes(), 1);
    if (rc.initial.random) {
      std::mt19937_64 rng(rc.initial.seed);
      std::uniform_real_distribution<double> dist(-rc.initial.random_amplitude,
                                                  rc.initial.random_amplitude);
      for (Eigen::Index k = 0; k < U0.rows(); ++k)
        for (Eigen::Index j = 0; j < U0.cols(); ++j) U0(k, j) += dist(rng);
    }
    periodic::PicardOptions po;
    po.theta = s.theta;
    po.tol = s.tol;
    po.max_iter = s.max_iter;
    po.steps_per_period = s.steps_per_period;
    po.farkas = s.farkas;
    picard = periodic::picard_solve(sys, grid, U0, po);
    all_converged = all_converged && picard->converged;
    write_orbit(out, *picard);
    orbits.push_back(orbit_json(*picard, rc.ball_radius));
  }
  if (s.method != "picard") {
    periodic::ShootingOptions so;
    so.tol = s.tol;
    so.max_iter = s.max_iter;
    so.steps_per_period = s.steps_per_period;
    shooting = periodic::shooting_solve(sys, grid, x0, so);
    write_orbit(out, *shooting);
    orbits.push_back(orbit_json(*shooting, rc.ball_radius));
  }

  ordered_json result = {{"m", s.m}, {"nodes", s.nodes}, {"orbits", orbits}};
  if (picard && shooting) {
    result["sup_norm_gap"] = periodic::sup_norm_gap(picard->samples, shooting->samples);
  }
  flags["converged"] = all_converged;
  if (rc.ball_radius) {
    bool member = true;
    if (picard) member = member && periodic::certify_ball(*picard, *rc.ball_radius).member;
    if (shooting) member = member && periodic::certify_ball(*shooting, *rc.ball_radius).member;
    flags["ball_member"] = member;
  }
  return outcome(std::move(result), std::move(flags), all_converged ? "ok" : "non_convergence");
}

ordered_json cmd_converge(const RunConfig& rc, const OutputOptions& out) {
  const auto& s = rc.solver;
  std::vector<galerkin::GalerkinSystem> systems;
  std::vector<galerkin::Trajectory> trajs;
  ordered_json runs = ordered_json::array();
  for (int m : s.m_list) {
    systems.push_back(build_system(rc, m));
    trajs.push_back(galerkin::integrate_cauchy(systems.back(), initial_state(rc, m), s.t_end,
                                               s.dt, s.record_stride));
    const auto mon = galerkin::apriori_monitor(systems.back(), trajs.back(), rc.stimulus->period());
    runs.push_back({{"m", m}, {"monitors", apriori_json(mon)}});
  }

  CsvTable table{{"m_coarse", "m_fine", "u_gap", "w_gap"}, {}};
  ordered_json gaps = ordered_json::array();
  bool nonincreasing = true;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < systems.size(); ++i) {
    const auto g = galerkin::refinement_gap(systems[i], trajs[i], systems[i + 1], trajs[i + 1]);
    table.rows.push_back({static_cast<double>(s.m_list[i]), static_cast<double>(s.m_list[i + 1]),
                          g.u, g.w});
    gaps.push_back({{"m_coarse", s.m_list[i]}, {"m_fine", s.m_list[i + 1]}, {"u_gap", g.u},
                    {"w_gap", g.w}});
    if (g.u > prev) nonincreasing = false;
    prev = g.u;
  }
  write_csv(out, "converge.csv", table);

  ordered_json result = {{"dt", s.dt}, {"t_end", s.t_end}, {"runs", runs}, {"gaps", gaps}};
  return outcome(std::move(result), {{"u_gap_nonincreasing", nonincreasing}});
}

ordered_json cmd_param_region(const RunConfig& rc, const OutputOptions& out) {
  const auto& rb = *rc.region;
  const auto grid = feasibility::region_sweep(rb.params, rb.a1_min, rb.a1_max, rb.a1_count,
                                              rb.a2_max, rb.a2_count, rb.literal);
  CsvTable bound{{"a1", "a2_bound"}, {}};
  CsvTable raster{{"a1", "a2", "member"}, {}};
  int members = 0, violations = 0;
  bool monotone = true;
  bool zero_row_empty = true;
  for (std::size_t i = 0; i < grid.a1.size(); ++i) {
    bound.rows.push_back({grid.a1[i], grid.bound[i]});
    if (i > 0 && grid.bound[i] < grid.bound[i - 1]) monotone = false;
    for (std::size_t j = 0; j < grid.a2.size(); ++j) {
      const bool in = grid.member[i][j];
      raster.rows.push_back({grid.a1[i], grid.a2[j], in ? 1.0 : 0.0});
      if (!in) continue;
      ++members;
      if (grid.a1[i] == 0.0) zero_row_empty = false;
      if (!feasibility::check_temp14(grid.a1[i], grid.a2[j], rb.params).holds) ++violations;
    }
  }
  write_csv(out, "region.csv", bound);
  write_csv(out, "region_member.csv", raster);

  ordered_json result = {
      {"coefficient", rb.literal ? "literal" : "consistent"},
      {"kappa", rb.params.kappa},
      {"K1", rb.params.K1},
      {"A", rb.params.A()},
      {"B", rb.params.B},
      {"a1_points", grid.a1.size()},
      {"a2_points", grid.a2.size()},
      {"members", members},
      {"temp14_violations", violations},
  };
  ordered_json flags = {{"bound_monotone", monotone},
                        {"a1_zero_row_empty", zero_row_empty},
                        {"temp14_consistent", violations == 0}};
  return outcome(std::move(result), std::move(flags));
}

RunReport run_command(Subcommand cmd, Config& cfg, const OutputOptions& out) {
  const auto start = std::chrono::steady_clock::now();
  const RunConfig rc = resolve(cfg, cmd);
  write_text(out, "resolved.cfg", cfg.resolved_text());

  RunReport rep;
  rep.doc["command"] = subcommand_name(cmd);
  ordered_json echo = ordered_json::object();
  for (const auto& [k, v] : cfg.resolved()) echo[k] = v;
  rep.doc["config"] = echo;

  try {
    ordered_json o;
    switch (cmd) {
      case Subcommand::feasibility: o = cmd_feasibility(rc, out); break;
      case Subcommand::solve_cauchy: o = cmd_solve_cauchy(rc, out); break;
      case Subcommand::solve_periodic: o = cmd_solve_periodic(rc, out); break;
      case Subcommand::converge: o = cmd_converge(rc, out); break;
      case Subcommand::param_region: o = cmd_param_region(rc, out); break;
    }
    rep.doc["status"] = o["status"];
    rep.doc["result"] = o["result"];
    rep.doc["flags"] = o["flags"];
    if (o["status"] != "ok") rep.exit_code = kExitNonConvergence;
  } catch (const BlowUpError& e) {
    rep.doc["status"] = "blow_up";
    rep.doc["error"] = {{"message", e.what()}, {"time", e.time()}, {"max_abs", e.max_abs()}};
    rep.exit_code = kExitBlowUp;
  } catch (const ConvergenceError& e) {
    rep.doc["status"] = "non_convergence";
    rep.doc["error"] = {{"message", e.what()}, {"history", e.history()}};
    rep.exit_code = kExitNonConvergence;
  }
  write_json(out, "report.json", rep.doc);

  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json(out, "timings.json", {{"command", subcommand_name(cmd)}, {"wall_seconds", rep.seconds}});
  return rep;
}

}  // namespace monoperiod::cli

#include "monoperiod/cli/run_config.hpp"

#include <cmath>
#include <stdexcept>

#include "monoperiod/errors.hpp"

namespace monoperiod::cli {

namespace {

bool any_key_with_prefix(const Config& cfg, const std::string& prefix) {
  for (const auto& k : Config::known_keys())
    if (k.rfind(prefix, 0) == 0 && cfg.has(k)) return true;
  return false;
}

// Rethrows library argument errors as configuration errors.
template <typename F>
auto guarded(const std::string& block, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("invalid " + block + " block: " + e.what());
  }
}

ionic::RescalingParameters read_rescaling(Config& cfg) {
  ionic::RescalingParameters r;
  r.epsilon = cfg.number_or("rescaling.epsilon", r.epsilon);
  r.xi = cfg.number_or("rescaling.xi", r.xi);
  guarded("rescaling", [&] { r.validate(); return 0; });
  return r;
}

ModelBlock read_model(Config& cfg) {
  ModelBlock mb;
  auto& p = mb.phys;
  p.C_m = cfg.number("model.C_m");
  p.chi = cfg.number("model.chi");
  p.c1 = cfg.number("model.c1");
  p.c2 = cfg.number("model.c2");
  p.c3 = cfg.number_or("model.c3", 1.0);
  p.b = cfg.number("model.b");
  p.a = cfg.number("model.a");
  p.u_res = cfg.number_or("model.u_res", 0.0);
  p.u_peak = cfg.number("model.u_peak");
  p.sigma = cfg.number("model.sigma");
  mb.resc = read_rescaling(cfg);
  mb.derived = guarded("model", [&] { return ionic::derive_parameters(p, mb.resc); });
  if (auto a1 = cfg.optional_number("model.a1")) {
    if (*a1 < 0.0) throw ConfigError("key 'model.a1': must be nonnegative");
    mb.derived.a1 = *a1;
  }
  if (auto a2 = cfg.optional_number("model.a2")) {
    if (*a2 < 0.0) throw ConfigError("key 'model.a2': must be nonnegative");
    mb.derived.a2 = *a2;
  }
  return mb;
}

spectral::Geometry1D read_geometry(Config& cfg) {
  spectral::Geometry1D g{cfg.number_or("geometry.length", 1.0)};
  guarded("geometry", [&] { g.validate(); return 0; });
  return g;
}

spectral::Stimulus read_stimulus(Config& cfg, const ionic::RescalingParameters& resc) {
  const bool has_T = cfg.has("stimulus.period");
  const bool has_Tt = cfg.has("stimulus.period_tilde");
  if (has_T == has_Tt)
    throw ConfigError("exactly one of 'stimulus.period' and 'stimulus.period_tilde' is required");
  double T = 0.0;
  if (has_T) {
    T = cfg.number("stimulus.period");
  } else {
    const double Tt = cfg.number("stimulus.period_tilde");
    T = guarded("stimulus", [&] { return ionic::rescale_period(Tt, resc); });
    // the echo carries the transformed period only
    cfg.forget("stimulus.period_tilde");
    cfg.record("stimulus.period", T);
  }
  const std::string kind =
      cfg.choice_or("stimulus.kind", "sinusoid", {"constant", "sinusoid", "pulse"});
  const double phi = cfg.number_or("stimulus.phi", 1.0);
  const double offset = cfg.number_or("stimulus.offset", 0.0);
  return guarded("stimulus", [&] {
    if (kind == "constant") return spectral::Stimulus::constant(T, offset, phi);
    const double amp = cfg.number_or("stimulus.amplitude", 1.0);
    if (kind == "sinusoid") return spectral::Stimulus::sinusoid(T, offset, amp, phi);
    const double center = cfg.number_or("stimulus.center", 0.0);
    const double width = cfg.number("stimulus.width");
    return spectral::Stimulus::pulse_train(T, offset, amp, center, width, phi);
  });
}

void read_initial(Config& cfg, InitialBlock& ib, bool allow_random) {
  ib.u = cfg.numbers_or("initial.u_coeffs", {});
  ib.w = cfg.numbers_or("initial.w_coeffs", {});
  if (!allow_random) return;
  ib.random = cfg.flag_or("initial.random", false);
  if (ib.random) {
    ib.random_amplitude = cfg.number_or("initial.random_amplitude", 1e-3);
    const int seed = cfg.integer_or("initial.seed", 0);
    if (seed < 0) throw ConfigError("key 'initial.seed': must be nonnegative");
    ib.seed = static_cast<unsigned>(seed);
  }
}

void read_time_stepping(Config& cfg, RunConfig& rc) {
  auto& s = rc.solver;
  const double T = rc.stimulus->period();
  if (cfg.has("solver.dt")) {
    s.dt = cfg.number("solver.dt");
    if (!(s.dt > 0.0)) throw ConfigError("key 'solver.dt': must be positive");
  } else {
    s.steps_per_period = cfg.integer_or("solver.steps_per_period", 4 * s.nodes);
    if (s.steps_per_period < 1) throw ConfigError("key 'solver.steps_per_period': must be >= 1");
    s.dt = T / s.steps_per_period;
  }
  if (cfg.has("solver.t_end")) {
    s.t_end = cfg.number("solver.t_end");
  } else {
    const int periods = cfg.integer_or("solver.periods", 1);
    if (periods < 1) throw ConfigError("key 'solver.periods': must be >= 1");
    s.t_end = periods * T;
  }
  if (!(s.t_end > 0.0)) throw ConfigError("key 'solver.t_end': must be positive");
  s.record_stride = cfg.integer_or("solver.record_stride", 1);
  if (s.record_stride < 1) throw ConfigError("key 'solver.record_stride': must be >= 1");
}

void read_dynamics(Config& cfg, RunConfig& rc) {
  rc.model = read_model(cfg);
  rc.geometry = read_geometry(cfg);
  rc.stimulus = read_stimulus(cfg, rc.model->resc);
}

int read_m(Config& cfg, const std::string& key, int fallback) {
  const int m = cfg.integer_or(key, fallback);
  if (m < 0) throw ConfigError("key '" + key + "': must be >= 0");
  return m;
}

std::vector<double> read_kappas(Config& cfg, const std::string& key) {
  const auto ks = cfg.numbers(key);
  if (ks.empty()) throw ConfigError("key '" + key + "': empty list");
  return ks;
}

FeasibilityBlock read_feasibility(Config& cfg, RunConfig& rc) {
  FeasibilityBlock fb;
  const bool direct = cfg.has("feasibility.beta") || cfg.has("feasibility.gamma") ||
                      cfg.has("feasibility.delta");
  if (any_key_with_prefix(cfg, "model.")) rc.model = read_model(cfg);

  if (direct) {
    const auto kappas = read_kappas(cfg, "feasibility.kappa");
    const double beta = cfg.number("feasibility.beta");
    const double gamma = cfg.number("feasibility.gamma");
    const double delta = cfg.number("feasibility.delta");
    for (double k : kappas)
      fb.aggregates.push_back(guarded("feasibility", [&] {
        return feasibility::AggregateConstants::direct(k, beta, gamma, delta);
      }));
  } else {
    if (!rc.model)
      throw ConfigError(
          "feasibility needs either feasibility.kappa/beta/gamma/delta or a model block");
    rc.geometry = read_geometry(cfg);
    rc.stimulus = read_stimulus(cfg, rc.model->resc);
    const auto& d = rc.model->derived;
    feasibility::RawConstants raw;
    raw.A1 = d.A1;
    raw.A2 = d.A2;
    raw.A3 = d.A3;
    raw.K1 = cfg.number("feasibility.K1");
    raw.K2 = cfg.number("feasibility.K2");
    raw.M_over_alpha = cfg.number_or("feasibility.M_over_alpha", 0.0);
    raw.trace_norm = cfg.number("feasibility.trace_norm");
    raw.phi_norm = cfg.number_or("feasibility.phi_norm", std::abs(rc.stimulus->phi()));
    raw.s_hat = cfg.number_or("feasibility.s_hat", rc.stimulus->sup());
    raw.omega_measure = rc.geometry.omega_measure();
    fb.raw = raw;
    fb.aggregates.push_back(
        guarded("feasibility", [&] { return feasibility::AggregateConstants::derived(raw); }));
  }

  if (cfg.has("feasibility.h0")) {
    fb.h0 = cfg.number("feasibility.h0");
  } else if (rc.model) {
    const auto& d = rc.model->derived;
    fb.h0 = guarded("model", [&] { return feasibility::h_at_zero(d.c4, d.epsilon, d.C); });
  } else {
    throw ConfigError("missing required key 'feasibility.h0' (or a model block)");
  }
  if (!(fb.h0 > 0.0)) throw ConfigError("key 'feasibility.h0': must be positive");

  if (rc.model) {
    fb.xi = rc.model->resc.xi;
    fb.c3 = rc.model->phys.c3;
  } else {
    fb.xi = read_rescaling(cfg).xi;
    fb.c3 = cfg.number_or("model.c3", 1.0);
  }
  fb.R = cfg.optional_number("feasibility.R");
  fb.T = cfg.optional_number("feasibility.T");
  fb.literal_exponent = cfg.flag_or("feasibility.literal_exponent", false);

  const double Rs = feasibility::r_star(fb.aggregates.front());
  fb.R_max = cfg.number_or("curves.R_max", 10.0 * Rs);
  fb.T_max = cfg.number_or("curves.T_max", 5.0 * fb.h0);
  fb.points = cfg.integer_or("curves.points", 201);
  if (!(fb.R_max > 0.0) || !(fb.T_max > 0.0) || fb.points < 2)
    throw ConfigError("curves block needs positive R_max, T_max and points >= 2");
  return fb;
}

RegionBlock read_region(Config& cfg, RunConfig& rc) {
  rc.model = read_model(cfg);
  rc.geometry = read_geometry(cfg);
  rc.stimulus = read_stimulus(cfg, rc.model->resc);
  const auto& d = rc.model->derived;

  RegionBlock rb;
  auto& rp = rb.params;
  rp.xi = d.xi;
  rp.c3 = d.c3;
  rp.K1 = cfg.number("feasibility.K1");
  rp.kappa = cfg.has("feasibility.kappa")
                 ? read_kappas(cfg, "feasibility.kappa").front()
                 : std::sqrt(2.0) / (2.0 * (1.0 + cfg.number_or("feasibility.M_over_alpha", 0.0)));
  rp.epsilon = d.epsilon;
  rp.C = d.C;
  rp.u_tr = d.u_tr;
  rp.u_pr = d.u_pr;
  rp.omega_measure = rc.geometry.omega_measure();
  const double trace = cfg.number("feasibility.trace_norm");
  const double phi = cfg.number_or("feasibility.phi_norm", std::abs(rc.stimulus->phi()));
  const double s_hat = cfg.number_or("feasibility.s_hat", rc.stimulus->sup());
  rp.B = s_hat * trace * phi;
  guarded("region", [&] { rp.validate(); return 0; });

  rb.literal = cfg.flag_or("region.literal", false);
  rb.a1_min = cfg.number_or("region.a1_min", 0.0);
  rb.a1_max = cfg.number("region.a1_max");
  rb.a1_count = cfg.integer_or("region.a1_count", 51);
  if (!(rb.a1_min >= 0.0 && rb.a1_max >= rb.a1_min) || rb.a1_count < 1)
    throw ConfigError("region block needs 0 <= a1_min <= a1_max and a1_count >= 1");
  const double top = feasibility::a2_bound(rb.a1_max, rp, rb.literal);
  rb.a2_max = cfg.number_or("region.a2_max", 1.25 * top);
  rb.a2_count = cfg.integer_or("region.a2_count", 51);
  if (!(rb.a2_max >= 0.0) || rb.a2_count < 1)
    throw ConfigError("region block needs a2_max >= 0 and a2_count >= 1");
  return rb;
}

}  // namespace

std::optional<Subcommand> parse_subcommand(const std::string& name) {
  if (name == "feasibility") return Subcommand::feasibility;
  if (name == "solve-cauchy") return Subcommand::solve_cauchy;
  if (name == "solve-periodic") return Subcommand::solve_periodic;
  if (name == "converge") return Subcommand::converge;
  if (name == "param-region") return Subcommand::param_region;
  return std::nullopt;
}

const char* subcommand_name(Subcommand cmd) {
  switch (cmd) {
    case Subcommand::feasibility: return "feasibility";
    case Subcommand::solve_cauchy: return "solve-cauchy";
    case Subcommand::solve_periodic: return "solve-periodic";
    case Subcommand::converge: return "converge";
    case Subcommand::param_region: return "param-region";
  }
  return "";
}

RunConfig resolve(Config& cfg, Subcommand cmd) {
  RunConfig rc;
  rc.command = cmd;
  auto& s = rc.solver;
  switch (cmd) {
    case Subcommand::feasibility:
      rc.feasibility = read_feasibility(cfg, rc);
      break;

    case Subcommand::solve_cauchy:
      read_dynamics(cfg, rc);
      s.m = read_m(cfg, "solver.m", s.m);
      s.n_quad = cfg.integer_or("solver.n_quad", 0);
      read_time_stepping(cfg, rc);
      read_initial(cfg, rc.initial, false);
      break;

    case Subcommand::solve_periodic: {
      read_dynamics(cfg, rc);
      s.m = read_m(cfg, "solver.m", s.m);
      s.n_quad = cfg.integer_or("solver.n_quad", 0);
      s.nodes = cfg.integer_or("solver.nodes", s.nodes);
      if (s.nodes < periodic::PeriodicGrid::kMinNodes)
        throw ConfigError("key 'solver.nodes': must be >= 64");
      s.steps_per_period = cfg.integer_or("solver.steps_per_period", 4 * s.nodes);
      if (s.steps_per_period < 1 || s.steps_per_period % s.nodes != 0)
        throw ConfigError("key 'solver.steps_per_period': must be a positive multiple of solver.nodes");
      s.dt = rc.stimulus->period() / s.steps_per_period;
      s.tol = cfg.number_or("solver.tol", s.tol);
      s.theta = cfg.number_or("solver.theta", s.theta);
      s.max_iter = cfg.integer_or("solver.max_iter", s.max_iter);
      if (!(s.tol > 0.0)) throw ConfigError("key 'solver.tol': must be positive");
      if (!(s.theta > 0.0 && s.theta <= 1.0))
        throw ConfigError("key 'solver.theta': must lie in (0, 1]");
      if (s.max_iter < 1) throw ConfigError("key 'solver.max_iter': must be >= 1");
      s.method = cfg.choice_or("solver.method", "both", {"picard", "shooting", "both"});
      s.farkas.literal_sign = cfg.flag_or("solver.literal_sign", false);
      s.farkas.quadrature =
          cfg.choice_or("solver.kernel_quadrature", "spectral",
                        {"spectral", "product_trapezoid"}) == "spectral"
              ? periodic::KernelQuadrature::spectral
              : periodic::KernelQuadrature::product_trapezoid;
      read_initial(cfg, rc.initial, true);
      rc.ball_radius = cfg.optional_number("ball.radius");
      if (rc.ball_radius && !(*rc.ball_radius >= 0.0))
        throw ConfigError("key 'ball.radius': must be nonnegative");
      break;
    }

    case Subcommand::converge:
      read_dynamics(cfg, rc);
      s.m_list = cfg.integers("solver.m_list");
      if (s.m_list.size() < 2) throw ConfigError("key 'solver.m_list': needs at least two entries");
      for (std::size_t i = 0; i < s.m_list.size(); ++i) {
        if (s.m_list[i] < 0) throw ConfigError("key 'solver.m_list': entries must be >= 0");
        if (i > 0 && s.m_list[i] < s.m_list[i - 1])
          throw ConfigError("key 'solver.m_list': must be nondecreasing");
      }
      read_time_stepping(cfg, rc);
      read_initial(cfg, rc.initial, false);
      break;

    case Subcommand::param_region:
      rc.region = read_region(cfg, rc);
      break;
  }
  return rc;
}

galerkin::GalerkinSystem build_system(const RunConfig& rc, int m) {
  if (!rc.model || !rc.stimulus) throw ConfigError("model and stimulus blocks are required");
  return guarded("solver", [&] {
    return galerkin::GalerkinSystem(
        spectral::build_basis(rc.geometry, m, rc.model->derived, rc.solver.n_quad),
        rc.model->derived, *rc.stimulus);
  });
}

galerkin::GalerkinState initial_state(const RunConfig& rc, int m) {
  const auto& ib = rc.initial;
  if (static_cast<int>(ib.u.size()) > m + 1 || static_cast<int>(ib.w.size()) > m + 1)
    throw ConfigError("initial coefficient lists are longer than m+1");
  Eigen::VectorXd u = Eigen::VectorXd::Zero(m + 1);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m + 1);
  for (std::size_t i = 0; i < ib.u.size(); ++i) u(static_cast<Eigen::Index>(i)) = ib.u[i];
  for (std::size_t i = 0; i < ib.w.size(); ++i) w(static_cast<Eigen::Index>(i)) = ib.w[i];
  return galerkin::GalerkinState::from_blocks(u, w, 0.0);
}

}  // namespace monoperiod::cli

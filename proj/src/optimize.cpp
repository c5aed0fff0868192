#include "qotto/optimize.hpp"

#include <cmath>
#include <limits>

#include "qotto/errors.hpp"
#include "qotto/parallel.hpp"
#include "qotto/rng.hpp"

namespace qotto {

std::vector<std::array<double, 4>> default_start_fractions() {
  return {
      {0.25, 0.25, 0.25, 0.25},     {0.45, 0.05, 0.45, 0.05},   {0.49, 0.01, 0.49, 0.01},
      {0.495, 0.005, 0.495, 0.005}, {0.6, 0.05, 0.3, 0.05},     {0.3, 0.05, 0.6, 0.05},
      {0.4, 0.1, 0.4, 0.1},         {0.35, 0.15, 0.35, 0.15},
  };
}

std::array<double, 4> fractions_from_logits(const Eigen::Vector3d& z, double floor_fraction) {
  const std::array<double, 4> logits{0.0, z[0], z[1], z[2]};
  double top = 0.0;
  for (double l : logits) top = std::max(top, l);
  std::array<double, 4> f{};
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    f[i] = std::exp(logits[i] - top);
    sum += f[i];
  }
  const double free = 1.0 - 4.0 * floor_fraction;
  for (double& v : f) v = floor_fraction + free * v / sum;
  return f;
}

Eigen::Vector3d logits_from_fractions(const std::array<double, 4>& f, double floor_fraction) {
  const double free = 1.0 - 4.0 * floor_fraction;
  std::array<double, 4> g{};
  for (int i = 0; i < 4; ++i) g[i] = std::max((f[i] - floor_fraction) / free, 1e-300);
  return {std::log(g[1] / g[0]), std::log(g[2] / g[0]), std::log(g[3] / g[0])};
}

namespace {

Schedule scaled(const std::array<double, 4>& f, double tau_total) {
  return Schedule::from_array({f[0] * tau_total, f[1] * tau_total, f[2] * tau_total, f[3] * tau_total});
}

std::array<double, 4> random_fractions(const SubstreamRng& rng, std::uint32_t index) {
  std::array<double, 4> f{};
  double sum = 0.0;
  for (std::uint32_t i = 0; i < 4; ++i) {
    const SubstreamRng::Uniforms u = rng.uniforms(index, 0xF00Du, i);
    f[i] = -std::log1p(-u.first);
    sum += f[i];
  }
  for (double& v : f) v /= sum;
  return f;
}

}  // namespace

OptimizeResult optimize_allocations(const EngineParams& params, double tau_total, const OptimizeOptions& options) {
  if (!(tau_total > 0.0) || !std::isfinite(tau_total)) throw InvalidArgument("tau_total must be > 0");
  if (!(options.floor_fraction > 0.0) || options.floor_fraction >= 0.25)
    throw InvalidArgument("floor_fraction must be in (0, 0.25)");
  params.validate();

  std::vector<std::array<double, 4>> starts = default_start_fractions();
  const SubstreamRng rng(options.seed);
  for (int k = 0; k < options.random_starts; ++k) starts.push_back(random_fractions(rng, static_cast<std::uint32_t>(k)));

  const double floor = options.floor_fraction;
  auto objective = [&](const Eigen::VectorXd& z) {
    try {
      return -cycle_power(params, scaled(fractions_from_logits(Eigen::Vector3d(z), floor), tau_total),
                          options.settings);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  OptimizeResult result;
  result.trace.resize(starts.size());
  parallel_for(starts.size(), options.threads, [&](std::size_t i) {
    StartRecord& rec = result.trace[i];
    rec.start_fractions = starts[i];
    const Eigen::VectorXd z0 = logits_from_fractions(starts[i], floor);
    const NelderMeadResult nm = nelder_mead(objective, z0, options.nelder_mead);
    rec.final_fractions = fractions_from_logits(Eigen::Vector3d(nm.x), floor);
    rec.evaluations = nm.evaluations;
    rec.converged = nm.converged;
    rec.power = -nm.value;
    rec.best_history.reserve(nm.best_history.size());
    for (double v : nm.best_history) rec.best_history.push_back(-v);
    if (!std::isfinite(nm.value)) rec.error = "no feasible point reached";
  });

  bool found = false;
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    const StartRecord& rec = result.trace[i];
    if (!rec.error.empty()) continue;
    if (!found || rec.power > result.power) {
      result.power = rec.power;
      result.best_start = i;
      found = true;
    }
  }
  if (!found) throw InfeasibleSchedule("every optimizer start failed at tau_total = " + std::to_string(tau_total));
  result.schedule = scaled(result.trace[result.best_start].final_fractions, tau_total);
  return result;
}

GridPoint grid_best(const EngineParams& params, double tau_total, int levels, const IntegratorSettings& settings,
                    int threads) {
  if (levels < 2) throw InvalidArgument("grid needs at least 2 levels");
  std::vector<std::array<int, 4>> points;
  for (int a = 1; a <= levels; ++a)
    for (int b = 0; a + b <= levels; ++b)
      for (int c = 1; a + b + c <= levels; ++c) points.push_back({a, b, c, levels - a - b - c});

  std::vector<double> power(points.size(), -std::numeric_limits<double>::infinity());
  auto schedule_of = [&](const std::array<int, 4>& p) {
    std::array<double, 4> f{};
    for (int i = 0; i < 4; ++i) f[i] = static_cast<double>(p[i]) / levels;
    return scaled(f, tau_total);
  };
  parallel_for(points.size(), threads, [&](std::size_t i) {
    try {
      power[i] = cycle_power(params, schedule_of(points[i]), settings);
    } catch (const Error&) {
    }
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i)
    if (power[i] > power[best]) best = i;
  return {schedule_of(points[best]), power[best]};
}

std::vector<CycleTimeRow> power_vs_cycle_time(const EngineParams& params, const std::vector<double>& taus,
                                              double lambda_ba, double lambda_ab, const OptimizeOptions& options) {
  EngineParams reference = params;
  reference.lambda_ab = 0.0;
  reference.lambda_ba = 0.0;
  EngineParams lubricated = params;
  lubricated.lambda_ab = lambda_ab;
  lubricated.lambda_ba = lambda_ba;
  lubricated.validate();

  OptimizeOptions inner = options;
  inner.threads = 1;
  std::vector<CycleTimeRow> rows(taus.size());
  parallel_for(taus.size(), options.threads, [&](std::size_t i) {
    CycleTimeRow& row = rows[i];
    row.tau = taus[i];
    const OptimizeResult opt = optimize_allocations(reference, taus[i], inner);
    row.schedule = opt.schedule;
    const CycleSummary ref = summarize_cycle(reference, opt.schedule, options.settings);
    const CycleSummary lub = summarize_cycle(lubricated, opt.schedule, options.settings);
    row.power_ref = ref.power;
    row.power_lubricated = lub.power;
    row.entropy_ref = ref.entropy_production;
    row.entropy_lubricated = lub.entropy_production;
    row.w_friction_ref = ref.w_friction;
    row.w_friction_lubricated = lub.w_friction;
  });
  return rows;
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::cycle_time: return "cycle_time";
    case SweepVariable::lambda: return "lambda";
    case SweepVariable::sigma: return "sigma";
    case SweepVariable::coupling: return "J";
  }
  return "?";
}

std::string to_string(SweepObjective o) {
  switch (o) {
    case SweepObjective::power: return "power";
    case SweepObjective::entropy_production: return "entropy_production";
    case SweepObjective::w_friction: return "w_friction";
  }
  return "?";
}

std::string to_string(SweepMode m) { return m == SweepMode::lindblad ? "lindblad" : "noise"; }

void SweepSpec::validate() const {
  if (grid.empty()) throw ValidationError("grid", "sweep grid is empty");
  for (double v : grid)
    if (!std::isfinite(v)) throw ValidationError("grid", "sweep grid has a non-finite value");
  if (grid.size() > 1) {
    const bool rising = grid[1] > grid[0];
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (rising ? !(grid[i] > grid[i - 1]) : !(grid[i] < grid[i - 1]))
        throw ValidationError("grid", "sweep grid must be strictly monotone");
  }
  if (!(lambda_ratio > 0.0) || !std::isfinite(lambda_ratio))
    throw ValidationError("lambda_ratio", "must be > 0");
  base.validate();
  schedule.validate();
}

DephasingPoint dephasing_point(const SweepSpec& spec, double x, int segments) {
  DephasingPoint d;
  if (spec.variable == SweepVariable::lambda) {
    d.lambda_ab = x;
  } else if (spec.variable == SweepVariable::sigma) {
    d.lambda_ab = lambda_for_sigma(x, spec.schedule.tau_ab, segments);
  } else {
    throw InvalidArgument("dephasing_point needs a lambda or sigma sweep");
  }
  d.lambda_ba = d.lambda_ab / spec.lambda_ratio;
  d.sigma_ab = spec.variable == SweepVariable::sigma ? x : sigma_for_lambda(d.lambda_ab, spec.schedule.tau_ab, segments);
  d.sigma_ba = sigma_for_lambda(d.lambda_ba, spec.schedule.tau_ba, segments);
  return d;
}

namespace {

double objective_of(SweepObjective o, const SweepRow& row) {
  switch (o) {
    case SweepObjective::power: return row.power;
    case SweepObjective::entropy_production: return row.entropy_production;
    case SweepObjective::w_friction: return row.w_friction;
  }
  return row.power;
}

}  // namespace

std::vector<SweepRow> lambda_sigma_sweep(const SweepSpec& spec, SweepMode mode, const NoiseConfig& noise,
                                         const IntegratorSettings& settings, int threads) {
  spec.validate();
  if (spec.variable != SweepVariable::lambda && spec.variable != SweepVariable::sigma)
    throw InvalidArgument("lambda_sigma_sweep needs a lambda or sigma grid");
  std::vector<SweepRow> rows(spec.grid.size());
  const double tau = spec.schedule.total();

  auto fill = [&](std::size_t i, int inner_threads) {
    SweepRow& row = rows[i];
    row.x = spec.grid[i];
    const DephasingPoint d = dephasing_point(spec, row.x, noise.segments);
    row.lambda_ab = d.lambda_ab;
    row.lambda_ba = d.lambda_ba;
    row.sigma_ab = d.sigma_ab;
    row.sigma_ba = d.sigma_ba;
    if (mode == SweepMode::lindblad) {
      EngineParams p = spec.base;
      p.lambda_ab = d.lambda_ab;
      p.lambda_ba = d.lambda_ba;
      const CycleSummary s = summarize_cycle(p, spec.schedule, settings);
      row.power = s.power;
      row.entropy_production = s.entropy_production;
      row.entropy_rate = s.entropy_production / tau;
      row.w_friction = s.w_friction;
    } else {
      NoiseConfig n = noise;
      n.kind = NoiseKind::segment_time;
      n.sigma_ab = d.sigma_ab;
      n.sigma_ba = d.sigma_ba;
      const MonteCarloResult mc = monte_carlo_cycle(spec.base, spec.schedule, n, inner_threads);
      row.power = mc.power.mean;
      row.power_se = mc.power.standard_error;
      row.entropy_production = mc.entropy_production.mean;
      row.entropy_rate = mc.entropy_rate.mean;
      row.entropy_rate_se = mc.entropy_rate.standard_error;
      row.w_friction = mc.w_friction.mean;
      row.w_friction_se = mc.w_friction.standard_error;
    }
    row.objective = objective_of(spec.objective, row);
  };

  if (mode == SweepMode::noise) {
    for (std::size_t i = 0; i < rows.size(); ++i) fill(i, threads);
  } else {
    parallel_for(rows.size(), threads, [&](std::size_t i) { fill(i, 1); });
  }
  return rows;
}

std::vector<SweepRow> coupling_sweep(const SweepSpec& spec, const IntegratorSettings& settings, int threads) {
  spec.validate();
  if (spec.variable != SweepVariable::coupling) throw InvalidArgument("coupling_sweep needs a J grid");
  std::vector<SweepRow> rows(spec.grid.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.x = spec.grid[i];
    EngineParams p = spec.base;
    p.coupling = row.x;
    row.lambda_ab = p.lambda_ab;
    row.lambda_ba = p.lambda_ba;
    const CycleSummary s = summarize_cycle(p, spec.schedule, settings);
    row.power = s.power;
    row.entropy_production = s.entropy_production;
    row.entropy_rate = s.entropy_production / spec.schedule.total();
    row.w_friction = s.w_friction;
    row.objective = objective_of(spec.objective, row);
  });
  return rows;
}

std::vector<FrictionTrace> friction_traces(const SweepSpec& spec, const IntegratorSettings& settings, int threads) {
  spec.validate();
  std::vector<FrictionTrace> traces(spec.grid.size());
  parallel_for(traces.size(), threads, [&](std::size_t i) {
    const DephasingPoint d = dephasing_point(spec, spec.grid[i], settings.segments);
    EngineParams p = spec.base;
    p.lambda_ab = d.lambda_ab;
    p.lambda_ba = d.lambda_ba;
    const CycleRecord rec = run_cycle(p, spec.schedule, kDefaultResolution, settings);
    traces[i] = {d.lambda_ab, d.lambda_ba, rec.expansion_work, rec.compression_work};
  });
  return traces;
}

}  // namespace qotto

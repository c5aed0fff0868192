#include "qotto/cycle.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "qotto/algebra.hpp"
#include "qotto/errors.hpp"

namespace qotto {

namespace {

void require(bool ok, const char* key, const std::string& message) {
  if (!ok) throw ValidationError(key, message);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

void EngineParams::validate() const {
  require(std::isfinite(coupling), "J", "must be finite");
  require(std::isfinite(omega_a) && omega_a > 0.0, "omega_a", "must be > 0");
  require(std::isfinite(omega_b) && omega_b > omega_a, "omega_b", "must exceed omega_a");
  require(std::isfinite(t_cold) && t_cold > 0.0, "T_c", "must be > 0");
  require(std::isfinite(t_hot) && t_hot > 0.0, "T_h", "must be > 0");
  require(t_hot > t_cold, "T_c", "cold bath hotter than hot bath");
  require(finite_nonneg(gamma_hot), "Gamma_h", "must be >= 0");
  require(finite_nonneg(gamma_cold), "Gamma_c", "must be >= 0");
  require(std::isfinite(dephasing_hot), "gamma_h", "must be finite");
  require(std::isfinite(dephasing_cold), "gamma_c", "must be finite");
  require(finite_nonneg(lambda_ab), "Lambda_ab", "must be >= 0");
  require(finite_nonneg(lambda_ba), "Lambda_ba", "must be >= 0");
}

IsochoreParams EngineParams::hot_isochore() const { return {omega_b, t_hot, gamma_hot, dephasing_hot}; }

IsochoreParams EngineParams::cold_isochore() const { return {omega_a, t_cold, gamma_cold, dephasing_cold}; }

EngineParams EngineParams::reference() { return EngineParams{}; }

void Schedule::validate() const {
  require(finite_nonneg(tau_h), "tau_h", "must be >= 0");
  require(finite_nonneg(tau_ba), "tau_ba", "must be >= 0");
  require(finite_nonneg(tau_c), "tau_c", "must be >= 0");
  require(finite_nonneg(tau_ab), "tau_ab", "must be >= 0");
  require(tau_h > 0.0, "tau_h", "hot isochore needs a positive time allocation");
  require(tau_c > 0.0, "tau_c", "cold isochore needs a positive time allocation");
}

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::hot: return "h";
    case Branch::expansion: return "ba";
    case Branch::cold: return "c";
    case Branch::compression: return "ab";
  }
  return "?";
}

const AffineMap& BranchMaps::operator[](Branch b) const {
  switch (b) {
    case Branch::hot: return hot;
    case Branch::expansion: return expansion;
    case Branch::cold: return cold;
    case Branch::compression: return compression;
  }
  return hot;
}

AffineMap BranchMaps::cycle_from(Branch anchor) const {
  AffineMap out;
  int k = static_cast<int>(anchor);
  for (int step = 0; step < 4; ++step, k = (k + 1) % 4) out = out.then((*this)[static_cast<Branch>(k)]);
  return out;
}

AdiabatParams expansion_adiabat(const EngineParams& params, const Schedule& schedule,
                                const IntegratorSettings& settings) {
  return {params.omega_b, params.omega_a, schedule.tau_ba, params.lambda_ba, settings.segments, settings.ladder};
}

AdiabatParams compression_adiabat(const EngineParams& params, const Schedule& schedule,
                                  const IntegratorSettings& settings) {
  return {params.omega_a, params.omega_b, schedule.tau_ab, params.lambda_ab, settings.segments, settings.ladder};
}

BranchMaps branch_maps(const EngineParams& params, const Schedule& schedule, const IntegratorSettings& settings) {
  params.validate();
  for (double t : schedule.as_array())
    if (!finite_nonneg(t)) throw InvalidArgument("branch times must be >= 0");
  BranchMaps maps;
  maps.hot = isochore_generator(params.hot_isochore(), params.coupling).exponentiate(schedule.tau_h);
  maps.expansion = adiabat_map(expansion_adiabat(params, schedule, settings), params.coupling);
  maps.cold = isochore_generator(params.cold_isochore(), params.coupling).exponentiate(schedule.tau_c);
  maps.compression = adiabat_map(compression_adiabat(params, schedule, settings), params.coupling);
  return maps;
}

double spectral_radius(const Matrix5& m) {
  Eigen::EigenSolver<Matrix5> solver(m, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

IterationResult iterate_limit_cycle(const AffineMap& cycle, const BVector& start, double tolerance,
                                    int max_iterations) {
  IterationResult out;
  out.b = start;
  for (int k = 0; k < max_iterations; ++k) {
    const BVector next = cycle.apply(out.b);
    const double step = (next - out.b).norm();
    out.b = next;
    out.iterations = k + 1;
    if (step < tolerance) {
      out.converged = true;
      break;
    }
  }
  return out;
}

BVector limit_cycle(const AffineMap& cycle) {
  const double rho = spectral_radius(cycle.linear);
  if (!(rho < 1.0 - 1e-12))
    throw NoContraction("cycle map is not contracting (spectral radius " + std::to_string(rho) + ")");
  const Matrix5 a = Matrix5::Identity() - cycle.linear;
  const BVector b = a.fullPivLu().solve(cycle.offset);
  if ((a * b - cycle.offset).norm() <= 1e-12) return b;
  const IterationResult it = iterate_limit_cycle(cycle, b);
  if (!it.converged) throw NoContraction("limit-cycle iteration did not converge");
  return it.b;
}

namespace {

std::vector<WorkTracePoint> work_trace(std::span<const PathPoint> path, double coupling) {
  const std::vector<WorkSplit> acc = accumulated_work_trace(path, coupling);
  std::vector<WorkTracePoint> out;
  out.reserve(path.size());
  for (std::size_t k = 0; k < path.size(); ++k)
    out.push_back({path[k].t, path[k].omega, std::hypot(path[k].omega, coupling), acc[k].friction, acc[k].field});
  return out;
}

template <typename T>
std::vector<T> downsample(const std::vector<T>& v, int resolution) {
  const std::size_t intervals = v.size() - 1;
  if (resolution <= 0 || intervals <= static_cast<std::size_t>(resolution)) return v;
  std::vector<T> out;
  out.reserve(resolution + 1);
  for (int s = 0; s <= resolution; ++s)
    out.push_back(v[static_cast<std::size_t>(std::llround(static_cast<double>(s) * intervals / resolution))]);
  return out;
}

struct Pass {
  Propagation hot, expansion, cold, compression;
};

Pass propagate_pass(const EngineParams& params, const Schedule& schedule, const IntegratorSettings& settings,
                    const BVector& start, int isochore_samples) {
  Pass pass;
  pass.hot = isochore_propagate(params.hot_isochore(), params.coupling, schedule.tau_h, start, isochore_samples);
  pass.expansion =
      adiabat_propagate(expansion_adiabat(params, schedule, settings), params.coupling, pass.hot.final);
  pass.cold = isochore_propagate(params.cold_isochore(), params.coupling, schedule.tau_c, pass.expansion.final,
                                 isochore_samples);
  pass.compression =
      adiabat_propagate(compression_adiabat(params, schedule, settings), params.coupling, pass.cold.final);
  return pass;
}

CycleSummary summary_of(const EngineParams& params, const Schedule& schedule, const BVector& start,
                        const BVector& after_hot, const BVector& after_expansion, const BVector& after_cold,
                        const BVector& after_compression) {
  const double j = params.coupling;
  CycleSummary s;
  s.q_h = energy(after_hot, params.omega_b, j) - energy(start, params.omega_b, j);
  s.q_c = energy(after_cold, params.omega_a, j) - energy(after_expansion, params.omega_a, j);
  s.w_net = (energy(after_expansion, params.omega_a, j) - energy(after_hot, params.omega_b, j)) +
            (energy(after_compression, params.omega_b, j) - energy(after_cold, params.omega_a, j));
  s.tau = schedule.total();
  s.power = s.tau > 0.0 ? -s.w_net / s.tau : 0.0;
  s.entropy_production = entropy_production(s.q_h, s.q_c, params.t_hot, params.t_cold);
  return s;
}

}  // namespace

CycleSummary pass_summary(const EngineParams& params, const Schedule& schedule, const BranchMaps& maps,
                          const BVector& start) {
  const BVector h = maps.hot.apply(start);
  const BVector ba = maps.expansion.apply(h);
  const BVector c = maps.cold.apply(ba);
  const BVector ab = maps.compression.apply(c);
  return summary_of(params, schedule, start, h, ba, c, ab);
}

double cycle_power(const EngineParams& params, const Schedule& schedule, const IntegratorSettings& settings) {
  const BranchMaps maps = branch_maps(params, schedule, settings);
  const BVector anchor = limit_cycle(maps.cycle());
  return pass_summary(params, schedule, maps, anchor).power;
}

CycleSummary summarize_cycle(const EngineParams& params, const Schedule& schedule,
                             const IntegratorSettings& settings) {
  const BranchMaps maps = branch_maps(params, schedule, settings);
  const BVector anchor = limit_cycle(maps.cycle());
  const Pass pass = propagate_pass(params, schedule, settings, anchor, 0);
  CycleSummary s = summary_of(params, schedule, anchor, pass.hot.final, pass.expansion.final, pass.cold.final,
                              pass.compression.final);
  const WorkSplit ba = accumulate_works(pass.expansion.path, params.coupling);
  const WorkSplit ab = accumulate_works(pass.compression.path, params.coupling);
  s.w_friction = ba.friction + ab.friction;
  s.w_field = ba.field + ab.field;
  return s;
}

CycleRecord run_cycle(const EngineParams& params, const Schedule& schedule, int resolution,
                      const IntegratorSettings& settings) {
  if (resolution < 1) throw InvalidArgument("resolution must be >= 1");
  const BranchMaps maps = branch_maps(params, schedule, settings);
  CycleRecord record;
  record.anchor = limit_cycle(maps.cycle());
  const Pass pass = propagate_pass(params, schedule, settings, record.anchor, resolution);
  const double j = params.coupling;

  record.summary = summary_of(params, schedule, record.anchor, pass.hot.final, pass.expansion.final,
                              pass.cold.final, pass.compression.final);
  const WorkSplit ba = accumulate_works(pass.expansion.path, j);
  const WorkSplit ab = accumulate_works(pass.compression.path, j);
  record.summary.w_friction = ba.friction + ab.friction;
  record.summary.w_field = ba.field + ab.field;
  record.expansion_work = downsample(work_trace(pass.expansion.path, j), resolution);
  record.compression_work = downsample(work_trace(pass.compression.path, j), resolution);

  const AffineGenerator hot_gen = isochore_generator(params.hot_isochore(), j);
  const AffineGenerator cold_gen = isochore_generator(params.cold_isochore(), j);

  double t0 = 0.0;
  auto emit = [&](Branch branch, const std::vector<PathPoint>& path, double branch_time) {
    record.boundaries[static_cast<int>(branch)] = record.samples.size();
    if (branch_time <= 0.0) return;
    const bool isochore = branch == Branch::hot || branch == Branch::cold;
    const double omega_dot = isochore ? 0.0 : (path.back().omega - path.front().omega) / branch_time;
    const double lambda = branch == Branch::expansion ? params.lambda_ba : params.lambda_ab;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const PathPoint& p = path[k];
      ThermoSample s;
      s.t = t0 + p.t;
      s.omega = p.omega;
      s.b = p.b;
      s.energy = energy(p.b, p.omega, j);
      if (isochore) {
        s.heat_flow = heat_flow(branch == Branch::hot ? hot_gen : cold_gen, p.b, p.omega, j);
      } else {
        s.power_field = power_field(p.omega, omega_dot, j, p.b);
        s.power_friction = power_friction(p.omega, omega_dot, j, p.b);
        s.heat_flow = heat_flow({lambda * dephasing_generator(p.omega, j), Vector5::Zero()}, p.b, p.omega, j);
      }
      s.energy_entropy = energy_entropy(p.b, p.omega, j);
      s.von_neumann_entropy = von_neumann_entropy(p.b);
      record.samples.push_back(s);
      record.branch_of.push_back(branch);
    }
    t0 += branch_time;
  };
  emit(Branch::hot, pass.hot.path, schedule.tau_h);
  emit(Branch::expansion, downsample(pass.expansion.path, resolution), schedule.tau_ba);
  emit(Branch::cold, pass.cold.path, schedule.tau_c);
  emit(Branch::compression, downsample(pass.compression.path, resolution), schedule.tau_ab);

  // Closing point of the period.
  const BVector& last = pass.compression.final;
  ThermoSample end;
  end.t = schedule.total();
  end.omega = params.omega_b;
  end.b = last;
  end.energy = energy(last, params.omega_b, j);
  if (schedule.tau_ab > 0.0) {
    const double omega_dot = (params.omega_b - params.omega_a) / schedule.tau_ab;
    end.power_field = power_field(params.omega_b, omega_dot, j, last);
    end.power_friction = power_friction(params.omega_b, omega_dot, j, last);
  }
  end.energy_entropy = energy_entropy(last, params.omega_b, j);
  end.von_neumann_entropy = von_neumann_entropy(last);
  record.samples.push_back(end);
  record.branch_of.push_back(Branch::compression);
  record.boundaries[4] = record.samples.size();
  return record;
}

}  // namespace qotto

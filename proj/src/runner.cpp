#include "qotto/runner.hpp"

#include <cinttypes>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qotto/errors.hpp"

namespace qotto {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : file_(std::fopen(path.c_str(), "w")), columns_(header.size()) {
  if (!file_) throw InvalidArgument("cannot open '" + path + "' for writing");
  for (const std::string& h : header) *this << h;
  end_row();
}

CsvWriter::~CsvWriter() {
  if (file_) std::fclose(file_);
}

void CsvWriter::separator() {
  if (column_ > 0) std::fputc(',', file_);
  ++column_;
}

CsvWriter& CsvWriter::operator<<(double v) {
  separator();
  std::fputs(format_double(v).c_str(), file_);
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& v) {
  separator();
  std::fputs(v.c_str(), file_);
  return *this;
}

void CsvWriter::end_row() {
  if (column_ != columns_) throw InvalidArgument("CSV row has " + std::to_string(column_) + " fields, header has " +
                                                 std::to_string(columns_));
  std::fputc('\n', file_);
  column_ = 0;
}

namespace {

namespace fs = std::filesystem;

struct Output {
  fs::path dir;
  RunResult result;

  std::string path(const std::string& name) {
    result.files.push_back(name);
    return (dir / name).string();
  }
};

void write_cycle(const RunConfig& c, Output& out) {
  const CycleRecord rec = run_cycle(c.engine, c.schedule, c.resolution, c.integrator);
  {
    CsvWriter csv(out.path("cycle.csv"), {"t", "omega", "b1", "b2", "b3", "b4", "b5", "E", "S_E", "S_vn", "P_field",
                                          "P_friction", "Qdot", "branch"});
    for (std::size_t i = 0; i < rec.samples.size(); ++i) {
      const ThermoSample& s = rec.samples[i];
      csv << s.t << s.omega;
      for (int k = 0; k < 5; ++k) csv << s.b[k];
      csv << s.energy << s.energy_entropy << s.von_neumann_entropy << s.power_field << s.power_friction
          << s.heat_flow << branch_name(rec.branch_of[i]);
      csv.end_row();
    }
  }
  {
    CsvWriter csv(out.path("cycle_summary.csv"),
                  {"tau", "W_net", "W_friction", "W_field", "Q_h", "Q_c", "power", "entropy_production"});
    const CycleSummary& s = rec.summary;
    csv << s.tau << s.w_net << s.w_friction << s.w_field << s.q_h << s.q_c << s.power << s.entropy_production;
    csv.end_row();
  }
  {
    CsvWriter csv(out.path("work_traces.csv"), {"branch", "t", "omega", "Omega", "W_friction", "W_field"});
    for (const auto& [name, trace] : {std::pair{"ba", &rec.expansion_work}, std::pair{"ab", &rec.compression_work}})
      for (const WorkTracePoint& p : *trace) {
        csv << name << p.t << p.omega << p.scale << p.w_friction << p.w_field;
        csv.end_row();
      }
  }
}

void write_power_vs_tau(const RunConfig& c, Output& out) {
  const std::vector<CycleTimeRow> rows = power_vs_cycle_time(
      c.engine, c.sweep.grid, c.sweep.lubricated_lambda_ba, c.sweep.lubricated_lambda_ab, c.optimize_options());
  CsvWriter csv(out.path("power_vs_tau.csv"),
                {"tau", "tau_h", "tau_ba", "tau_c", "tau_ab", "P_ref", "P_lubricated", "dS_ref", "dS_lubricated",
                 "W_friction_ref", "W_friction_lubricated"});
  for (const CycleTimeRow& r : rows) {
    csv << r.tau << r.schedule.tau_h << r.schedule.tau_ba << r.schedule.tau_c << r.schedule.tau_ab << r.power_ref
        << r.power_lubricated << r.entropy_ref << r.entropy_lubricated << r.w_friction_ref << r.w_friction_lubricated;
    csv.end_row();
  }
}

void write_sweep_rows(const std::string& path, const std::vector<SweepRow>& rows, SweepObjective objective) {
  CsvWriter csv(path, {"x", "Lambda_ab", "Lambda_ba", "sigma_ab", "sigma_ba", "power", "power_se",
                       "entropy_production", "entropy_rate", "entropy_rate_se", "W_friction", "W_friction_se",
                       to_string(objective)});
  for (const SweepRow& r : rows) {
    csv << r.x << r.lambda_ab << r.lambda_ba << r.sigma_ab << r.sigma_ba << r.power << r.power_se
        << r.entropy_production << r.entropy_rate << r.entropy_rate_se << r.w_friction << r.w_friction_se
        << r.objective;
    csv.end_row();
  }
}

void write_sweep(const RunConfig& c, Output& out) {
  const SweepSpec spec = c.sweep_spec();
  switch (c.sweep.variable) {
    case SweepVariable::cycle_time:
      write_power_vs_tau(c, out);
      return;
    case SweepVariable::coupling:
      write_sweep_rows(out.path("sweep_J.csv"), coupling_sweep(spec, c.integrator, c.threads), c.sweep.objective);
      return;
    case SweepVariable::lambda:
    case SweepVariable::sigma:
      break;
  }
  // Both modes use the noise segment ladder so that the curves overlay.
  const IntegratorSettings ladder{c.noise.segments, OmegaLadder::right_endpoint};
  for (SweepMode mode : c.sweep.modes) {
    const std::vector<SweepRow> rows = lambda_sigma_sweep(spec, mode, c.noise, ladder, c.threads);
    write_sweep_rows(out.path("sweep_" + to_string(mode) + ".csv"), rows, c.sweep.objective);
  }
  CsvWriter csv(out.path("friction_traces.csv"),
                {"Lambda_ab", "Lambda_ba", "branch", "t", "omega", "Omega", "W_friction", "W_field"});
  for (const FrictionTrace& tr : friction_traces(spec, ladder, c.threads))
    for (const auto& [name, trace] : {std::pair{"ba", &tr.expansion}, std::pair{"ab", &tr.compression}})
      for (const WorkTracePoint& p : *trace) {
        csv << tr.lambda_ab << tr.lambda_ba << name << p.t << p.omega << p.scale << p.w_friction << p.w_field;
        csv.end_row();
      }
}

void write_optimize(const RunConfig& c, Output& out) {
  if (!c.sweep.grid.empty() && c.sweep.variable == SweepVariable::cycle_time) {
    write_power_vs_tau(c, out);
    return;
  }
  const OptimizeResult r = optimize_allocations(c.engine, c.tau_total, c.optimize_options());
  {
    CsvWriter csv(out.path("optimize.csv"), {"tau_total", "tau_h", "tau_ba", "tau_c", "tau_ab", "power", "best_start"});
    csv << c.tau_total << r.schedule.tau_h << r.schedule.tau_ba << r.schedule.tau_c << r.schedule.tau_ab << r.power
        << static_cast<double>(r.best_start);
    csv.end_row();
  }
  CsvWriter csv(out.path("optimize_trace.csv"),
                {"start", "f_h0", "f_ba0", "f_c0", "f_ab0", "f_h", "f_ba", "f_c", "f_ab", "power", "evaluations",
                 "converged", "error"});
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const StartRecord& s = r.trace[i];
    csv << static_cast<double>(i);
    for (double f : s.start_fractions) csv << f;
    for (double f : s.final_fractions) csv << f;
    csv << s.power << static_cast<double>(s.evaluations) << (s.converged ? "true" : "false") << s.error;
    csv.end_row();
  }
}

void write_ensemble(const MonteCarloResult& mc, const std::string& path) {
  CsvWriter csv(path, {"quantity", "mean", "standard_error", "iid_standard_error", "batch_standard_error", "reference"});
  const CycleSummary& ref = mc.reference;
  const double tau = mc.nominal_cycle_time;
  const std::pair<const char*, std::pair<const EnsembleStat*, double>> rows[] = {
      {"power", {&mc.power, ref.power}},
      {"entropy_production", {&mc.entropy_production, ref.entropy_production}},
      {"entropy_rate", {&mc.entropy_rate, ref.entropy_production / tau}},
      {"W_friction", {&mc.w_friction, ref.w_friction}},
      {"W_net", {&mc.w_net, ref.w_net}},
      {"Q_h", {&mc.q_h, ref.q_h}},
      {"Q_c", {&mc.q_c, ref.q_c}},
  };
  for (const auto& [name, v] : rows) {
    csv << name << v.first->mean << v.first->standard_error << v.first->iid_standard_error
        << v.first->batch_standard_error << v.second;
    csv.end_row();
  }
  csv << "cycle_time" << mc.mean_cycle_time << 0.0 << 0.0 << 0.0 << tau;
  csv.end_row();
}

void write_batches(const MonteCarloResult& mc, const std::string& path) {
  CsvWriter csv(path, {"batch", "power", "entropy_rate"});
  for (std::size_t i = 0; i < mc.batch_power.size(); ++i) {
    csv << static_cast<double>(i) << mc.batch_power[i] << mc.batch_entropy_rate[i];
    csv.end_row();
  }
}

void write_montecarlo(const RunConfig& c, Output& out) {
  const MonteCarloResult mc = monte_carlo_cycle(c.engine, c.schedule, c.noise, c.threads);
  write_ensemble(mc, out.path("montecarlo.csv"));
  write_batches(mc, out.path("montecarlo_batches.csv"));
}

void write_control(const RunConfig& c, Output& out) {
  NoiseConfig noise = c.noise;
  noise.kind = NoiseKind::frequency;
  const MonteCarloResult mc = monte_carlo_cycle(c.engine, c.schedule, noise, c.threads);
  write_ensemble(mc, out.path("control.csv"));
  write_batches(mc, out.path("control_batches.csv"));
}

}  // namespace

RunResult run(const RunConfig& config) {
  config.validate();
  Output out{config.output_dir, {}};
  fs::create_directories(out.dir);
  {
    std::ofstream manifest(out.path("manifest.json"));
    manifest << manifest_json(config).dump(2) << '\n';
    if (!manifest) throw InvalidArgument("cannot write manifest.json");
  }
  switch (config.mode) {
    case RunMode::cycle: write_cycle(config, out); break;
    case RunMode::sweep: write_sweep(config, out); break;
    case RunMode::optimize: write_optimize(config, out); break;
    case RunMode::montecarlo: write_montecarlo(config, out); break;
    case RunMode::control: write_control(config, out); break;
  }
  return out.result;
}

int run_with_exit_code(const RunConfig& config) {
  try {
    const RunResult r = run(config);
    for (const std::string& f : r.files) std::cout << (fs::path(config.output_dir) / f).string() << '\n';
    return kExitOk;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace qotto

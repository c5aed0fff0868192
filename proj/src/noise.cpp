#include "qotto/noise.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qotto/algebra.hpp"
#include "qotto/errors.hpp"
#include "qotto/parallel.hpp"

namespace qotto {

std::string to_string(NoiseDistribution d) { return d == NoiseDistribution::uniform ? "uniform" : "gaussian"; }

std::string to_string(NoiseKind k) { return k == NoiseKind::segment_time ? "segment_time" : "frequency"; }

std::string to_string(EnsembleMode m) { return m == EnsembleMode::restart ? "restart" : "continuous"; }

void NoiseConfig::validate() const {
  if (segments < 1) throw ValidationError("segments", "must be >= 1");
  if (!(sigma_ab >= 0.0) || !std::isfinite(sigma_ab)) throw ValidationError("sigma_ab", "must be >= 0");
  if (!(sigma_ba >= 0.0) || !std::isfinite(sigma_ba)) throw ValidationError("sigma_ba", "must be >= 0");
  if (n_cycles < 1) throw ValidationError("n_cycles", "must be >= 1");
  if (n_batches < 2 || n_batches > n_cycles) throw ValidationError("n_batches", "must be in [2, n_cycles]");
}

double sigma_for_lambda(double lambda, double tau_ad, int segments) {
  if (!(lambda >= 0.0) || !(tau_ad >= 0.0) || segments < 1)
    throw InvalidArgument("sigma_for_lambda needs Lambda >= 0, tau >= 0, N >= 1");
  return std::sqrt(2.0 * tau_ad * lambda / segments);
}

double lambda_for_sigma(double sigma, double tau_ad, int segments) {
  if (!(sigma >= 0.0) || segments < 1) throw InvalidArgument("lambda_for_sigma needs sigma >= 0, N >= 1");
  if (sigma == 0.0) return 0.0;
  if (!(tau_ad > 0.0)) throw InvalidArgument("lambda_for_sigma needs tau > 0 when sigma > 0");
  return segments * sigma * sigma / (2.0 * tau_ad);
}

double unit_variate(NoiseDistribution d, const SubstreamRng::Uniforms& u) {
  if (d == NoiseDistribution::uniform) return std::numbers::sqrt3 * (2.0 * u.first - 1.0);
  // Box-Muller; 1 - u lies in (0, 1].
  return std::sqrt(-2.0 * std::log1p(-u.first)) * std::cos(2.0 * std::numbers::pi * u.second);
}

namespace {

void check_positive_times(double tau, int segments, double sigma, NoiseDistribution d) {
  if (sigma == 0.0) return;
  const double nominal = tau / segments;
  if (d == NoiseDistribution::gaussian)
    throw InvalidSigma("gaussian segment noise cannot guarantee positive segment times");
  if (!(std::numbers::sqrt3 * sigma < nominal))
    throw InvalidSigma("uniform noise with sigma " + std::to_string(sigma) +
                       " can produce non-positive segment times (needs sigma < tau/(N sqrt 3) = " +
                       std::to_string(nominal / std::numbers::sqrt3) + ")");
}

struct JumpBook {
  double friction = 0.0;
  double field = 0.0;
  double work = 0.0;

  void add(double from, double to, double coupling, const BVector& b) {
    const double d = to - from;
    if (d == 0.0) return;
    const double mid = 0.5 * (from + to);
    const double s2 = mid * mid + coupling * coupling;
    work += d * b[0];
    if (s2 > 0.0) {
      friction += d * coupling * (coupling * b[0] - mid * b[1]) / s2;
      field += d * mid * (mid * b[0] + coupling * b[1]) / s2;
    } else {
      field += d * b[0];
    }
  }
};

}  // namespace

std::vector<double> sample_segment_times(double tau, int segments, double sigma, const NoiseStream& stream,
                                         bool allow_time_reversal) {
  if (segments < 1) throw InvalidArgument("need at least one segment");
  if (!(sigma >= 0.0)) throw InvalidSigma("sigma must be >= 0");
  if (!allow_time_reversal) check_positive_times(tau, segments, sigma, stream.distribution);
  const double nominal = tau / segments;
  std::vector<double> dt(static_cast<std::size_t>(segments), nominal);
  if (sigma > 0.0)
    for (int k = 0; k < segments; ++k) dt[k] = nominal + sigma * stream.variate(k);
  return dt;
}

NoisyAdiabat noisy_adiabat(const BVector& b0, double omega_start, double omega_end, double tau, int segments,
                           double sigma, double coupling, const NoiseStream& stream, bool allow_time_reversal) {
  const std::vector<double> dt = sample_segment_times(tau, segments, sigma, stream, allow_time_reversal);
  NoisyAdiabat out;
  JumpBook book;
  BVector b = b0;
  double previous = omega_start;
  for (int k = 0; k < segments; ++k) {
    const double omega = omega_start + (omega_end - omega_start) * (k + 1) / segments;
    book.add(previous, omega, coupling, b);
    b = segment_map(omega, coupling, 0.0, dt[k]) * b;
    out.duration += dt[k];
    previous = omega;
  }
  out.final = b;
  out.work = book.work;
  out.w_friction = book.friction;
  out.w_field = book.field;
  return out;
}

Matrix5 noisy_adiabat_map(double omega_start, double omega_end, double tau, int segments, double sigma,
                          double coupling, const NoiseStream& stream) {
  const std::vector<double> dt = sample_segment_times(tau, segments, sigma, stream, true);
  Matrix5 m = Matrix5::Identity();
  for (int k = 0; k < segments; ++k) {
    const double omega = omega_start + (omega_end - omega_start) * (k + 1) / segments;
    m = segment_map(omega, coupling, 0.0, dt[k]) * m;
  }
  return m;
}

NoisyAdiabat frequency_noise_adiabat(const BVector& b0, double omega_start, double omega_end, double tau,
                                     int segments, double sigma_omega, double coupling, const NoiseStream& stream) {
  if (segments < 1) throw InvalidArgument("need at least one segment");
  if (!(sigma_omega >= 0.0)) throw InvalidSigma("sigma must be >= 0");
  const double dt = tau / segments;
  NoisyAdiabat out;
  JumpBook book;
  BVector b = b0;
  double previous = omega_start;
  for (int k = 0; k < segments; ++k) {
    double omega = omega_start + (omega_end - omega_start) * (k + 1) / segments;
    if (sigma_omega > 0.0) omega += sigma_omega * stream.variate(k);
    book.add(previous, omega, coupling, b);
    b = segment_map(omega, coupling, 0.0, dt) * b;
    previous = omega;
  }
  book.add(previous, omega_end, coupling, b);
  out.final = b;
  out.work = book.work;
  out.w_friction = book.friction;
  out.w_field = book.field;
  out.duration = tau;
  return out;
}

Matrix5 frequency_noise_adiabat_map(double omega_start, double omega_end, double tau, int segments,
                                    double sigma_omega, double coupling, const NoiseStream& stream) {
  const double dt = tau / segments;
  Matrix5 m = Matrix5::Identity();
  for (int k = 0; k < segments; ++k) {
    double omega = omega_start + (omega_end - omega_start) * (k + 1) / segments;
    if (sigma_omega > 0.0) omega += sigma_omega * stream.variate(k);
    m = segment_map(omega, coupling, 0.0, dt) * m;
  }
  return m;
}

EngineParams equivalent_lindblad_params(const EngineParams& params, const Schedule& schedule,
                                        const NoiseConfig& noise) {
  EngineParams out = params;
  if (noise.kind == NoiseKind::segment_time) {
    out.lambda_ab = lambda_for_sigma(noise.sigma_ab, schedule.tau_ab, noise.segments);
    out.lambda_ba = lambda_for_sigma(noise.sigma_ba, schedule.tau_ba, noise.segments);
  } else {
    out.lambda_ab = 0.0;
    out.lambda_ba = 0.0;
  }
  return out;
}

namespace {

struct CycleOutcome {
  double w_net = 0.0;
  double q_h = 0.0;
  double q_c = 0.0;
  double w_friction = 0.0;
  double duration = 0.0;
  BVector end = BVector::Zero();
};

constexpr std::uint32_t kExpansionBranch = 1;
constexpr std::uint32_t kCompressionBranch = 3;

CycleOutcome noisy_pass(const EngineParams& p, const Schedule& s, const NoiseConfig& noise, const BranchMaps& maps,
                        const SubstreamRng& rng, std::uint64_t cycle, const BVector& start) {
  const double j = p.coupling;
  CycleOutcome out;
  const BVector after_hot = maps.hot.apply(start);
  out.q_h = energy(after_hot, p.omega_b, j) - energy(start, p.omega_b, j);

  const NoiseStream ba{rng, cycle, kExpansionBranch, noise.distribution};
  const NoiseStream ab{rng, cycle, kCompressionBranch, noise.distribution};
  const bool time_noise = noise.kind == NoiseKind::segment_time;

  const NoisyAdiabat expansion =
      time_noise ? noisy_adiabat(after_hot, p.omega_b, p.omega_a, s.tau_ba, noise.segments, noise.sigma_ba, j, ba,
                                 noise.allow_time_reversal)
                 : frequency_noise_adiabat(after_hot, p.omega_b, p.omega_a, s.tau_ba, noise.segments, noise.sigma_ba,
                                           j, ba);
  const BVector after_cold = maps.cold.apply(expansion.final);
  out.q_c = energy(after_cold, p.omega_a, j) - energy(expansion.final, p.omega_a, j);
  const NoisyAdiabat compression =
      time_noise ? noisy_adiabat(after_cold, p.omega_a, p.omega_b, s.tau_ab, noise.segments, noise.sigma_ab, j, ab,
                                 noise.allow_time_reversal)
                 : frequency_noise_adiabat(after_cold, p.omega_a, p.omega_b, s.tau_ab, noise.segments, noise.sigma_ab,
                                           j, ab);
  out.w_net = expansion.work + compression.work;
  out.w_friction = expansion.w_friction + compression.w_friction;
  out.duration = s.tau_h + s.tau_c + expansion.duration + compression.duration;
  out.end = compression.final;
  return out;
}

EnsembleStat statistics(const std::vector<double>& values, int n_batches, bool independent,
                        std::vector<double>* batch_means) {
  const std::size_t n = values.size();
  EnsembleStat st;
  double sum = 0.0;
  for (double v : values) sum += v;
  st.mean = sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - st.mean) * (v - st.mean);
    st.iid_standard_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  }
  std::vector<double> means(static_cast<std::size_t>(n_batches), 0.0);
  for (int b = 0; b < n_batches; ++b) {
    const std::size_t begin = n * b / n_batches;
    const std::size_t end = n * (b + 1) / n_batches;
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += values[i];
    means[b] = acc / static_cast<double>(end - begin);
  }
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= n_batches;
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  st.batch_standard_error = std::sqrt(ss / (n_batches - 1) / n_batches);
  st.standard_error = independent ? st.iid_standard_error : st.batch_standard_error;
  if (batch_means) *batch_means = std::move(means);
  return st;
}

}  // namespace

MonteCarloResult monte_carlo_cycle(const EngineParams& params, const Schedule& schedule, const NoiseConfig& noise,
                                   int threads) {
  params.validate();
  schedule.validate();
  noise.validate();

  const IntegratorSettings ladder{noise.segments, OmegaLadder::right_endpoint};
  const EngineParams reference_params = equivalent_lindblad_params(params, schedule, noise);
  EngineParams unitary = params;
  unitary.lambda_ab = 0.0;
  unitary.lambda_ba = 0.0;

  MonteCarloResult result;
  result.lambda_ab_equivalent = reference_params.lambda_ab;
  result.lambda_ba_equivalent = reference_params.lambda_ba;
  result.n_cycles = noise.n_cycles;
  result.n_batches = noise.n_batches;
  result.nominal_cycle_time = schedule.total();
  result.reference = summarize_cycle(reference_params, schedule, ladder);

  const BranchMaps maps = branch_maps(unitary, schedule, ladder);
  result.start = limit_cycle(branch_maps(reference_params, schedule, ladder).cycle());
  const SubstreamRng rng(noise.seed);

  std::vector<CycleOutcome> outcomes(static_cast<std::size_t>(noise.n_cycles));
  if (noise.mode == EnsembleMode::restart) {
    parallel_for(outcomes.size(), threads, [&](std::size_t i) {
      outcomes[i] = noisy_pass(unitary, schedule, noise, maps, rng, i, result.start);
    });
  } else {
    BVector b = result.start;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      outcomes[i] = noisy_pass(unitary, schedule, noise, maps, rng, i, b);
      b = outcomes[i].end;
    }
  }

  const bool independent = noise.mode == EnsembleMode::restart;
  const double tau = schedule.total();
  const std::size_t n = outcomes.size();
  std::vector<double> power(n), ds(n), ds_rate(n), wf(n), wn(n), qh(n), qc(n);
  double duration = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const CycleOutcome& o = outcomes[i];
    power[i] = -o.w_net / tau;
    ds[i] = entropy_production(o.q_h, o.q_c, params.t_hot, params.t_cold);
    ds_rate[i] = ds[i] / tau;
    wf[i] = o.w_friction;
    wn[i] = o.w_net;
    qh[i] = o.q_h;
    qc[i] = o.q_c;
    duration += o.duration;
  }
  result.mean_cycle_time = duration / static_cast<double>(n);
  result.power = statistics(power, noise.n_batches, independent, &result.batch_power);
  result.entropy_rate = statistics(ds_rate, noise.n_batches, independent, &result.batch_entropy_rate);
  result.entropy_production = statistics(ds, noise.n_batches, independent, nullptr);
  result.w_friction = statistics(wf, noise.n_batches, independent, nullptr);
  result.w_net = statistics(wn, noise.n_batches, independent, nullptr);
  result.q_h = statistics(qh, noise.n_batches, independent, nullptr);
  result.q_c = statistics(qc, noise.n_batches, independent, nullptr);
  return result;
}

}  // namespace qotto

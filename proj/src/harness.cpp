#include "bmac/harness.hpp"

#include <algorithm>
#include <cmath>

#include "bmac/errors.hpp"
#include "bmac/parallel.hpp"

namespace bmac {

ChannelRealization superpose(const SensorField& field, const TransmitFunction& transmit,
                             const ChannelModel& channel, double signal,
                             std::span<const double> sensing_noise, double channel_noise) {
  if (sensing_noise.size() != field.sensors)
    throw PreconditionError("superpose needs one noise value per sensor");
  const double rho = channel.per_sensor_power(field.sensors);
  ChannelRealization out;
  out.sensors = field.sensors;
  double sum = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < field.sensors; ++i) {
    const double fx = transmit.eval(signal + field.sigmas.at(i + 1) * sensing_noise[i]);
    sum += fx;
    peak = std::max(peak, fx * fx);
  }
  out.y = std::sqrt(rho) * sum + channel_noise;
  out.max_sensor_power = rho * peak;
  return out;
}

ChannelRealization simulate_channel(const SensorField& field, const TransmitFunction& transmit,
                                    const ChannelModel& channel, double signal,
                                    RngStream& stream) {
  const double rho = channel.per_sensor_power(field.sensors);
  ChannelRealization out;
  out.sensors = field.sensors;
  double sum = 0.0, peak = 0.0;
  for (std::size_t i = 1; i <= field.sensors; ++i) {
    const double fx = transmit.eval(signal + field.sigmas.at(i) * field.noise.draw(stream));
    sum += fx;
    peak = std::max(peak, fx * fx);
  }
  const double v = std::sqrt(channel.noise_var) * NoiseModel::gaussian(1.0).draw(stream);
  out.y = std::sqrt(rho) * sum + v;
  out.max_sensor_power = rho * peak;
  return out;
}

ChannelRealization simulate_channel(const EstimationSetup& setup, RngStream& stream) {
  return simulate_channel(setup.field, setup.transmit, setup.channel, setup.theta, stream);
}

namespace {

double median_of(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

}  // namespace

Aggregates summarize_estimates(std::span<const double> estimates, double theta,
                               std::size_t sensors) {
  Aggregates out;
  const double n = static_cast<double>(estimates.size());
  if (estimates.empty()) return out;

  double sum = 0.0;
  for (double e : estimates) sum += e;
  out.mean = sum / n;

  double m2 = 0.0, m4 = 0.0;
  for (double e : estimates) {
    const double d = e - out.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  out.variance = estimates.size() > 1 ? m2 / (n - 1.0) : 0.0;

  std::vector<double> values(estimates.begin(), estimates.end());
  out.median = median_of(values);
  for (auto& v : values) v = std::abs(v - theta);
  out.median_abs_error = median_of(std::move(values));

  const double scale = static_cast<double>(sensors);
  out.l_var = scale * out.variance;
  if (estimates.size() > 3) {
    // Standard error of the sample variance from the fourth central moment.
    const double mu4 = m4 / n;
    const double var_of_var = (mu4 - (n - 3.0) / (n - 1.0) * out.variance * out.variance) / n;
    out.l_var_stderr = scale * std::sqrt(std::max(var_of_var, 0.0));
  }
  out.pe = std::nan("");
  out.pe_stderr = std::nan("");
  return out;
}

Aggregates summarize_decisions(std::span<const double> decisions,
                               std::span<const std::uint8_t> truths) {
  if (decisions.size() != truths.size())
    throw PreconditionError("decisions and truths must have the same length");
  Aggregates out;
  const double n = static_cast<double>(decisions.size());
  if (decisions.empty()) return out;
  double sum = 0.0, errors = 0.0;
  for (std::size_t t = 0; t < decisions.size(); ++t) {
    sum += decisions[t];
    errors += (decisions[t] != 0.0) != (truths[t] != 0);
  }
  out.mean = sum / n;
  out.median = median_of({decisions.begin(), decisions.end()});
  out.variance = decisions.size() > 1 ? out.mean * (1.0 - out.mean) * n / (n - 1.0) : 0.0;
  out.median_abs_error = std::nan("");
  out.l_var = std::nan("");
  out.l_var_stderr = std::nan("");
  out.pe = errors / n;
  out.pe_stderr = std::sqrt(out.pe * (1.0 - out.pe) / n);
  return out;
}

namespace {

TrialSummary start_summary(std::uint64_t trials, std::uint64_t master_seed,
                           const RunOptions& options) {
  if (trials == 0) throw PreconditionError("an experiment needs at least one trial");
  TrialSummary summary;
  summary.experiment_id = options.experiment_id;
  summary.master_seed = master_seed;
  summary.trials = trials;
  summary.outputs.resize(trials);
  return summary;
}

}  // namespace

TrialSummary run_estimation_experiment(const EstimationSetup& setup,
                                       const InversionEstimator& estimator, std::uint64_t trials,
                                       std::uint64_t master_seed, const RunOptions& options) {
  auto summary = start_summary(trials, master_seed, options);
  std::vector<std::uint8_t> clamped(trials, 0);
  const RngStream root(master_seed, options.stream_offset);
  parallel_for(trials, options.workers, [&](std::size_t t) {
    RngStream stream = split_stream(root, options.stream_offset + t);
    const auto received = simulate_channel(setup, stream);
    const auto est = estimator.estimate(received.z());
    summary.outputs[t] = est.value;
    clamped[t] = est.clamped;
  });
  for (auto c : clamped) summary.clamp_count += c;
  summary.aggregates = summarize_estimates(summary.outputs, setup.theta, setup.field.sensors);
  return summary;
}

TrialSummary run_estimation_experiment(const EstimationSetup& setup, EstimatorKind kind,
                                       std::uint64_t trials, std::uint64_t master_seed,
                                       const RunOptions& options) {
  setup.validate();
  if (kind == EstimatorKind::inversion) {
    auto estimator_options = options.estimator;
    estimator_options.quadrature = options.quadrature;
    const InversionEstimator estimator(setup, estimator_options);
    return run_estimation_experiment(setup, estimator, trials, master_seed, options);
  }

  auto summary = start_summary(trials, master_seed, options);
  const auto gain = af_gain(setup);
  const RngStream root(master_seed, options.stream_offset);
  const auto standard = NoiseModel::gaussian(1.0);
  parallel_for(trials, options.workers, [&](std::size_t t) {
    RngStream stream = split_stream(root, options.stream_offset + t);
    // Same draw order as the digital scheme: L sensing draws, then the channel.
    double sum = 0.0;
    for (std::size_t i = 1; i <= setup.field.sensors; ++i)
      sum += setup.field.sigmas.at(i) * setup.field.noise.draw(stream);
    const double v = std::sqrt(setup.channel.noise_var) * standard.draw(stream);
    const double count = static_cast<double>(setup.field.sensors);
    summary.outputs[t] = setup.theta + sum / count + v / (count * gain.alpha);
  });
  summary.aggregates = summarize_estimates(summary.outputs, setup.theta, setup.field.sensors);
  return summary;
}

TrialSummary run_detection_experiment(const DetectionSetup& setup, std::uint64_t trials,
                                      std::uint64_t master_seed, const RunOptions& options) {
  auto summary = start_summary(trials, master_seed, options);
  summary.truths.resize(trials);
  const auto detector = build_detector(setup, options.quadrature);
  const RngStream root(master_seed, options.stream_offset);
  parallel_for(trials, options.workers, [&](std::size_t t) {
    RngStream stream = split_stream(root, options.stream_offset + t);
    const auto trial = run_detection_trial(setup, detector, stream);
    summary.outputs[t] = trial.decision == Hypothesis::h1 ? 1.0 : 0.0;
    summary.truths[t] = trial.truth == Hypothesis::h1;
  });
  summary.aggregates = summarize_decisions(summary.outputs, summary.truths);
  return summary;
}

std::string_view to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::omega: return "omega";
    case SweepParameter::sensors: return "L";
    case SweepParameter::theta: return "theta";
    case SweepParameter::sigma_growth: return "sigma_growth";
  }
  return "unknown";
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) {
  for (auto p : {SweepParameter::omega, SweepParameter::sensors, SweepParameter::theta,
                 SweepParameter::sigma_growth})
    if (to_string(p) == name) return p;
  return std::nullopt;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == name) return c;
  throw PreconditionError("table has no column '" + std::string(name) + "'");
}

double Table::number(std::size_t row, std::string_view name) const {
  const auto& cell = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  throw PreconditionError("column '" + std::string(name) + "' is not numeric");
}

}  // namespace bmac

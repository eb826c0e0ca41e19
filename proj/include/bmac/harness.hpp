#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bmac/detection.hpp"
#include "bmac/estimation.hpp"
#include "bmac/rng.hpp"

namespace bmac {

/// Received MAC output for one trial.
struct ChannelRealization {
  double y = 0.0;
  std::size_t sensors = 1;
  /// Largest instantaneous per-sensor power rho f(x_i)^2 seen in this trial.
  double max_sensor_power = 0.0;

  /// Normalized received signal z_L = y_L / sqrt(L).
  double z() const { return y / std::sqrt(static_cast<double>(sensors)); }
};

/// y_L = sqrt(P_T / L) sum_i f(signal + sigma_i n_i) + v for given noise values.
ChannelRealization superpose(const SensorField& field, const TransmitFunction& transmit,
                             const ChannelModel& channel, double signal,
                             std::span<const double> sensing_noise, double channel_noise);

/// Draws sensor noise for i = 1..L in order, then the channel noise: exactly L + 1 draws.
ChannelRealization simulate_channel(const SensorField& field, const TransmitFunction& transmit,
                                    const ChannelModel& channel, double signal,
                                    RngStream& stream);
ChannelRealization simulate_channel(const EstimationSetup& setup, RngStream& stream);

enum class EstimatorKind { inversion, amplify_forward };

struct Aggregates {
  double mean = 0.0;
  double median = 0.0;
  double variance = 0.0;
  double median_abs_error = 0.0;
  /// L var(theta_hat - theta) and its standard error.
  double l_var = 0.0;
  double l_var_stderr = 0.0;
  double pe = 0.0;
  double pe_stderr = 0.0;
};

struct TrialSummary {
  std::string experiment_id;
  std::uint64_t master_seed = 0;
  std::uint64_t trials = 0;
  /// Estimates, or decisions (0 = H0, 1 = H1) for detection runs.
  std::vector<double> outputs;
  /// True hypothesis per trial; detection runs only.
  std::vector<std::uint8_t> truths;
  Aggregates aggregates;
  std::uint64_t clamp_count = 0;
};

/// Aggregates of estimation outputs; `sensors` scales the variance into L var.
Aggregates summarize_estimates(std::span<const double> estimates, double theta,
                               std::size_t sensors);
Aggregates summarize_decisions(std::span<const double> decisions,
                               std::span<const std::uint8_t> truths);

struct RunOptions {
  unsigned workers = 1;
  /// Trial t uses stream id stream_offset + t.
  std::uint64_t stream_offset = 0;
  std::string experiment_id = "experiment";
  EstimatorOptions estimator{};
  QuadratureSpec quadrature{};
};

TrialSummary run_estimation_experiment(const EstimationSetup& setup, EstimatorKind kind,
                                       std::uint64_t trials, std::uint64_t master_seed,
                                       const RunOptions& options = {});

/// Same, reusing an estimator already built for `setup` (h_L table is the expensive part).
TrialSummary run_estimation_experiment(const EstimationSetup& setup,
                                       const InversionEstimator& estimator, std::uint64_t trials,
                                       std::uint64_t master_seed, const RunOptions& options = {});

TrialSummary run_detection_experiment(const DetectionSetup& setup, std::uint64_t trials,
                                      std::uint64_t master_seed, const RunOptions& options = {});

enum class SweepParameter { omega, sensors, theta, sigma_growth };

std::string_view to_string(SweepParameter parameter);
std::optional<SweepParameter> parse_sweep_parameter(std::string_view name);

/// Stream offset for the trials of sweep point `point_index`.
inline std::uint64_t point_stream_offset(std::uint64_t point_index) { return point_index << 32; }

template <class Setup>
Setup with_parameter(Setup setup, SweepParameter parameter, double value) {
  switch (parameter) {
    case SweepParameter::omega: setup.transmit = setup.transmit.with_omega(value); break;
    case SweepParameter::sensors: setup.field.sensors = static_cast<std::size_t>(value); break;
    case SweepParameter::theta: setup.theta = value; break;
    case SweepParameter::sigma_growth: setup.field.sigmas = SigmaSequence::sqrt_growth(value); break;
  }
  return setup;
}

using Cell = std::variant<std::string, double, std::int64_t>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
};

/// Evaluates `evaluate(point_setup, point_index)` at each value of the swept parameter.
/// The first column holds the parameter value; `evaluate` returns the remaining cells.
template <class Setup, class Evaluate>
Table sweep(SweepParameter parameter, std::span<const double> values, const Setup& base,
            std::vector<std::string> metric_columns, Evaluate&& evaluate) {
  Table table;
  table.columns.emplace_back(to_string(parameter));
  for (auto& c : metric_columns) table.columns.push_back(std::move(c));
  for (std::size_t k = 0; k < values.size(); ++k) {
    std::vector<Cell> row{Cell{values[k]}};
    if (parameter == SweepParameter::sensors) row[0] = static_cast<std::int64_t>(values[k]);
    auto metrics = evaluate(with_parameter(base, parameter, values[k]), std::uint64_t{k});
    for (auto& m : metrics) row.push_back(std::move(m));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace bmac

#include "bmac/experiments.hpp"

#include <cmath>
#include <numbers>

#include "bmac/errors.hpp"

namespace bmac {

DualityResult tanh_duality(const TransmitFunction& f, double half_width, int points,
                           const QuadratureSpec& spec) {
  if (f.kind() != TransmitKind::tanh)
    throw UnsupportedKindError("closed-form matched density is only known for tanh, got " +
                               describe(f));
  if (points < 2) throw PreconditionError("duality grid needs at least two points");
  const double w = f.omega();
  const double a = 1.0 / (2.0 * w);
  const double log_beta = std::lgamma(a) + std::lgamma(0.5) - std::lgamma(a + 0.5);
  const double log_norm = std::log(w) - log_beta;
  const auto density = matched_density(f, spec);

  DualityResult out{"matched_density:" + describe(f), 0.0, points};
  for (int k = 0; k < points; ++k) {
    const double x = -half_width + 2.0 * half_width * k / (points - 1);
    const double log_cosh = std::abs(w * x) + std::log1p(std::exp(-2.0 * std::abs(w * x))) -
                            std::numbers::ln2;
    const double reference = std::exp(log_norm - log_cosh / w);
    out.max_abs_error = std::max(out.max_abs_error, std::abs(density(x) - reference));
  }
  return out;
}

DualityResult score_round_trip(const NoiseModel& model, double half_width, int points,
                               const QuadratureSpec& spec) {
  if (points < 2) throw PreconditionError("duality grid needs at least two points");
  // The Laplacian score jumps at 0; pass it as a breakpoint.
  const MatchedDensity density(locally_optimal_nonlinearity(model), spec, {0.0});
  DualityResult out{"score_round_trip:" + describe(model), 0.0, points};
  for (int k = 0; k < points; ++k) {
    const double x = -half_width + 2.0 * half_width * k / (points - 1);
    out.max_abs_error = std::max(out.max_abs_error, std::abs(density(x) - model.pdf(x)));
  }
  return out;
}

namespace {

constexpr double kDualityHalfWidth = 10.0;
constexpr int kDualityPoints = 2001;

std::vector<std::string> metric_columns(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::asv_vs_omega:
    case ExperimentKind::lvar_vs_L: return {"asv", "l_var", "trials", "stderr", "clamp_count"};
    case ExperimentKind::consistency:
      return {"estimator", "mean",        "median", "median_abs_error",
              "variance",  "clamp_count", "trials"};
    case ExperimentKind::af_compare:
      return {"inversion_mae", "af_mae", "inversion_clamps", "trials"};
    case ExperimentKind::dc_vs_omega: return {"deflection"};
    case ExperimentKind::pe_vs_omega: return {"deflection", "pe", "stderr", "trials"};
    case ExperimentKind::pe_vs_L: return {"omega", "deflection", "pe", "stderr", "trials"};
    case ExperimentKind::theorem3_degeneration:
      return {"h_gap", "af_error_variance", "deflection"};
    case ExperimentKind::duality_check: return {"case", "max_abs_error", "points"};
  }
  return {};
}

std::int64_t as_int(std::uint64_t v) { return static_cast<std::int64_t>(v); }

/// Fixed parts of one (noise, transmit, sensor count) combination.
struct Combination {
  const NoiseModel* noise;
  std::size_t transmit_index;
  std::size_t sensors;
  std::uint64_t first_point;
};

class Runner {
 public:
  Runner(const ExperimentConfig& config, unsigned workers) : config_(config), workers_(workers) {}

  /// Applies the per-point rules that depend on the final L and theta.
  template <class Setup>
  Setup finalize(Setup setup, std::size_t transmit_index) const {
    if (config_.per_sensor_power)
      setup.channel.total_power = *config_.per_sensor_power * setup.field.sensors;
    if (config_.unit_power.at(transmit_index))
      setup.transmit = TransmitFunction::linear(unit_power_alpha(
          setup.theta, setup.field.sigmas, setup.field.sensors, setup.field.noise));
    return setup;
  }

  RunOptions options(std::uint64_t point) const {
    RunOptions o;
    o.workers = workers_;
    o.stream_offset = point_stream_offset(point);
    o.experiment_id = std::string(to_string(config_.kind));
    o.quadrature = config_.quadrature;
    return o;
  }

  std::vector<Cell> estimation_point(const EstimationSetup& setup, std::uint64_t point) const {
    const auto& q = config_.quadrature;
    const auto opts = options(point);
    switch (config_.kind) {
      case ExperimentKind::asv_vs_omega:
      case ExperimentKind::lvar_vs_L: {
        const double asv = setup.field.sigmas.all_unit(setup.field.sensors)
                               ? asymptotic_variance(setup, q)
                               : std::nan("");
        const auto run = run_estimation_experiment(setup, EstimatorKind::inversion,
                                                   config_.trials, config_.master_seed, opts);
        return {asv, run.aggregates.l_var, as_int(run.trials), run.aggregates.l_var_stderr,
                as_int(run.clamp_count)};
      }
      case ExperimentKind::consistency: {
        const auto run = run_estimation_experiment(setup, config_.estimator, config_.trials,
                                                   config_.master_seed, opts);
        const auto& a = run.aggregates;
        return {std::string(config_.estimator == EstimatorKind::inversion ? "inversion"
                                                                          : "amplify_forward"),
                a.mean,
                a.median,
                a.median_abs_error,
                a.variance,
                as_int(run.clamp_count),
                as_int(run.trials)};
      }
      case ExperimentKind::af_compare: {
        // Both estimators see the same noise draws.
        const auto inv = run_estimation_experiment(setup, EstimatorKind::inversion,
                                                   config_.trials, config_.master_seed, opts);
        const auto af = run_estimation_experiment(setup, EstimatorKind::amplify_forward,
                                                  config_.trials, config_.master_seed, opts);
        return {inv.aggregates.median_abs_error, af.aggregates.median_abs_error,
                as_int(inv.clamp_count), as_int(inv.trials)};
      }
      case ExperimentKind::theorem3_degeneration: {
        const MeanResponse h(setup.field, setup.transmit, q);
        const double gap = std::abs(h(setup.theta) - h(0.0));
        const auto gain = af_gain(setup);
        const double noise_var =
            setup.field.noise.variance().value_or(setup.field.noise.scale() *
                                                  setup.field.noise.scale());
        double spread = 0.0;
        for (const auto& level : setup.field.sigmas.levels(setup.field.sensors))
          spread += static_cast<double>(level.count) * level.sigma * level.sigma;
        const double count = static_cast<double>(setup.field.sensors);
        const double af_var =
            (noise_var * spread + setup.channel.noise_var / (gain.alpha * gain.alpha)) /
            (count * count);
        DetectionSetup d{setup.theta, setup.field, setup.transmit, setup.channel,
                         config_.prior_h0, config_.prior_h1};
        return {gap, af_var, deflection(d, q)};
      }
      default: break;
    }
    throw PreconditionError("not an estimation experiment");
  }

  std::vector<Cell> detection_point(DetectionSetup setup, std::uint64_t point) const {
    const auto& q = config_.quadrature;
    Cell omega_cell = std::string();
    if (config_.kind == ExperimentKind::pe_vs_L && config_.omega_search &&
        setup.transmit.has_omega()) {
      const auto& s = *config_.omega_search;
      const auto best = optimal_omega(setup, s.lo, s.hi, s.grid, q);
      setup.transmit = setup.transmit.with_omega(best.omega);
    }
    if (setup.transmit.has_omega()) omega_cell = setup.transmit.omega();

    const double dc = deflection(setup, q);
    if (config_.kind == ExperimentKind::dc_vs_omega) return {dc};

    const auto run = run_detection_experiment(setup, config_.trials, config_.master_seed,
                                              options(point));
    std::vector<Cell> row;
    if (config_.kind == ExperimentKind::pe_vs_L) row.push_back(omega_cell);
    row.insert(row.end(), {dc, run.aggregates.pe, run.aggregates.pe_stderr, as_int(run.trials)});
    return row;
  }

  Table run() const {
    if (config_.kind == ExperimentKind::duality_check) return duality();

    Table table;
    table.columns = {"noise", "transmit"};
    const auto parameter = *config_.sweep_parameter;
    const bool sweeps_sensors = parameter == SweepParameter::sensors;
    if (!sweeps_sensors) table.columns.push_back("L");
    table.columns.emplace_back(to_string(parameter));
    for (auto& c : metric_columns(config_.kind)) table.columns.push_back(std::move(c));

    const std::vector<std::size_t> sensor_counts =
        sweeps_sensors ? std::vector<std::size_t>{config_.sensor_counts.front()}
                       : config_.sensor_counts;
    const std::uint64_t per_combination = config_.sweep_values.size();
    std::uint64_t combination = 0;
    for (const auto& noise : config_.noises)
      for (std::size_t j = 0; j < config_.transmits.size(); ++j)
        for (auto sensors : sensor_counts) {
          run_combination(table, {&noise, j, sensors, combination * per_combination});
          ++combination;
        }
    return table;
  }

 private:
  bool detection_kind() const {
    return config_.kind == ExperimentKind::dc_vs_omega ||
           config_.kind == ExperimentKind::pe_vs_omega || config_.kind == ExperimentKind::pe_vs_L;
  }

  template <class Setup>
  Setup base_setup(const Combination& c) const {
    Setup setup;
    setup.theta = config_.theta;
    setup.field = {c.sensors, config_.sigmas, *c.noise};
    setup.transmit = config_.transmits[c.transmit_index];
    setup.channel = config_.channel;
    return setup;
  }

  void run_combination(Table& table, const Combination& c) const {
    const auto parameter = *config_.sweep_parameter;
    std::vector<Cell> prefix{describe(*c.noise), std::string()};
    if (parameter != SweepParameter::sensors) prefix.push_back(as_int(c.sensors));

    auto append = [&](Table&& part) {
      for (auto& row : part.rows) {
        std::vector<Cell> full = prefix;
        full.insert(full.end(), row.begin(), row.end());
        table.rows.push_back(std::move(full));
      }
    };
    // The transmit label depends on the final point setup (swept omega, resolved alpha).
    auto label = [&](auto& setup) { prefix[1] = describe(setup.transmit); };

    if (detection_kind()) {
      auto base = base_setup<DetectionSetup>(c);
      base.prior_h0 = config_.prior_h0;
      base.prior_h1 = config_.prior_h1;
      for (std::size_t k = 0; k < config_.sweep_values.size(); ++k) {
        const auto one = std::span(config_.sweep_values).subspan(k, 1);
        append(sweep(parameter, one, base, {}, [&](const DetectionSetup& s, std::uint64_t) {
          auto point = finalize(s, c.transmit_index);
          label(point);
          return detection_point(point, c.first_point + k);
        }));
      }
      return;
    }
    const auto base = base_setup<EstimationSetup>(c);
    for (std::size_t k = 0; k < config_.sweep_values.size(); ++k) {
      const auto one = std::span(config_.sweep_values).subspan(k, 1);
      append(sweep(parameter, one, base, {}, [&](const EstimationSetup& s, std::uint64_t) {
        auto point = finalize(s, c.transmit_index);
        label(point);
        return estimation_point(point, c.first_point + k);
      }));
    }
  }

  Table duality() const {
    Table table;
    table.columns = metric_columns(ExperimentKind::duality_check);
    auto add = [&](const DualityResult& r) {
      table.rows.push_back({r.label, r.max_abs_error, std::int64_t{r.points}});
    };
    for (const auto& noise : config_.noises)
      add(score_round_trip(noise, kDualityHalfWidth, kDualityPoints, config_.quadrature));
    for (const auto& f : config_.transmits)
      if (f.kind() == TransmitKind::tanh)
        add(tanh_duality(f, kDualityHalfWidth, kDualityPoints, config_.quadrature));
    return table;
  }

  const ExperimentConfig& config_;
  unsigned workers_;
};

}  // namespace

Table run_experiment(const ExperimentConfig& config, unsigned workers) {
  return Runner(config, workers).run();
}

}  // namespace bmac

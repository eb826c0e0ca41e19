#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "bmac/errors.hpp"
#include "bmac/harness.hpp"
#include "bmac/transmit_moments.hpp"
#include "support.hpp"

namespace bmac {
namespace {

EstimationSetup estimation_setup(NoiseModel noise, TransmitFunction f, std::size_t sensors,
                                 double theta = 1.0, double power = 10.0) {
  EstimationSetup s;
  s.theta = theta;
  s.field = {sensors, SigmaSequence::constant(1.0), noise};
  s.transmit = f;
  s.channel = {power, 1.0};
  return s;
}

DetectionSetup detection_setup(NoiseModel noise, TransmitFunction f, std::size_t sensors,
                               double theta, double power) {
  DetectionSetup s;
  s.theta = theta;
  s.field = {sensors, SigmaSequence::constant(1.0), noise};
  s.transmit = f;
  s.channel = {power, 1.0};
  return s;
}

TEST(Superpose, ZeroNoiseValues) {
  const SensorField field{8, SigmaSequence::constant(1.0), NoiseModel::gaussian(1.0)};
  const std::vector<double> zeros(8, 0.0);
  EXPECT_EQ(superpose(field, TransmitFunction::tanh(1.0), {10.0, 1.0}, 0.0, zeros, 0.0).y, 0.0);
  // rho = P_T / L = 1 and f(1) = 1 on every sensor: y = L.
  const auto r = superpose(field, TransmitFunction::linear(1.0), {8.0, 1.0}, 1.0, zeros, 0.0);
  EXPECT_DOUBLE_EQ(r.y, 8.0);
  EXPECT_DOUBLE_EQ(r.z() * std::sqrt(8.0), r.y);
  EXPECT_DOUBLE_EQ(r.max_sensor_power, 1.0);
}

TEST(Superpose, ChannelNoiseEntersUnscaled) {
  const SensorField field{3, SigmaSequence::constant(2.0), NoiseModel::gaussian(1.0)};
  const std::vector<double> noise{0.5, -0.5, 0.0};
  const auto r = superpose(field, TransmitFunction::linear(1.0), {3.0, 1.0}, 0.0, noise, 0.25);
  EXPECT_DOUBLE_EQ(r.y, 0.25);
  EXPECT_THROW(superpose(field, TransmitFunction::linear(1.0), {3.0, 1.0}, 0.0,
                         std::vector<double>{1.0}, 0.0),
               PreconditionError);
}

TEST(SimulateChannel, ConsumesExactlyLPlusOneDraws) {
  const auto setup = estimation_setup(NoiseModel::cauchy(1.0), TransmitFunction::tanh(1.0), 37);
  RngStream stream(11, 5);
  simulate_channel(setup, stream);
  EXPECT_EQ(stream.counter(), 38u);
}

TEST(SimulateChannel, EqualsSuperposeOfTheSameDraws) {
  const auto setup = estimation_setup(NoiseModel::laplacian(0.8), TransmitFunction::tanh(0.7), 25);
  RngStream a(21, 3), b(21, 3);
  const auto simulated = simulate_channel(setup, a);
  std::vector<double> noise(25);
  for (auto& n : noise) n = setup.field.noise.draw(b);
  const double v = std::sqrt(setup.channel.noise_var) * NoiseModel::gaussian(1.0).draw(b);
  const auto direct =
      superpose(setup.field, setup.transmit, setup.channel, setup.theta, noise, v);
  EXPECT_EQ(simulated.y, direct.y);
}

TEST(SimulateChannel, PerSensorPowerNeverExceedsBudget) {
  const auto setup =
      estimation_setup(NoiseModel::cauchy(1.0), TransmitFunction::gudermannian(3.0), 10, 50.0, 4.0);
  const double rho = setup.channel.per_sensor_power(10);
  RngStream stream(8, 0);
  double worst = 0.0;
  for (int t = 0; t < 100000; ++t) worst = std::max(worst, simulate_channel(setup, stream).max_sensor_power);
  EXPECT_LE(worst, rho);
  EXPECT_GT(worst, 0.99 * rho);
}

TEST(EstimationExperiment, DeterministicAcrossWorkersAndReruns) {
  const auto setup = estimation_setup(NoiseModel::gaussian(1.0), TransmitFunction::tanh(1.0), 50);
  RunOptions one, eight;
  eight.workers = 8;
  const auto a = run_estimation_experiment(setup, EstimatorKind::inversion, 3000, 42, one);
  const auto b = run_estimation_experiment(setup, EstimatorKind::inversion, 3000, 42, eight);
  const auto c = run_estimation_experiment(setup, EstimatorKind::inversion, 3000, 42, one);
  EXPECT_EQ(a.outputs, b.outputs);
  EXPECT_EQ(a.outputs, c.outputs);
  EXPECT_EQ(a.aggregates.variance, b.aggregates.variance);
  const auto d = run_estimation_experiment(setup, EstimatorKind::inversion, 3000, 43, one);
  EXPECT_NE(a.outputs, d.outputs);
}

TEST(EstimationExperiment, SingleTrialMatchesManualPipeline) {
  const auto setup = estimation_setup(NoiseModel::gaussian(1.0), TransmitFunction::tanh(1.0), 20);
  const auto run = run_estimation_experiment(setup, EstimatorKind::inversion, 1, 99);
  RngStream stream(99, 0);
  const auto r = simulate_channel(setup, stream);
  EXPECT_EQ(run.outputs.at(0), InversionEstimator(setup).estimate(r.z()).value);
  EXPECT_EQ(run.master_seed, 99u);
  EXPECT_EQ(run.trials, 1u);
}

TEST(EstimationExperiment, AggregatesRecomputeFromOutputs) {
  const auto setup = estimation_setup(NoiseModel::laplacian(1.0), TransmitFunction::tanh(0.5), 40);
  const auto run = run_estimation_experiment(setup, EstimatorKind::inversion, 501, 7);
  const auto again = summarize_estimates(run.outputs, setup.theta, 40);
  EXPECT_EQ(run.aggregates.mean, again.mean);
  EXPECT_EQ(run.aggregates.median, again.median);
  EXPECT_EQ(run.aggregates.l_var, again.l_var);

  std::vector<double> sorted = run.outputs;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(run.aggregates.median, sorted[250]);
  double mean = 0.0;
  for (double x : run.outputs) mean += x / 501.0;
  double var = 0.0;
  for (double x : run.outputs) var += (x - mean) * (x - mean) / 500.0;
  EXPECT_NEAR(run.aggregates.variance, var, 1e-12 * var);
  EXPECT_NEAR(run.aggregates.l_var, 40.0 * var, 1e-12 * var);
  EXPECT_TRUE(std::isnan(run.aggregates.pe));
}

TEST(EstimationExperiment, RejectsZeroTrials) {
  const auto setup = estimation_setup(NoiseModel::gaussian(1.0), TransmitFunction::tanh(1.0), 5);
  EXPECT_THROW(run_estimation_experiment(setup, EstimatorKind::inversion, 0, 1), PreconditionError);
}

TEST(Clt, NormalizedSignalIsAsymptoticallyNormal) {
  // sqrt(L) (z_L - sqrt(P_T) h(theta)) -> N(0, P_T var f(theta + n) + sigma_v^2).
  const std::size_t sensors = 400, trials = 4000;
  std::uint64_t id = 0;
  for (const auto& noise : {NoiseModel::gaussian(1.0),
                            NoiseModel::with_variance(NoiseKind::laplacian, 1.0),
                            NoiseModel::cauchy(1.0)}) {
    const auto f = TransmitFunction::tanh(0.75);
    const auto setup = estimation_setup(noise, f, sensors);
    const double m = transmit_mean(f, noise, 1.0, setup.theta, {});
    const double s2 = transmit_second_moment(f, noise, 1.0, setup.theta, {});
    const double sd = std::sqrt(10.0 * (s2 - m * m) + 1.0);
    std::vector<double> u(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      RngStream stream(555, (id << 32) + t);
      const auto r = simulate_channel(setup, stream);
      u[t] = std::sqrt(static_cast<double>(sensors)) * (r.z() - std::sqrt(10.0) * m) / sd;
    }
    ++id;
    const double d = testing::ks_statistic(u, testing::standard_normal_cdf);
    EXPECT_LT(d * std::sqrt(static_cast<double>(trials)), testing::kKsCritical1pct)
        << describe(noise);
    EXPECT_LT(testing::jarque_bera(u), testing::kJarqueBeraCritical1pct) << describe(noise);
  }
}

TEST(DetectionExperiment, ZeroSignalGivesCoinFlip) {
  const auto setup =
      detection_setup(NoiseModel::gaussian(1.0), TransmitFunction::tanh(1.0), 10, 0.0, 1.0);
  const auto run = run_detection_experiment(setup, 40000, 3);
  EXPECT_NEAR(run.aggregates.pe, 0.5, 3.0 * run.aggregates.pe_stderr);
}

TEST(DetectionExperiment, ErrorFallsWithMoreSensors) {
  double previous = 1.0;
  for (std::size_t l : {5u, 10u, 20u, 40u}) {
    const auto setup = detection_setup(NoiseModel::gaussian(1.0), TransmitFunction::tanh(0.5), l,
                                       1.0, 1.0);
    const auto run = run_detection_experiment(setup, 20000, 17);
    EXPECT_LT(run.aggregates.pe + 2.0 * run.aggregates.pe_stderr, previous) << l;
    previous = run.aggregates.pe;
  }
}

TEST(DetectionExperiment, DecisionsAndTruthsRecomputePe) {
  const auto setup = detection_setup(NoiseModel::laplacian(1.0), TransmitFunction::tanh(0.6), 10,
                                     1.0, 2.0);
  RunOptions eight;
  eight.workers = 8;
  const auto run = run_detection_experiment(setup, 5000, 5);
  const auto par = run_detection_experiment(setup, 5000, 5, eight);
  EXPECT_EQ(run.outputs, par.outputs);
  EXPECT_EQ(run.truths, par.truths);
  std::size_t errors = 0;
  for (std::size_t t = 0; t < run.outputs.size(); ++t)
    errors += static_cast<std::uint8_t>(run.outputs[t]) != run.truths[t];
  EXPECT_DOUBLE_EQ(run.aggregates.pe, errors / 5000.0);
}

TEST(Sweep, SinglePointEqualsDirectRun) {
  const auto base = estimation_setup(NoiseModel::gaussian(1.0), TransmitFunction::tanh(1.0), 30);
  const std::vector<double> values{0.6};
  const auto table = sweep(SweepParameter::omega, std::span<const double>(values), base,
                           {"l_var"}, [](const EstimationSetup& s, std::uint64_t k) {
                             RunOptions opts;
                             opts.stream_offset = point_stream_offset(k);
                             const auto r =
                                 run_estimation_experiment(s, EstimatorKind::inversion, 500, 8, opts);
                             return std::vector<Cell>{r.aggregates.l_var};
                           });
  auto direct_setup = base;
  direct_setup.transmit = TransmitFunction::tanh(0.6);
  const auto direct = run_estimation_experiment(direct_setup, EstimatorKind::inversion, 500, 8);
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.columns, (std::vector<std::string>{"omega", "l_var"}));
  EXPECT_EQ(table.number(0, "omega"), 0.6);
  EXPECT_EQ(table.number(0, "l_var"), direct.aggregates.l_var);
}

TEST(Sweep, SensorCountColumnIsInteger) {
  auto base = detection_setup(NoiseModel::gaussian(1.0), TransmitFunction::tanh(1.0), 1, 1.0, 10.0);
  base.field.sigmas = SigmaSequence::sqrt_growth(1.0);
  const std::vector<double> values{10.0, 100.0, 1000.0};
  const auto table = sweep(SweepParameter::sensors, std::span<const double>(values), base,
                           {"deflection"}, [](const DetectionSetup& s, std::uint64_t) {
                             return std::vector<Cell>{deflection(s)};
                           });
  EXPECT_EQ(table.columns.front(), "L");
  for (std::size_t r = 0; r < 3; ++r)
    EXPECT_TRUE(std::holds_alternative<std::int64_t>(table.rows[r][0]));
  EXPECT_GT(table.number(0, "deflection"), table.number(1, "deflection"));
  EXPECT_GT(table.number(1, "deflection"), table.number(2, "deflection"));
  EXPECT_THROW(table.column("pe"), PreconditionError);
}

TEST(SweepParameter, NamesRoundTrip) {
  for (auto p : {SweepParameter::omega, SweepParameter::sensors, SweepParameter::theta,
                 SweepParameter::sigma_growth})
    EXPECT_EQ(parse_sweep_parameter(to_string(p)), p);
  EXPECT_FALSE(parse_sweep_parameter("alpha").has_value());
}

}  // namespace
}  // namespace bmac

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bmac/quadrature.hpp"
#include "bmac/rng.hpp"
#include "bmac/sensor_field.hpp"
#include "bmac/transmit_function.hpp"

namespace bmac {

/// Binary test of H0: x_i = sigma_i n_i against H1: x_i = theta + sigma_i n_i, observed
/// through y_L = sqrt(P_T / L) sum f(x_i) + v.
struct DetectionSetup {
  double theta = 1.0;
  SensorField field;
  TransmitFunction transmit = TransmitFunction::tanh(1.0);
  ChannelModel channel;
  double prior_h0 = 0.5;
  double prior_h1 = 0.5;

  void validate() const;
};

/// Deflection coefficient
///   D_L = (L^-1 sum_i E[f(theta + sigma_i n) - f(sigma_i n)])^2
///         / (L^-1 sum_i var[f(sigma_i n)] + sigma_v^2 / P_T).
/// Needs no smoothness of f, so quantizers are accepted. Exactly zero at theta = 0.
double deflection(const DetectionSetup& setup, const QuadratureSpec& spec = {});

/// Unsquared numerator of the deflection, L^-1 sum_i g_sigma_i(theta).
double deflection_numerator_root(const DetectionSetup& setup, const QuadratureSpec& spec = {});

struct OmegaOptimum {
  double omega;
  double deflection;
};

/// Maximizes deflection over the transmit scale omega in [lo, hi] (grid + golden section).
/// Kinds without an omega give a constant objective, so `lo` is returned.
OmegaOptimum optimal_omega(const DetectionSetup& setup, double lo, double hi, int grid_points,
                           const QuadratureSpec& spec = {});

enum class Hypothesis { h0 = 0, h1 = 1 };

/// Bayesian test between two Gaussians matched to the exact first two moments of y_L.
struct GaussianApproxDetector {
  double mean0 = 0.0;
  double mean1 = 0.0;
  double var0 = 1.0;
  double var1 = 1.0;
  /// ln(P1 / P0).
  double log_prior_ratio = 0.0;

  /// ln N(y; mean1, var1) - ln N(y; mean0, var0).
  double log_likelihood_ratio(double y) const;
};

GaussianApproxDetector build_detector(const DetectionSetup& setup,
                                      const QuadratureSpec& spec = {});

/// H1 iff the log-likelihood ratio is >= -log_prior_ratio (ties go to H1).
Hypothesis decide(const GaussianApproxDetector& detector, double y);

struct ErrorProbability {
  double pe = 0.0;
  double standard_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
};

struct ErrorProbabilityOptions {
  unsigned workers = 1;
  /// Run round(P_j * trials) trials under each hypothesis instead of sampling the hypothesis.
  bool stratified = false;
};

/// One Monte Carlo trial of the whole pipeline: hypothesis draw (unless forced), L sensing
/// draws in sensor order, then one channel draw.
struct DetectionTrial {
  Hypothesis truth;
  Hypothesis decision;
  double y;
};
DetectionTrial run_detection_trial(const DetectionSetup& setup,
                                   const GaussianApproxDetector& detector, RngStream& stream,
                                   const Hypothesis* forced = nullptr);

/// Monte Carlo estimate of P_e = P0 Pr[error | H0] + P1 Pr[error | H1].
/// Trial t uses split_stream(stream, stream.stream_id() + t), so the result does not depend on
/// the worker count.
ErrorProbability error_probability(const DetectionSetup& setup, std::uint64_t trials,
                                   const RngStream& stream,
                                   const ErrorProbabilityOptions& options = {},
                                   const QuadratureSpec& spec = {});

/// -p'(x)/p(x) of the sensing noise: the locally optimal nonlinearity.
std::function<double(double)> locally_optimal_nonlinearity(const NoiseModel& model);

/// Density for which a given nonlinearity is locally optimal:
///   p(x) = C exp(-F(x)),  F(x) = integral_0^x f(y) dy,
/// with C fixed by normalization over the region where exp(-F) exceeds 1e-300.
class MatchedDensity {
 public:
  MatchedDensity(std::function<double(double)> f, QuadratureSpec spec = {},
                 std::vector<double> breakpoints = {});

  double operator()(double x) const;
  /// F(x) = integral_0^x f.
  double antiderivative(double x) const;
  double normalizer() const { return normalizer_; }
  /// Half-widths of the normalization domain [-lower, upper].
  double lower_extent() const { return lower_; }
  double upper_extent() const { return upper_; }

 private:
  double integrate_f(double a, double b) const;

  std::function<double(double)> f_;
  QuadratureSpec spec_;
  std::vector<double> breakpoints_;
  double cell_ = 0.25;
  std::vector<double> prefix_pos_;  // F(k * cell_), k >= 0
  std::vector<double> prefix_neg_;  // F(-k * cell_), k >= 0
  double lower_ = 0.0;
  double upper_ = 0.0;
  double normalizer_ = 1.0;
};

MatchedDensity matched_density(const TransmitFunction& f, const QuadratureSpec& spec = {});
MatchedDensity matched_density(std::function<double(double)> f, const QuadratureSpec& spec = {});

}  // namespace bmac

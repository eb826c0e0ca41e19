#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bmac/quadrature.hpp"
#include "bmac/sensor_field.hpp"
#include "bmac/solvers.hpp"
#include "bmac/transmit_function.hpp"

namespace bmac {

/// Estimation of theta from y_L = sqrt(P_T / L) sum f(theta + sigma_i n_i) + v.
struct EstimationSetup {
  double theta = 0.0;
  SensorField field;
  TransmitFunction transmit = TransmitFunction::tanh(1.0);
  ChannelModel channel;

  void validate() const;
};

/// h_L(theta) = L^-1 sum_i E[f(theta + sigma_i n_i)].
///
/// One quadrature per distinct sigma_i; for a constant sequence this is a single integral.
class MeanResponse {
 public:
  MeanResponse(const SensorField& field, TransmitFunction transmit, QuadratureSpec spec = {});

  double operator()(double theta) const;

  /// Open range (lo, hi) of h for bounded transmit functions, nullopt when unbounded.
  std::optional<Bracket> range() const;

  const TransmitFunction& transmit() const { return transmit_; }

 private:
  struct Weighted {
    double sigma;
    double weight;
  };
  TransmitFunction transmit_;
  NoiseModel noise_;
  QuadratureSpec spec_;
  std::vector<Weighted> levels_;
};

double mean_response(const EstimationSetup& setup, double theta, const QuadratureSpec& spec = {});

struct Estimate {
  double value = 0.0;
  /// The normalized signal fell outside range(h_L) and was clamped before inversion.
  bool clamped = false;
};

struct EstimatorOptions {
  QuadratureSpec quadrature{};
  /// Points in the precomputed h_L table used to bracket each inversion; 0 disables it.
  int table_points = 1025;
  /// Relative shrink applied to range(h_L) when clamping out-of-range targets.
  double clamp_margin = 1e-9;
};

/// theta_hat = h_L^-1(z_L / sqrt(P_T)).
///
/// Construct once per setup: the constructor tabulates h_L on a sinh-spaced grid so that each
/// inversion starts from a tight bracket with known endpoint values.
class InversionEstimator {
 public:
  explicit InversionEstimator(const EstimationSetup& setup, EstimatorOptions options = {});

  Estimate estimate(double received_z) const;
  const MeanResponse& response() const { return response_; }

 private:
  MeanResponse response_;
  double sqrt_power_;
  EstimatorOptions options_;
  std::vector<double> grid_theta_;
  std::vector<double> grid_h_;
};

/// One-shot form of InversionEstimator without the bracketing table.
Estimate estimate(const EstimationSetup& setup, double received_z,
                  const QuadratureSpec& spec = {});

/// Asymptotic variance of sqrt(L)(theta_hat - theta) for unit sigma_i and i.i.d. noise:
/// (E f^2(theta + n) - h^2(theta) + sigma_v^2 / P_T) / (E f'(theta + n))^2.
double asymptotic_variance(const EstimationSetup& setup, const QuadratureSpec& spec = {});

/// Power-normalizing gain of the amplify-and-forward baseline,
/// alpha_L = sqrt(P_T / sum_i (theta^2 + sigma_i^2 sigma_n^2)).
///
/// The normalization uses the true theta. Cauchy noise has no variance, so a nominal
/// sigma_n^2 = 1 stands in and `nominal_noise_variance` is set.
struct AfGain {
  double alpha = 0.0;
  bool nominal_noise_variance = false;
};
AfGain af_gain(const EstimationSetup& setup);

/// theta_hat_AF - theta = L^-1 sum sigma_i n_i + v / (L alpha_L), returned as theta_hat_AF.
double af_estimate(const EstimationSetup& setup, std::span<const double> sensing_noise,
                   double channel_noise);
double af_estimate(const EstimationSetup& setup, const AfGain& gain,
                   std::span<const double> sensing_noise, double channel_noise);

}  // namespace bmac

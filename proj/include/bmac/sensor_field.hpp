#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bmac/noise_model.hpp"

namespace bmac {

enum class SigmaKind { constant, explicit_list, sqrt_growth };

std::string_view to_string(SigmaKind kind);
std::optional<SigmaKind> parse_sigma_kind(std::string_view name);

/// Deterministic per-sensor noise scales sigma_1, sigma_2, ...
class SigmaSequence {
 public:
  static SigmaSequence constant(double sigma);
  /// sigma_i = sigma * sqrt(i).
  static SigmaSequence sqrt_growth(double sigma);
  static SigmaSequence explicit_list(std::vector<double> values);

  SigmaKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  const std::vector<double>& values() const { return values_; }

  /// sigma_i for 1-based sensor index i.
  double at(std::size_t i) const;

  /// Distinct values among sigma_1..sigma_L with their multiplicities, in first-seen order.
  struct Level {
    double sigma;
    std::size_t count;
  };
  std::vector<Level> levels(std::size_t sensors) const;

  /// True when every sigma_i equals one (the regime where the asymptotic variance applies).
  bool all_unit(std::size_t sensors) const;

  void check_length(std::size_t sensors) const;

  friend bool operator==(const SigmaSequence&, const SigmaSequence&) = default;

 private:
  SigmaKind kind_ = SigmaKind::constant;
  double sigma_ = 1.0;
  std::vector<double> values_;
};

/// L sensors observing x_i = s + sigma_i n_i with i.i.d. n_i.
struct SensorField {
  std::size_t sensors = 1;
  SigmaSequence sigmas = SigmaSequence::constant(1.0);
  NoiseModel noise = NoiseModel::gaussian(1.0);

  void validate() const;
};

/// Gaussian MAC with a total power budget P_T and channel noise variance sigma_v^2.
struct ChannelModel {
  double total_power = 1.0;
  double noise_var = 1.0;

  /// Per-sensor power scale rho = P_T / L.
  double per_sensor_power(std::size_t sensors) const { return total_power / sensors; }
  void validate() const;
};

/// Converts decibels to a linear ratio.
double from_db(double db);

}  // namespace bmac

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bmac/rng.hpp"

namespace bmac {

enum class NoiseKind { gaussian, laplacian, cauchy };

std::string_view to_string(NoiseKind kind);
std::optional<NoiseKind> parse_noise_kind(std::string_view name);

/// Symmetric, zero-median sensing noise with infinite support.
///
/// `scale` is the standard deviation for gaussian, the exponential scale b for laplacian and
/// the half-width for cauchy.
class NoiseModel {
 public:
  NoiseModel(NoiseKind kind, double scale);

  static NoiseModel gaussian(double sigma) { return {NoiseKind::gaussian, sigma}; }
  static NoiseModel laplacian(double b) { return {NoiseKind::laplacian, b}; }
  static NoiseModel cauchy(double gamma) { return {NoiseKind::cauchy, gamma}; }

  /// Model whose variance equals `variance`. Cauchy has none; its half-width is set to
  /// sqrt(variance) as a nominal stand-in.
  static NoiseModel with_variance(NoiseKind kind, double variance);

  NoiseKind kind() const { return kind_; }
  double scale() const { return scale_; }

  double pdf(double x) const;
  double cdf(double x) const;
  double quantile(double p) const;

  /// -p'(x)/p(x). Laplacian returns 0 at the kink.
  double score(double x) const;

  /// Variance, or nullopt when it does not exist (cauchy).
  std::optional<double> variance() const;

  /// T with Pr(|n| > T) = mass, from the closed-form quantile.
  double tail_truncation(double mass) const;

  /// One variate; consumes exactly one draw of the stream.
  double draw(RngStream& stream) const;
  std::vector<double> sample(RngStream& stream, std::size_t count) const;

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;

 private:
  NoiseKind kind_;
  double scale_;
};

std::string describe(const NoiseModel& model);

}  // namespace bmac

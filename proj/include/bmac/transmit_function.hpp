#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bmac {

enum class TransmitKind { tanh, gudermannian, rational, signed_power, uniform_quantizer, linear };

std::string_view to_string(TransmitKind kind);
std::optional<TransmitKind> parse_transmit_kind(std::string_view name);

/// Sensor transmission nonlinearity f.
///
/// The smooth bounded kinds are normalized to sup |f| = 1:
///   tanh          tanh(w x)
///   gudermannian  (2/pi) arctan(sinh(w x))
///   rational      w x / (1 + |w x|)
/// The quantizer has M = 2K + 1 levels k*D with D = 2 x_max / M on half-open cells
/// [(k - 1/2) D, (k + 1/2) D), saturating at +-K D. `linear` is a x and `signed_power` is
/// sign(x)|x|^p; both are unbounded.
class TransmitFunction {
 public:
  static TransmitFunction tanh(double omega);
  static TransmitFunction gudermannian(double omega);
  static TransmitFunction rational(double omega);
  static TransmitFunction signed_power(double exponent);
  static TransmitFunction uniform_quantizer(double x_max, int levels);
  static TransmitFunction linear(double alpha);

  TransmitKind kind() const { return kind_; }
  double omega() const { return param_; }
  double exponent() const { return param_; }
  double alpha() const { return param_; }
  double x_max() const { return param_; }
  int levels() const { return levels_; }

  /// Quantizer step D and saturation index K; only meaningful for uniform_quantizer.
  double step() const { return 2.0 * param_ / levels_; }
  int saturation_index() const { return (levels_ - 1) / 2; }

  bool has_omega() const;
  /// Copy with the scale replaced; kinds without an omega are returned unchanged.
  TransmitFunction with_omega(double omega) const;

  double eval(double x) const;
  /// f'(x). Throws UnsupportedKindError for the quantizer and signed_power.
  double derivative(double x) const;
  bool differentiable() const;
  /// Strictly increasing on the whole line (needed for inversion).
  bool strictly_increasing() const;

  /// sup |f|, or nullopt for unbounded kinds.
  std::optional<double> bound() const;

  /// Points where f or f' is not smooth: quantizer cell edges, 0 for rational/signed_power.
  std::vector<double> kinks() const;

  friend bool operator==(const TransmitFunction&, const TransmitFunction&) = default;

 private:
  TransmitFunction(TransmitKind kind, double param, int levels)
      : kind_(kind), param_(param), levels_(levels) {}

  TransmitKind kind_;
  double param_;
  int levels_ = 0;
};

std::string describe(const TransmitFunction& f);

}  // namespace bmac

#include "bmac/transmit_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bmac/errors.hpp"

namespace bmac {

using std::numbers::pi;

std::string_view to_string(TransmitKind kind) {
  switch (kind) {
    case TransmitKind::tanh: return "tanh";
    case TransmitKind::gudermannian: return "gudermannian";
    case TransmitKind::rational: return "rational";
    case TransmitKind::signed_power: return "signed_power";
    case TransmitKind::uniform_quantizer: return "uniform_quantizer";
    case TransmitKind::linear: return "linear";
  }
  return "unknown";
}

std::optional<TransmitKind> parse_transmit_kind(std::string_view name) {
  for (auto kind : {TransmitKind::tanh, TransmitKind::gudermannian, TransmitKind::rational,
                    TransmitKind::signed_power, TransmitKind::uniform_quantizer,
                    TransmitKind::linear}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw PreconditionError(std::string(what) + " must be positive and finite");
}

}  // namespace

TransmitFunction TransmitFunction::tanh(double omega) {
  require_positive(omega, "omega");
  return {TransmitKind::tanh, omega, 0};
}

TransmitFunction TransmitFunction::gudermannian(double omega) {
  require_positive(omega, "omega");
  return {TransmitKind::gudermannian, omega, 0};
}

TransmitFunction TransmitFunction::rational(double omega) {
  require_positive(omega, "omega");
  return {TransmitKind::rational, omega, 0};
}

TransmitFunction TransmitFunction::signed_power(double exponent) {
  if (!(exponent > 0.0 && exponent < 0.5))
    throw PreconditionError("signed_power exponent must lie in (0, 1/2)");
  return {TransmitKind::signed_power, exponent, 0};
}

TransmitFunction TransmitFunction::uniform_quantizer(double x_max, int levels) {
  require_positive(x_max, "x_max");
  if (levels < 3 || levels % 2 == 0)
    throw PreconditionError("quantizer level count M must be odd and at least 3");
  return {TransmitKind::uniform_quantizer, x_max, levels};
}

TransmitFunction TransmitFunction::linear(double alpha) {
  require_positive(alpha, "alpha");
  return {TransmitKind::linear, alpha, 0};
}

bool TransmitFunction::has_omega() const {
  return kind_ == TransmitKind::tanh || kind_ == TransmitKind::gudermannian ||
         kind_ == TransmitKind::rational;
}

TransmitFunction TransmitFunction::with_omega(double omega) const {
  if (!has_omega()) return *this;
  require_positive(omega, "omega");
  TransmitFunction out = *this;
  out.param_ = omega;
  return out;
}

double TransmitFunction::eval(double x) const {
  switch (kind_) {
    case TransmitKind::tanh: return std::tanh(param_ * x);
    case TransmitKind::gudermannian:
      // gd(y) = 2 atan(tanh(y/2)) avoids overflow of sinh.
      return (4.0 / pi) * std::atan(std::tanh(0.5 * param_ * x));
    case TransmitKind::rational: {
      const double y = param_ * x;
      return y / (1.0 + std::abs(y));
    }
    case TransmitKind::signed_power: {
      const double magnitude = std::pow(std::abs(x), param_);
      return x < 0.0 ? -magnitude : magnitude;
    }
    case TransmitKind::uniform_quantizer: {
      const double delta = step();
      const double k_max = saturation_index();
      const double k = std::clamp(std::floor(x / delta + 0.5), -k_max, k_max);
      return k * delta;
    }
    case TransmitKind::linear: return param_ * x;
  }
  return 0.0;
}

double TransmitFunction::derivative(double x) const {
  switch (kind_) {
    case TransmitKind::tanh: {
      const double t = std::tanh(param_ * x);
      return param_ * (1.0 - t * t);
    }
    case TransmitKind::gudermannian: return (2.0 / pi) * param_ / std::cosh(param_ * x);
    case TransmitKind::rational: {
      const double d = 1.0 + std::abs(param_ * x);
      return param_ / (d * d);
    }
    case TransmitKind::linear: return param_;
    case TransmitKind::signed_power:
    case TransmitKind::uniform_quantizer: break;
  }
  throw UnsupportedKindError("derivative is not available for transmit kind " +
                             std::string(to_string(kind_)));
}

bool TransmitFunction::differentiable() const {
  return kind_ != TransmitKind::uniform_quantizer && kind_ != TransmitKind::signed_power;
}

bool TransmitFunction::strictly_increasing() const {
  return kind_ != TransmitKind::uniform_quantizer;
}

std::optional<double> TransmitFunction::bound() const {
  switch (kind_) {
    case TransmitKind::tanh:
    case TransmitKind::gudermannian:
    case TransmitKind::rational: return 1.0;
    case TransmitKind::uniform_quantizer: return saturation_index() * step();
    case TransmitKind::signed_power:
    case TransmitKind::linear: break;
  }
  return std::nullopt;
}

std::vector<double> TransmitFunction::kinks() const {
  switch (kind_) {
    case TransmitKind::rational:
    case TransmitKind::signed_power: return {0.0};
    case TransmitKind::uniform_quantizer: {
      std::vector<double> edges;
      const double delta = step();
      for (int k = -saturation_index(); k < saturation_index(); ++k)
        edges.push_back((k + 0.5) * delta);
      return edges;
    }
    case TransmitKind::tanh:
    case TransmitKind::gudermannian:
    case TransmitKind::linear: break;
  }
  return {};
}

std::string describe(const TransmitFunction& f) {
  std::ostringstream os;
  os << to_string(f.kind()) << "(";
  switch (f.kind()) {
    case TransmitKind::tanh:
    case TransmitKind::gudermannian:
    case TransmitKind::rational: os << "omega=" << f.omega(); break;
    case TransmitKind::signed_power: os << "p=" << f.exponent(); break;
    case TransmitKind::uniform_quantizer: os << "x_max=" << f.x_max() << ",M=" << f.levels(); break;
    case TransmitKind::linear: os << "alpha=" << f.alpha(); break;
  }
  os << ")";
  return os.str();
}

}  // namespace bmac

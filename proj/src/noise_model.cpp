#include "bmac/noise_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "bmac/errors.hpp"

namespace bmac {

using std::numbers::pi;

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::laplacian: return "laplacian";
    case NoiseKind::cauchy: return "cauchy";
  }
  return "unknown";
}

std::optional<NoiseKind> parse_noise_kind(std::string_view name) {
  if (name == "gaussian") return NoiseKind::gaussian;
  if (name == "laplacian") return NoiseKind::laplacian;
  if (name == "cauchy") return NoiseKind::cauchy;
  return std::nullopt;
}

NoiseModel::NoiseModel(NoiseKind kind, double scale) : kind_(kind), scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw PreconditionError("noise scale must be positive and finite");
}

NoiseModel NoiseModel::with_variance(NoiseKind kind, double variance) {
  if (!(variance > 0.0)) throw PreconditionError("noise variance must be positive");
  switch (kind) {
    case NoiseKind::laplacian: return laplacian(std::sqrt(variance / 2.0));
    case NoiseKind::gaussian:
    case NoiseKind::cauchy: break;
  }
  return {kind, std::sqrt(variance)};
}

double NoiseModel::pdf(double x) const {
  const double u = x / scale_;
  switch (kind_) {
    case NoiseKind::gaussian: return std::exp(-0.5 * u * u) / (scale_ * std::sqrt(2.0 * pi));
    case NoiseKind::laplacian: return std::exp(-std::abs(u)) / (2.0 * scale_);
    case NoiseKind::cauchy: return 1.0 / (pi * scale_ * (1.0 + u * u));
  }
  return 0.0;
}

double NoiseModel::cdf(double x) const {
  const double u = x / scale_;
  switch (kind_) {
    case NoiseKind::gaussian: return 0.5 * std::erfc(-u / std::sqrt(2.0));
    case NoiseKind::laplacian:
      return u < 0.0 ? 0.5 * std::exp(u) : 1.0 - 0.5 * std::exp(-u);
    case NoiseKind::cauchy:
      return u < 0.0 ? std::atan2(1.0, -u) / pi : 1.0 - std::atan2(1.0, u) / pi;
  }
  return 0.0;
}

double NoiseModel::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw PreconditionError("quantile probability must be in (0, 1)");
  switch (kind_) {
    case NoiseKind::gaussian:
      return -scale_ * std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
    case NoiseKind::laplacian:
      return p < 0.5 ? scale_ * std::log(2.0 * p) : -scale_ * std::log(2.0 * (1.0 - p));
    case NoiseKind::cauchy:
      if (p == 0.5) return 0.0;
      return p < 0.5 ? -scale_ / std::tan(pi * p) : scale_ / std::tan(pi * (1.0 - p));
  }
  return 0.0;
}

double NoiseModel::score(double x) const {
  switch (kind_) {
    case NoiseKind::gaussian: return x / (scale_ * scale_);
    case NoiseKind::laplacian:
      if (x == 0.0) return 0.0;
      return (x > 0.0 ? 1.0 : -1.0) / scale_;
    case NoiseKind::cauchy: return 2.0 * x / (scale_ * scale_ + x * x);
  }
  return 0.0;
}

std::optional<double> NoiseModel::variance() const {
  switch (kind_) {
    case NoiseKind::gaussian: return scale_ * scale_;
    case NoiseKind::laplacian: return 2.0 * scale_ * scale_;
    case NoiseKind::cauchy: return std::nullopt;
  }
  return std::nullopt;
}

double NoiseModel::tail_truncation(double mass) const {
  if (!(mass > 0.0 && mass < 1.0)) throw PreconditionError("tail mass must be in (0, 1)");
  switch (kind_) {
    case NoiseKind::gaussian: return scale_ * std::sqrt(2.0) * boost::math::erfc_inv(mass);
    case NoiseKind::laplacian: return -scale_ * std::log(mass);
    case NoiseKind::cauchy: return scale_ / std::tan(0.5 * pi * mass);
  }
  return 0.0;
}

double NoiseModel::draw(RngStream& stream) const {
  const auto [u1, u2] = stream.uniform_pair();
  switch (kind_) {
    case NoiseKind::gaussian:
      return scale_ * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    case NoiseKind::laplacian: {
      const double centred = u1 - 0.5;
      const double magnitude = -scale_ * std::log1p(-2.0 * std::abs(centred));
      return centred < 0.0 ? -magnitude : magnitude;
    }
    case NoiseKind::cauchy: return scale_ * std::tan(pi * (u1 - 0.5));
  }
  return 0.0;
}

std::vector<double> NoiseModel::sample(RngStream& stream, std::size_t count) const {
  std::vector<double> out(count);
  for (auto& x : out) x = draw(stream);
  return out;
}

std::string describe(const NoiseModel& model) {
  std::ostringstream os;
  os << to_string(model.kind()) << "(" << model.scale() << ")";
  return os.str();
}

}  // namespace bmac

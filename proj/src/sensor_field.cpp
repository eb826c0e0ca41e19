#include "bmac/sensor_field.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "bmac/errors.hpp"

namespace bmac {

std::string_view to_string(SigmaKind kind) {
  switch (kind) {
    case SigmaKind::constant: return "constant";
    case SigmaKind::explicit_list: return "explicit_list";
    case SigmaKind::sqrt_growth: return "sqrt_growth";
  }
  return "unknown";
}

std::optional<SigmaKind> parse_sigma_kind(std::string_view name) {
  if (name == "constant") return SigmaKind::constant;
  if (name == "explicit_list") return SigmaKind::explicit_list;
  if (name == "sqrt_growth") return SigmaKind::sqrt_growth;
  return std::nullopt;
}

SigmaSequence SigmaSequence::constant(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw PreconditionError("sigma must be positive");
  SigmaSequence s;
  s.kind_ = SigmaKind::constant;
  s.sigma_ = sigma;
  return s;
}

SigmaSequence SigmaSequence::sqrt_growth(double sigma) {
  SigmaSequence s = constant(sigma);
  s.kind_ = SigmaKind::sqrt_growth;
  return s;
}

SigmaSequence SigmaSequence::explicit_list(std::vector<double> values) {
  if (values.empty()) throw PreconditionError("explicit sigma list must not be empty");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v)) throw PreconditionError("every sigma must be positive");
  SigmaSequence s;
  s.kind_ = SigmaKind::explicit_list;
  s.sigma_ = 0.0;
  s.values_ = std::move(values);
  return s;
}

double SigmaSequence::at(std::size_t i) const {
  switch (kind_) {
    case SigmaKind::constant: return sigma_;
    case SigmaKind::sqrt_growth: return sigma_ * std::sqrt(static_cast<double>(i));
    case SigmaKind::explicit_list:
      if (i == 0 || i > values_.size())
        throw PreconditionError("sensor index outside the explicit sigma list");
      return values_[i - 1];
  }
  return sigma_;
}

void SigmaSequence::check_length(std::size_t sensors) const {
  if (kind_ == SigmaKind::explicit_list && values_.size() < sensors)
    throw PreconditionError("explicit sigma list has " + std::to_string(values_.size()) +
                            " entries but " + std::to_string(sensors) + " sensors");
}

std::vector<SigmaSequence::Level> SigmaSequence::levels(std::size_t sensors) const {
  check_length(sensors);
  if (kind_ == SigmaKind::constant) return {{sigma_, sensors}};
  std::vector<Level> out;
  std::unordered_map<double, std::size_t> index;
  for (std::size_t i = 1; i <= sensors; ++i) {
    const double s = at(i);
    auto [it, inserted] = index.try_emplace(s, out.size());
    if (inserted)
      out.push_back({s, 1});
    else
      ++out[it->second].count;
  }
  return out;
}

bool SigmaSequence::all_unit(std::size_t sensors) const {
  switch (kind_) {
    case SigmaKind::constant: return sigma_ == 1.0;
    case SigmaKind::sqrt_growth: return sigma_ == 1.0 && sensors <= 1;
    case SigmaKind::explicit_list:
      check_length(sensors);
      return std::all_of(values_.begin(), values_.begin() + static_cast<long>(sensors),
                         [](double v) { return v == 1.0; });
  }
  return false;
}

void SensorField::validate() const {
  if (sensors == 0) throw PreconditionError("sensor count L must be positive");
  sigmas.check_length(sensors);
}

void ChannelModel::validate() const {
  if (!(total_power > 0.0) || !std::isfinite(total_power))
    throw PreconditionError("total power must be positive");
  if (!(noise_var > 0.0) || !std::isfinite(noise_var))
    throw PreconditionError("channel noise variance must be positive");
}

double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace bmac

#include "bmac/errors.hpp"

#include <sstream>

namespace bmac {

namespace {

std::string non_convergence_message(const std::string& integral, double best, double bound,
                                    int subdivisions) {
  std::ostringstream os;
  os.precision(6);
  os << "quadrature did not converge for " << integral << " after " << subdivisions
     << " subdivisions (best estimate " << best << ", error bound " << bound << ")";
  return os.str();
}

std::string out_of_range_message(double target, double arg, double value) {
  std::ostringstream os;
  os.precision(12);
  os << "target " << target << " outside the range of the function; nearest endpoint h(" << arg
     << ") = " << value;
  return os.str();
}

std::string config_message(const std::string& field, const std::string& message, int line) {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  if (!field.empty()) out += field + ": ";
  return out + message;
}

}  // namespace

NonConvergenceError::NonConvergenceError(std::string integral, double best_estimate,
                                         double error_bound, int subdivisions)
    : Error(non_convergence_message(integral, best_estimate, error_bound, subdivisions)),
      integral_(std::move(integral)),
      best_estimate_(best_estimate),
      error_bound_(error_bound),
      subdivisions_(subdivisions) {}

OutOfRangeError::OutOfRangeError(double target, double nearest_argument, double nearest_value)
    : Error(out_of_range_message(target, nearest_argument, nearest_value)),
      target_(target),
      nearest_argument_(nearest_argument),
      nearest_value_(nearest_value) {}

ConfigError::ConfigError(std::string field, const std::string& message, int line)
    : Error(config_message(field, message, line)), field_(std::move(field)), line_(line) {}

}  // namespace bmac

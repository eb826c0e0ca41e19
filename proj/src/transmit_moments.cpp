#include "bmac/transmit_moments.hpp"

#include <sstream>

#include "bmac/errors.hpp"

namespace bmac {

namespace {

std::string label(const char* what, const TransmitFunction& f, const NoiseModel& noise,
                  double sigma, double shift) {
  std::ostringstream os;
  os.precision(12);
  os << what << " for f=" << describe(f) << ", noise=" << describe(noise) << ", sigma=" << sigma
     << ", shift=" << shift;
  return os.str();
}

template <class Fn>
double labelled_expect(const NoiseModel& noise, Fn&& g, const std::vector<double>& points,
                       const QuadratureSpec& spec, const char* what, const TransmitFunction& f,
                       double sigma, double shift) {
  try {
    return expect(noise, std::forward<Fn>(g), spec, points);
  } catch (const NonConvergenceError& e) {
    throw e.relabel(label(what, f, noise, sigma, shift));
  }
}

}  // namespace

std::vector<double> noise_breakpoints(const TransmitFunction& f, double shift, double sigma) {
  std::vector<double> points{-shift / sigma};
  for (double k : f.kinks()) points.push_back((k - shift) / sigma);
  return points;
}

double transmit_mean(const TransmitFunction& f, const NoiseModel& noise, double sigma,
                     double shift, const QuadratureSpec& spec) {
  const auto points = noise_breakpoints(f, shift, sigma);
  return labelled_expect(noise, [&](double n) { return f.eval(shift + sigma * n); }, points, spec, "E[f(shift + sigma n)]", f, sigma, shift);
}

double transmit_second_moment(const TransmitFunction& f, const NoiseModel& noise, double sigma,
                              double shift, const QuadratureSpec& spec) {
  const auto points = noise_breakpoints(f, shift, sigma);
  return labelled_expect(
      noise,
      [&](double n) {
        const double y = f.eval(shift + sigma * n);
        return y * y;
      },
      points, spec, "E[f^2(shift + sigma n)]", f, sigma, shift);
}

double transmit_mean_slope(const TransmitFunction& f, const NoiseModel& noise, double sigma,
                           double shift, const QuadratureSpec& spec) {
  if (!f.differentiable())
    throw UnsupportedKindError("E[f'] needs a differentiable transmit function, got " +
                               describe(f));
  const auto points = noise_breakpoints(f, shift, sigma);
  return labelled_expect(noise, [&](double n) { return f.derivative(shift + sigma * n); }, points, spec, "E[f'(shift + sigma n)]", f, sigma, shift);
}

double transmit_mean_increment(const TransmitFunction& f, const NoiseModel& noise, double sigma,
                               double theta, const QuadratureSpec& spec) {
  if (theta == 0.0) return 0.0;
  auto points = noise_breakpoints(f, theta, sigma);
  const auto at_zero = noise_breakpoints(f, 0.0, sigma);
  points.insert(points.end(), at_zero.begin(), at_zero.end());
  return labelled_expect(noise, [&](double n) { return f.eval(theta + sigma * n) - f.eval(sigma * n); }, points, spec,
                         "E[f(theta + sigma n) - f(sigma n)]", f, sigma, theta);
}

}  // namespace bmac

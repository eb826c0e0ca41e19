#include "bmac/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "bmac/errors.hpp"

namespace bmac {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw PreconditionError("rel_tol must lie in (0, 1)");
  if (!(abs_tol > 0.0)) throw PreconditionError("abs_tol must be positive");
  if (!(tail_mass > 0.0 && tail_mass < 1.0))
    throw PreconditionError("tail_mass must lie in (0, 1)");
  if (max_subdivisions <= 0) throw PreconditionError("max_subdivisions must be positive");
}

namespace {

// QUADPACK qk21 abscissae (descending, last is the centre) and weights.
constexpr std::array<double, 11> kNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208965186568, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// 10-point Gauss weights for the odd-indexed nodes above.
constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod21(const RealFunction& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<double, 10> f_lo{};
  std::array<double, 10> f_hi{};
  const double f_centre = f(centre);
  double kronrod = kKronrodWeights[10] * f_centre;
  double gauss = 0.0;
  double abs_sum = std::abs(kronrod);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kNodes[j];
    f_lo[j] = f(centre - dx);
    f_hi[j] = f(centre + dx);
    const double pair = f_lo[j] + f_hi[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::abs(f_lo[j]) + std::abs(f_hi[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }

  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[10] * std::abs(f_centre - mean);
  for (int j = 0; j < 10; ++j)
    asc += kKronrodWeights[j] * (std::abs(f_lo[j] - mean) + std::abs(f_hi[j] - mean));

  const double abs_half = std::abs(half);
  const double value = kronrod * half;
  abs_sum *= abs_half;
  asc *= abs_half;
  double error = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && error != 0.0) error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps))
    error = std::max(50.0 * eps * abs_sum, error);
  return {a, b, value, error};
}

}  // namespace

QuadratureResult integrate(const RealFunction& f, double a, double b, const QuadratureSpec& spec,
                           std::span<const double> breakpoints, const std::string& label) {
  spec.validate();
  if (!(a < b)) throw PreconditionError("integration interval must satisfy a < b");

  std::vector<double> edges{a, b};
  for (double p : breakpoints)
    if (p > a && p < b) edges.push_back(p);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<Panel> open;
  std::vector<Panel> settled;  // too narrow to bisect further
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    open.push(gauss_kronrod21(f, edges[i], edges[i + 1]));

  auto totals = [&] {
    double value = 0.0, error = 0.0;
    auto copy = open;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    for (const auto& p : settled) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };

  auto [value, error] = totals();

  int subdivisions = 0;
  while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
    if (open.empty()) break;
    if (subdivisions >= spec.max_subdivisions)
      throw NonConvergenceError(label, value, error, subdivisions);
    const Panel worst = open.top();
    open.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) <= 1e3 * std::numeric_limits<double>::epsilon() *
                                   std::max(std::abs(worst.a), std::abs(worst.b))) {
      settled.push_back(worst);
      continue;
    }
    const Panel left = gauss_kronrod21(f, worst.a, mid);
    const Panel right = gauss_kronrod21(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    open.push(left);
    open.push(right);
    ++subdivisions;
  }

  // Re-sum from scratch so the reported value carries no running-sum drift.
  auto [v, e] = totals();
  if (e > std::max(spec.abs_tol, spec.rel_tol * std::abs(v)))
    throw NonConvergenceError(label, v, e, subdivisions);
  return {v, e, subdivisions};
}

QuadratureResult expect_detailed(const NoiseModel& model, const RealFunction& g,
                                 const QuadratureSpec& spec, std::span<const double> breakpoints,
                                 const std::string& label) {
  spec.validate();
  const double limit = model.tail_truncation(spec.tail_mass);

  std::vector<double> points(breakpoints.begin(), breakpoints.end());
  points.push_back(0.0);
  for (double mass : {0.5, 1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8, 1e-10}) {
    if (mass <= spec.tail_mass) break;
    const double t = model.tail_truncation(mass);
    points.push_back(t);
    points.push_back(-t);
  }

  auto integrand = [&](double n) { return g(n) * model.pdf(n); };
  return integrate(integrand, -limit, limit, spec, points, label);
}

double expect(const NoiseModel& model, const RealFunction& g, const QuadratureSpec& spec,
              std::span<const double> breakpoints, const std::string& label) {
  return expect_detailed(model, g, spec, breakpoints, label).value;
}

}  // namespace bmac

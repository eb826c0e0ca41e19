#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace bmac::testing {

/// Asymptotic Kolmogorov-Smirnov critical value at the 1% level is 1.628 / sqrt(n).
inline constexpr double kKsCritical1pct = 1.628;
/// Chi-square with 2 degrees of freedom, upper 1% point (Jarque-Bera at 1%).
inline constexpr double kJarqueBeraCritical1pct = 9.2103;

/// sup_x |F_n(x) - F(x)| for the empirical CDF of `samples`.
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

inline double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Composite Simpson rule on [a, b] with an even number of panels; a deliberately simple
/// oracle, independent of the library's adaptive quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int k = 1; k < panels; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return sum * h / 3.0;
}

inline double gaussian_pdf(double x, double sigma = 1.0) {
  return std::exp(-0.5 * x * x / (sigma * sigma)) / (sigma * std::sqrt(2.0 * M_PI));
}

struct Moments {
  double mean;
  double variance;
  double skewness;
  double kurtosis;
};

inline Moments moments(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  return {mean, m2, m3 / std::pow(m2, 1.5), m4 / (m2 * m2)};
}

inline double jarque_bera(const std::vector<double>& x) {
  const auto m = moments(x);
  const double n = static_cast<double>(x.size());
  return n / 6.0 * (m.skewness * m.skewness + 0.25 * (m.kurtosis - 3.0) * (m.kurtosis - 3.0));
}

}  // namespace bmac::testing

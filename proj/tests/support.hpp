#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

// Shared oracle helpers for the unit tests; everything here is deliberately
// naive and independent of the library implementations it checks.
namespace oracle {

// Composite Simpson on [a,b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i)
    acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// One-sample Kolmogorov-Smirnov statistic against a CDF.
inline double ks_one_sample(std::vector<double> xs,
                            const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double c = cdf(xs[i]);
    d = std::max(d, std::abs(c - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - c));
  }
  return d;
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  return d;
}

// Fourth-order central finite difference.
inline double fd_derivative(const std::function<double(double)>& f, double x,
                            double h = 1e-4) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) /
         (12 * h);
}

// Brute-force density functional estimator ((-1)^s / (n^2 h^(2s+1)))
// sum_{i,j} K^(2s)((X_i - X_j)/h), diagonal included, with K^(r) evaluated
// through explicit Hermite polynomials (independent of the library).
inline double hermite(int r, double x) {
  double hm = 0.0, h0 = 1.0;
  for (int k = 0; k < r; ++k) {
    const double next = x * h0 - k * hm;
    hm = h0;
    h0 = next;
  }
  return h0;
}

inline double kernel_deriv(int r, double x) {
  const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  return (r % 2 == 0 ? 1.0 : -1.0) * hermite(r, x) * phi;
}

inline double brute_norm(const std::vector<double>& xs, int s, double h) {
  const double n = static_cast<double>(xs.size());
  double acc = 0.0;
  for (const double xi : xs)
    for (const double xj : xs) acc += kernel_deriv(2 * s, (xi - xj) / h);
  return (s % 2 == 0 ? 1.0 : -1.0) * acc / (n * n * std::pow(h, 2 * s + 1));
}

inline double sample_sd(const std::vector<double>& xs) {
  double mean = 0.0;
  for (const double x : xs) mean += x;
  mean /= xs.size();
  double ss = 0.0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (xs.size() - 1));
}

// Brute-force gamma(eps) per the pilot construction.
inline double brute_gamma(const std::vector<double>& xs, double eps) {
  const double sd = sample_sd(xs);
  const double n = static_cast<double>(xs.size());
  const double k4 = kernel_deriv(4, 0.0);
  const double k6 = kernel_deriv(6, 0.0);
  const double sqrt_pi = std::sqrt(M_PI);
  const double h1 = sd * std::pow(2.0 * k4 * 16.0 * sqrt_pi / (15.0 * n), 1.0 / 7.0);
  const double h2 = sd * std::pow(-2.0 * k6 * 32.0 * sqrt_pi / (105.0 * n), 1.0 / 9.0);
  const double n2 = brute_norm(xs, 2, h1);
  const double n3 = brute_norm(xs, 3, h2);
  return std::pow(4.0 * sqrt_pi * k4 * n2 / n3, 1.0 / 7.0) *
         std::pow(eps, 5.0 / 7.0);
}

}  // namespace oracle

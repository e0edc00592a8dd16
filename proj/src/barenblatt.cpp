#include "pml/barenblatt.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>

namespace pml {

namespace {

double adaptive_simpson(const std::function<double(double)>&, double, double,
                        double, double, double, double, double, int);

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return adaptive_simpson(f, a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol,
                          48);
}

}  // namespace

double barenblatt_gamma_m(double m) {
  if (!(m > 1.0)) throw std::domain_error("barenblatt_gamma_m: m must be > 1");
  static std::map<double, double> cache;
  if (auto it = cache.find(m); it != cache.end()) return it->second;
  const double p = (m + 1.0) / (m - 1.0);
  const double half_pi = 0.5 * std::numbers::pi;
  const double value = integrate(
      [p](double x) { return std::pow(std::cos(x), p); }, -half_pi, half_pi,
      1e-12);
  cache.emplace(m, value);
  return value;
}

double barenblatt(double m, double t, double x) {
  if (!(t > 0.0)) throw std::domain_error("barenblatt: t must be > 0");
  if (!(m > 1.0)) throw std::domain_error("barenblatt: m must be > 1");
  const double b = 1.0 / (m + 1.0);
  const double k = (m - 1.0) / (2.0 * (m + 1.0) * m);
  const double gm = barenblatt_gamma_m(m);
  const double C = std::pow(std::sqrt(k) / gm, 2.0 * (m - 1.0) / (m + 1.0));
  const double tb = std::pow(t, -b);
  const double radicand = C - k * x * x * std::pow(t, -2.0 * b);
  if (radicand <= 0.0) return 0.0;
  return tb * std::pow(radicand, 1.0 / (m - 1.0));
}

double barenblatt_translated(double t, double x) {
  if (t < 0.0) throw std::domain_error("barenblatt_translated: t must be >= 0");
  const double s = t + 1.0;
  const double radicand =
      1.0 / (std::numbers::pi * std::sqrt(3.0)) - x * x / (12.0 * std::sqrt(s));
  if (radicand <= 0.0) return 0.0;
  return std::pow(s, -0.25) * std::sqrt(radicand);
}

double barenblatt_translated_support(double t) {
  const double s = t + 1.0;
  return std::sqrt(12.0 * std::sqrt(s) / (std::numbers::pi * std::sqrt(3.0)));
}

}  // namespace pml

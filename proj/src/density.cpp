#include "pml/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "pml/barenblatt.hpp"

namespace pml {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (kSqrt2Pi * sigma);
}

double normal_cdf(double x, double mu, double sigma) {
  return 0.5 * std::erfc(-(x - mu) / (sigma * std::numbers::sqrt2));
}

double component_pdf(const MixtureComponent& c, double x) {
  if (const auto* nc = std::get_if<NormalComponent>(&c))
    return normal_pdf(x, nc->mu, nc->sigma);
  const auto& u = std::get<UniformComponent>(c);
  return (x >= u.lo && x <= u.hi) ? 1.0 / (u.hi - u.lo) : 0.0;
}

double component_cdf(const MixtureComponent& c, double x) {
  if (const auto* nc = std::get_if<NormalComponent>(&c))
    return normal_cdf(x, nc->mu, nc->sigma);
  const auto& u = std::get<UniformComponent>(c);
  if (x <= u.lo) return 0.0;
  if (x >= u.hi) return 1.0;
  return (x - u.lo) / (u.hi - u.lo);
}

double component_quantile(const MixtureComponent& c, double p) {
  if (const auto* nc = std::get_if<NormalComponent>(&c))
    return nc->mu + nc->sigma * normal_quantile(p);
  const auto& u = std::get<UniformComponent>(c);
  return u.lo + (u.hi - u.lo) * p;
}

// Cumulative-integral table for BarenblattTranslated with m != 3 (the m = 3
// CDF is closed form).
struct CdfTable {
  double lo, dx;
  std::vector<double> F;
};

const CdfTable& barenblatt_cdf_table(double m) {
  static std::map<double, CdfTable> cache;
  if (auto it = cache.find(m); it != cache.end()) return it->second;
  const int n = 1 << 14;  // Simpson pairs
  CdfTable t;
  const double k = (m - 1.0) / (2.0 * (m + 1.0) * m);
  const double gm = barenblatt_gamma_m(m);
  const double C = std::pow(std::sqrt(k) / gm, 2.0 * (m - 1.0) / (m + 1.0));
  const double r = std::sqrt(C / k);
  t.lo = -r;
  t.dx = 2.0 * r / (2 * n);
  t.F.resize(2 * n + 1);
  t.F[0] = 0.0;
  auto f = [m](double x) { return barenblatt(m, 1.0, x); };
  for (int i = 0; i < n; ++i) {
    const double a = t.lo + 2 * i * t.dx;
    t.F[2 * i + 1] =
        t.F[2 * i] +
        t.dx / 12.0 * (5.0 * f(a) + 8.0 * f(a + t.dx) - f(a + 2 * t.dx));
    t.F[2 * i + 2] =
        t.F[2 * i] +
        t.dx / 3.0 * (f(a) + 4.0 * f(a + t.dx) + f(a + 2 * t.dx));
  }
  const double total = t.F.back();
  for (double& v : t.F) v /= total;
  return cache.emplace(m, std::move(t)).first->second;
}

double barenblatt_cdf(double m, double x) {
  if (m == 3.0) {
    const double r = barenblatt_translated_support(0.0);
    if (x <= -r) return 0.0;
    if (x >= r) return 1.0;
    const double g =
        0.5 * (x * std::sqrt(r * r - x * x) + r * r * std::asin(x / r));
    return (g + 0.25 * std::numbers::pi * r * r) / std::sqrt(12.0);
  }
  const auto& t = barenblatt_cdf_table(m);
  const double s = (x - t.lo) / t.dx;
  if (s <= 0.0) return 0.0;
  const auto last = static_cast<double>(t.F.size() - 1);
  if (s >= last) return 1.0;
  const auto i = static_cast<std::size_t>(s);
  const double frac = s - static_cast<double>(i);
  return t.F[i] + frac * (t.F[i + 1] - t.F[i]);
}

// Monotone bisection inverse, used where no closed-form quantile exists.
double invert_cdf(const DensitySpec& spec, double p, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (density_cdf(spec, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("normal_quantile: p must be in (0,1)");
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley step against the exact CDF.
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

DensitySpec DensitySpec::gaussian_mixture(std::vector<double> weights,
                                          std::vector<double> means,
                                          std::vector<double> sigmas) {
  if (weights.size() != means.size() || weights.size() != sigmas.size() ||
      weights.empty())
    throw std::invalid_argument("gaussian_mixture: inconsistent sizes");
  DensitySpec s;
  s.kind = DensityKind::GaussianMixture;
  s.weights = std::move(weights);
  for (std::size_t i = 0; i < means.size(); ++i)
    s.components.push_back(NormalComponent{means[i], sigmas[i]});
  return s;
}

DensitySpec DensitySpec::uniform_mixture(
    std::vector<double> weights, std::vector<UniformComponent> intervals) {
  if (weights.size() != intervals.size() || weights.empty())
    throw std::invalid_argument("uniform_mixture: inconsistent sizes");
  DensitySpec s;
  s.kind = DensityKind::UniformMixture;
  s.weights = std::move(weights);
  for (const auto& iv : intervals) s.components.push_back(iv);
  return s;
}

DensitySpec DensitySpec::normal_uniform_mixture() {
  DensitySpec s;
  s.kind = DensityKind::NormalUniformMixture;
  s.weights = {0.5, 0.5};
  s.components = {NormalComponent{-1.0, 0.2}, UniformComponent{0.0, 1.0}};
  return s;
}

DensitySpec DensitySpec::sqrt_density() {
  DensitySpec s;
  s.kind = DensityKind::SqrtDensity;
  return s;
}

DensitySpec DensitySpec::barenblatt_translated(double m) {
  DensitySpec s;
  s.kind = DensityKind::BarenblattTranslated;
  s.m = m;
  return s;
}

double density_eval(const DensitySpec& spec, double x) {
  switch (spec.kind) {
    case DensityKind::GaussianMixture:
    case DensityKind::UniformMixture:
    case DensityKind::NormalUniformMixture: {
      double v = 0.0;
      for (std::size_t i = 0; i < spec.weights.size(); ++i)
        v += spec.weights[i] * component_pdf(spec.components[i], x);
      return v;
    }
    case DensityKind::SqrtDensity:
      return (x >= -1.0 && x <= 1.0) ? 0.75 * std::sqrt(std::abs(x)) : 0.0;
    case DensityKind::BarenblattTranslated:
      return barenblatt(spec.m, 1.0, x);
  }
  return 0.0;
}

double density_cdf(const DensitySpec& spec, double x) {
  switch (spec.kind) {
    case DensityKind::GaussianMixture:
    case DensityKind::UniformMixture:
    case DensityKind::NormalUniformMixture: {
      double v = 0.0;
      for (std::size_t i = 0; i < spec.weights.size(); ++i)
        v += spec.weights[i] * component_cdf(spec.components[i], x);
      return v;
    }
    case DensityKind::SqrtDensity: {
      const double c = std::clamp(x, -1.0, 1.0);
      return 0.5 * (1.0 + std::copysign(std::pow(std::abs(c), 1.5), c));
    }
    case DensityKind::BarenblattTranslated:
      return barenblatt_cdf(spec.m, x);
  }
  return 0.0;
}

double density_quantile(const DensitySpec& spec, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("density_quantile: p must be in (0,1)");
  switch (spec.kind) {
    case DensityKind::SqrtDensity: {
      const double s = 2.0 * p - 1.0;
      return std::copysign(std::pow(std::abs(s), 2.0 / 3.0), s);
    }
    default: {
      auto [lo, hi] = density_support(spec);
      return invert_cdf(spec, p, lo, hi);
    }
  }
}

std::pair<double, double> density_support(const DensitySpec& spec) {
  switch (spec.kind) {
    case DensityKind::SqrtDensity:
      return {-1.0, 1.0};
    case DensityKind::BarenblattTranslated: {
      const double k = (spec.m - 1.0) / (2.0 * (spec.m + 1.0) * spec.m);
      const double gm = barenblatt_gamma_m(spec.m);
      const double C =
          std::pow(std::sqrt(k) / gm, 2.0 * (spec.m - 1.0) / (spec.m + 1.0));
      const double r = std::sqrt(C / k);
      return {-r, r};
    }
    default: {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& c : spec.components) {
        if (const auto* nc = std::get_if<NormalComponent>(&c)) {
          lo = std::min(lo, nc->mu - 10.0 * nc->sigma);
          hi = std::max(hi, nc->mu + 10.0 * nc->sigma);
        } else {
          const auto& u = std::get<UniformComponent>(c);
          lo = std::min(lo, u.lo);
          hi = std::max(hi, u.hi);
        }
      }
      return {lo, hi};
    }
  }
}

std::vector<double> density_sample(const DensitySpec& spec, std::size_t n,
                                   const CounterRng& rng,
                                   std::uint64_t stream) {
  if (n < 1) throw std::invalid_argument("density_sample: n must be >= 1");
  std::vector<double> xs(n);
  const bool mixture = spec.kind == DensityKind::GaussianMixture ||
                       spec.kind == DensityKind::UniformMixture ||
                       spec.kind == DensityKind::NormalUniformMixture;
  for (std::size_t i = 0; i < n; ++i) {
    if (mixture) {
      const double u1 = rng.uniform(stream, 3 * i);
      const double u2 = rng.uniform(stream, 3 * i + 1);
      double acc = 0.0;
      std::size_t c = spec.weights.size() - 1;
      for (std::size_t j = 0; j < spec.weights.size(); ++j) {
        acc += spec.weights[j];
        if (u1 <= acc) {
          c = j;
          break;
        }
      }
      xs[i] = component_quantile(spec.components[c], u2);
    } else {
      xs[i] = density_quantile(spec, rng.uniform(stream, 3 * i));
    }
  }
  return xs;
}

}  // namespace pml

#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "pml/rng.hpp"

namespace pml {

enum class DensityKind {
  GaussianMixture,
  UniformMixture,
  NormalUniformMixture,
  SqrtDensity,
  BarenblattTranslated,
};

struct NormalComponent {
  double mu;
  double sigma;
};

struct UniformComponent {
  double lo;
  double hi;
};

using MixtureComponent = std::variant<NormalComponent, UniformComponent>;

// An initial probability density with exact evaluation, closed-form CDF and
// rejection-free inverse-CDF sampling.
struct DensitySpec {
  DensityKind kind = DensityKind::GaussianMixture;
  std::vector<double> weights;              // mixture kinds
  std::vector<MixtureComponent> components;  // mixture kinds
  double m = 3.0;                           // BarenblattTranslated exponent

  static DensitySpec gaussian_mixture(std::vector<double> weights,
                                      std::vector<double> means,
                                      std::vector<double> sigmas);
  static DensitySpec uniform_mixture(std::vector<double> weights,
                                     std::vector<UniformComponent> intervals);
  // 1/2 (N(-1, 0.2) + Uniform[0,1])
  static DensitySpec normal_uniform_mixture();
  // (3/4) sqrt(|x|) on [-1, 1]
  static DensitySpec sqrt_density();
  // U(1, .) of the Barenblatt-Pattle density with exponent m
  static DensitySpec barenblatt_translated(double m = 3.0);
};

double density_eval(const DensitySpec& spec, double x);
double density_cdf(const DensitySpec& spec, double x);
// Inverse CDF; p in (0,1).
double density_quantile(const DensitySpec& spec, double p);
// [lo, hi] containing all the mass (Gaussian tails cut at 10 sigma).
std::pair<double, double> density_support(const DensitySpec& spec);

// n i.i.d. draws, reproducible: draw i is a pure function of (rng, stream, i).
std::vector<double> density_sample(const DensitySpec& spec, std::size_t n,
                                   const CounterRng& rng,
                                   std::uint64_t stream = rng_stream::kInitialSample);

// Standard normal quantile (Acklam's approximation plus one refinement).
double normal_quantile(double p);

}  // namespace pml

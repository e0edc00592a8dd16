#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pml/density.hpp"
#include "pml/kde.hpp"
#include "pml/rng.hpp"
#include "support.hpp"

using namespace pml;

namespace {

std::vector<double> gaussian_sample(std::size_t n, std::uint64_t seed) {
  const DensitySpec d = DensitySpec::gaussian_mixture({1.0}, {0.0}, {1.0});
  return density_sample(d, n, CounterRng(seed));
}

std::vector<double> trimodal_sample(std::size_t n, std::uint64_t seed) {
  const DensitySpec d = DensitySpec::gaussian_mixture(
      {1.0 / 3, 1.0 / 3, 1.0 / 3}, {-4.0, 0.0, 4.0}, {0.1, 0.2, 0.3});
  return density_sample(d, n, CounterRng(seed));
}

// rescale so the unbiased empirical standard deviation is exactly `sd`
std::vector<double> normalized_sample(std::size_t n, double sd,
                                      std::uint64_t seed) {
  std::vector<double> xs = gaussian_sample(n, seed);
  double mean = 0.0;
  for (const double x : xs) mean += x;
  mean /= static_cast<double>(n);
  for (double& x : xs) x -= mean;
  const double s = oracle::sample_sd(xs);
  for (double& x : xs) x *= sd / s;
  return xs;
}

}  // namespace

TEST_CASE("gaussian_kernel_deriv closed-form values") {
  const double inv = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  CHECK(gaussian_kernel_deriv(0, 0.0) == doctest::Approx(inv).epsilon(1e-14));
  CHECK(gaussian_kernel_deriv(4, 0.0) ==
        doctest::Approx(3.0 * inv).epsilon(1e-14));
  CHECK(gaussian_kernel_deriv(6, 0.0) ==
        doctest::Approx(-15.0 * inv).epsilon(1e-14));
  CHECK_THROWS_AS(gaussian_kernel_deriv(9, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_kernel_deriv(-1, 0.0), std::invalid_argument);
}

TEST_CASE("gaussian_kernel_deriv matches finite differences") {
  for (int r = 1; r <= 6; ++r) {
    for (const double x : {-1.7, -0.3, 0.0, 0.9, 2.4}) {
      const double fd = oracle::fd_derivative(
          [r](double y) { return pml::gaussian_kernel_deriv(r - 1, y); }, x);
      CHECK(gaussian_kernel_deriv(r, x) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("kde_eval nonnegative and integrates to one") {
  const std::vector<double> xs = {-1.0, 0.2, 0.5, 3.0};
  const double mass = oracle::simpson(
      [&](double x) { return kde_eval(xs, 0.4, x); }, -8.0, 10.0, 20000);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  for (double x = -8.0; x <= 10.0; x += 0.05) CHECK(kde_eval(xs, 0.4, x) >= 0.0);
}

TEST_CASE("pair sum backends agree") {
  const std::vector<double> xs = trimodal_sample(500, 7);
  for (const int order : {0, 4, 6}) {
    for (const double h : {0.1, 0.3, 1.0}) {
      const double exact = pair_kernel_sum_exact(xs, order, h);
      const double binned = BinnedSample(xs).pair_kernel_sum(order, h);
      CHECK(binned ==
            doctest::Approx(exact).epsilon(order == 0 ? 1e-3 : 5e-2));
    }
  }
}

TEST_CASE("functional_norm_estimate brute-force equivalence") {
  const std::vector<double> xs = trimodal_sample(200, 3);
  const Sample sample{xs};
  for (const int s : {2, 3}) {
    for (const double h : {0.2, 0.5}) {
      const double mine =
          functional_norm_estimate(sample, s, h, PairSumMode::Exact);
      CHECK(mine ==
            doctest::Approx(oracle::brute_norm(xs, s, h)).epsilon(1e-10));
      // truncated path agrees too (cutoff tail below 1e-12)
      const double trunc =
          functional_norm_estimate(sample, s, h, PairSumMode::Truncated);
      CHECK(trunc == doctest::Approx(mine).epsilon(1e-9));
    }
  }
}

TEST_CASE("functional_norm_estimate single point and permutation symmetry") {
  const Sample one{{0.7}};
  CHECK(functional_norm_estimate(one, 2, 0.5, PairSumMode::Exact) ==
        doctest::Approx(gaussian_kernel_deriv(4, 0.0) / std::pow(0.5, 5)));
  std::vector<double> xs = trimodal_sample(50, 11);
  const double a =
      functional_norm_estimate(Sample{xs}, 2, 0.3, PairSumMode::Exact);
  std::reverse(xs.begin(), xs.end());
  const double b =
      functional_norm_estimate(Sample{xs}, 2, 0.3, PairSumMode::Exact);
  CHECK(a == doctest::Approx(b).epsilon(1e-13));
}

TEST_CASE("empirical_std") {
  CHECK(oracle::sample_sd({1.0, 2.0, 3.0}) == doctest::Approx(1.0));
  CHECK(empirical_std(std::vector<double>{1.0, 2.0, 3.0}) ==
        doctest::Approx(1.0).epsilon(1e-14));
  // robust variant never exceeds the plain one
  const std::vector<double> xs = trimodal_sample(300, 5);
  CHECK(empirical_std(xs, true) <= empirical_std(xs, false) + 1e-14);
}

TEST_CASE("silverman_bandwidth frozen values") {
  CHECK(silverman_bandwidth(Sample{{-2.0, 0.0, 2.0}}) ==
        doctest::Approx(1.700566).epsilon(1e-5));
  const Sample big{normalized_sample(50000, 1.0, 9)};
  CHECK(silverman_bandwidth(big) == doctest::Approx(0.121673).epsilon(1e-5));
  CHECK_THROWS(silverman_bandwidth(Sample{{1.0, 1.0, 1.0}}));
}

TEST_CASE("pilot_bandwidths frozen values at n=1000, sd=1") {
  const Sample s{normalized_sample(1000, 1.0, 13)};
  const auto [h1, h2] = pilot_bandwidths(s);
  CHECK(h1 == doctest::Approx(0.462482).epsilon(1e-5));
  CHECK(h2 == doctest::Approx(0.571123).epsilon(1e-5));
}

TEST_CASE("gamma_of_epsilon matches the brute-force construction") {
  const std::vector<double> xs = gaussian_sample(150, 21);
  const Sample s{xs};
  CHECK(gamma_of_epsilon(s, 0.0) == 0.0);
  for (const double eps : {0.05, 0.2, 0.8}) {
    CHECK(gamma_of_epsilon(s, eps, PairSumMode::Exact) ==
          doctest::Approx(oracle::brute_gamma(xs, eps)).epsilon(1e-10));
  }
  // 5/7-power scaling
  const double g1 = gamma_of_epsilon(s, 0.1, PairSumMode::Exact);
  const double g2 = gamma_of_epsilon(s, 0.2, PairSumMode::Exact);
  CHECK(g2 / g1 == doctest::Approx(std::pow(2.0, 5.0 / 7.0)).epsilon(1e-12));
}

TEST_CASE("amise") {
  CHECK(amise(1.0, 1, 4.0) ==
        doctest::Approx(1.0 + 0.5 / std::sqrt(std::numbers::pi))
            .epsilon(1e-12));
  CHECK(amise(1.0, 1, 4.0) == doctest::Approx(1.28209).epsilon(1e-5));
  // golden-section minimizer equals the closed-form optimum
  const std::size_t n = 1000;
  const double norm = 0.7;
  double lo = 1e-3, hi = 1.0;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    if (amise(x1, n, norm) < amise(x2, n, norm))
      hi = x2;
    else
      lo = x1;
  }
  const double opt =
      std::pow(2.0 * n * std::sqrt(std::numbers::pi) * norm, -0.2);
  CHECK(0.5 * (lo + hi) == doctest::Approx(opt).epsilon(1e-6));
  CHECK(amise(opt, n, norm) <= amise(2.0 * opt, n, norm));
}

TEST_CASE("solve_the_equation invariances") {
  std::vector<double> xs = gaussian_sample(400, 31);
  const double eps0 = solve_the_equation_bandwidth(Sample{xs}).epsilon;

  std::vector<double> perm = xs;
  std::reverse(perm.begin(), perm.end());
  CHECK(solve_the_equation_bandwidth(Sample{perm}).epsilon == eps0);

  std::vector<double> shifted = xs;
  for (double& x : shifted) x += 5.0;
  CHECK(solve_the_equation_bandwidth(Sample{shifted}).epsilon ==
        doctest::Approx(eps0).epsilon(1e-10));

  std::vector<double> scaled = xs;
  for (double& x : scaled) x *= 3.0;
  CHECK(solve_the_equation_bandwidth(Sample{scaled}).epsilon ==
        doctest::Approx(3.0 * eps0).epsilon(1e-3));
}

TEST_CASE("solve_the_equation satisfies its own fixed point") {
  const std::vector<double> xs = gaussian_sample(200, 41);
  const Sample s{xs};
  const BandwidthReport r =
      solve_the_equation_bandwidth(s, 1e-6, 80, PairSumMode::Exact);
  REQUIRE(r.method == BandwidthMethod::SolveTheEquation);
  // residual check against the brute-force reimplementation
  const double g = oracle::brute_gamma(xs, r.epsilon);
  const double norm = oracle::brute_norm(xs, 2, g);
  const double rhs = std::pow(
      2.0 * xs.size() * std::sqrt(std::numbers::pi) * norm, -0.2);
  CHECK(r.epsilon == doctest::Approx(rhs).epsilon(1e-4));
}

TEST_CASE("multimodality shrinks the selected bandwidth below Silverman") {
  const Sample s{trimodal_sample(3000, 51)};
  const BandwidthReport r = solve_the_equation_bandwidth(s);
  CHECK(r.method == BandwidthMethod::SolveTheEquation);
  CHECK(r.epsilon < silverman_bandwidth(s));
}

TEST_CASE("binned kde field is a good interpolant") {
  const std::vector<double> xs = trimodal_sample(3000, 61);
  const BinnedSample binned(xs);
  const std::vector<double> probes = {-4.0, -1.0, 0.0, 0.3, 4.0};
  const std::vector<double> approx = binned.kde_at(probes, 0.2);
  for (std::size_t i = 0; i < probes.size(); ++i)
    CHECK(approx[i] == doctest::Approx(kde_eval(xs, 0.2, probes[i]))
                           .epsilon(2e-3));
}

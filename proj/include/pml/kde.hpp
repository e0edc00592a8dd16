#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace pml {

// Particle positions at one time instant.
struct Sample {
  std::vector<double> positions;
  std::size_t n() const { return positions.size(); }
};

// r-th derivative of the standard normal density, r <= 8, via the
// probabilists' Hermite recurrence: K^(r)(x) = (-1)^r He_r(x) K(x).
double gaussian_kernel_deriv(int r, double x);

// (1/n) sum_j K_eps(x - X_j),  K_eps(y) = K(y/eps)/eps.
double kde_eval(std::span<const double> positions, double epsilon, double x);

// Evaluation strategy for the O(n^2) pairwise kernel sums.
//  Exact     plain double loop, no truncation
//  Truncated particles sorted once, Gaussian cut at |x| > 8 bandwidths
//  Binned    linear binning on a 4096-cell grid; lag sums read off an
//            FFT autocorrelation of the bin weights
//  Auto      Exact/Truncated below kBinnedThreshold particles, Binned above
enum class PairSumMode { Exact, Truncated, Binned, Auto };

inline constexpr std::size_t kBinnedThreshold = 2000;
inline constexpr int kBinnedGridCells = 4096;
inline constexpr double kKernelCutoff = 12.0;  // exp(-72) tail

// Linear-binned representation of a sample; reusable across bandwidths.
class BinnedSample {
 public:
  BinnedSample(std::span<const double> positions, int cells = kBinnedGridCells);

  // sum over all ordered pairs (i,j), diagonal included, of
  // K^(order)((X_i - X_j)/h).
  double pair_kernel_sum(int order, double h) const;

  // Binned KDE values at every bin center for bandwidth eps.
  std::vector<double> kde_on_bins(double eps) const;
  // Linear interpolation of kde_on_bins at arbitrary points.
  std::vector<double> kde_at(std::span<const double> xs, double eps) const;

  double lo() const { return lo_; }
  double delta() const { return delta_; }
  int cells() const { return cells_; }
  std::size_t n() const { return n_; }

 private:
  double lo_ = 0.0, delta_ = 1.0;
  int cells_ = 0;
  std::size_t n_ = 0;
  std::vector<double> weights_;   // linear-binned counts
  std::vector<double> autocorr_;  // lag 0 .. cells-1
};

// sum over all ordered pairs of K^(order)((X_i - X_j)/h), exact double loop.
double pair_kernel_sum_exact(std::span<const double> positions, int order,
                             double h);

// Density functional estimator for ||d^s u / dx^s||^2, s in {2,3}:
//   ((-1)^s / (n^2 h^(2s+1))) sum_{i,j} K^(2s)((X_i - X_j)/h),
// diagonal terms included.
double functional_norm_estimate(const Sample& sample, int s, double h,
                                PairSumMode mode = PairSumMode::Auto);

// Unbiased empirical standard deviation; robust variant min(sd, IQR/1.349).
double empirical_std(std::span<const double> xs, bool robust = false);

// (4/(3n))^(1/5) sigma_hat.
double silverman_bandwidth(const Sample& sample, bool robust = false);

// Normal-reference pilot bandwidths:
//   h1 = (2 K4(0) / (n (15/(16 sqrt(pi))) sd^-7))^(1/7)
//   h2 = (-2 K6(0) / (n (105/(32 sqrt(pi))) sd^-9))^(1/9)
std::pair<double, double> pilot_bandwidths(const Sample& sample,
                                           bool robust = false);

// Pilot bandwidth map gamma(eps) =
//   (4 sqrt(pi) K4(0) ||d2u^{h1}||^2 / ||d3u^{h2}||^2)^(1/7) eps^(5/7).
// Throws std::runtime_error on a non-positive pilot functional estimate.
double gamma_of_epsilon(const Sample& sample, double epsilon,
                        PairSumMode mode = PairSumMode::Auto,
                        bool robust = false);

// (1/4) eps^4 ||u''||^2 + 1/(2 eps n sqrt(pi)).
double amise(double epsilon, std::size_t n, double curvature_norm);

enum class BandwidthMethod { Silverman, SolveTheEquation };

struct BandwidthReport {
  double epsilon = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double curvature_norm = 0.0;  // estimate of ||d^2 u/dx^2||^2
  int iterations = 0;
  BandwidthMethod method = BandwidthMethod::Silverman;
};

BandwidthReport silverman_report(const Sample& sample, bool robust = false);

// Solve-the-equation plug-in: root of
//   eps = (2 n sqrt(pi) ||d2u^{gamma(eps)}||^2)^(-1/5)
// by bisection on [silverman/100, silverman*100] (bracket expanded once by
// another factor 100); falls back to Silverman when bracketing fails.
BandwidthReport solve_the_equation_bandwidth(const Sample& sample,
                                             double tol = 1e-4,
                                             int max_iter = 60,
                                             PairSumMode mode = PairSumMode::Auto,
                                             bool robust = false);

}  // namespace pml

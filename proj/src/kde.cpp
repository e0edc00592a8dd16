#include "pml/kde.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace pml {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr double kSqrtPi = 1.7724538509055160;

double sorted_quantile(const std::vector<double>& xs, double p) {
  const double s = p * static_cast<double>(xs.size() - 1);
  const auto i = static_cast<std::size_t>(s);
  if (i + 1 >= xs.size()) return xs.back();
  const double f = s - static_cast<double>(i);
  return xs[i] + f * (xs[i + 1] - xs[i]);
}

double pair_kernel_sum_truncated(std::span<const double> positions, int order,
                                 double h) {
  std::vector<double> xs(positions.begin(), positions.end());
  std::sort(xs.begin(), xs.end());
  const double cut = kKernelCutoff * h;
  double off_diag = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size() && xs[j] - xs[i] <= cut; ++j)
      off_diag += gaussian_kernel_deriv(order, (xs[j] - xs[i]) / h);
  }
  return static_cast<double>(xs.size()) * gaussian_kernel_deriv(order, 0.0) +
         2.0 * off_diag;
}

}  // namespace

double gaussian_kernel_deriv(int r, double x) {
  if (r < 0 || r > 8)
    throw std::invalid_argument("gaussian_kernel_deriv: order must be in [0,8]");
  // He_0 = 1, He_{k+1} = x He_k - k He_{k-1}
  double hkm1 = 0.0, hk = 1.0;
  for (int k = 0; k < r; ++k) {
    const double next = x * hk - static_cast<double>(k) * hkm1;
    hkm1 = hk;
    hk = next;
  }
  const double sign = (r % 2 == 0) ? 1.0 : -1.0;
  return sign * hk * kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double kde_eval(std::span<const double> positions, double epsilon, double x) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("kde_eval: epsilon must be > 0");
  double acc = 0.0;
  for (const double p : positions)
    acc += gaussian_kernel_deriv(0, (x - p) / epsilon);
  return acc / (epsilon * static_cast<double>(positions.size()));
}

BinnedSample::BinnedSample(std::span<const double> positions, int cells)
    : cells_(cells), n_(positions.size()) {
  if (cells < 2) throw std::invalid_argument("BinnedSample: cells must be >= 2");
  if (positions.empty())
    throw std::invalid_argument("BinnedSample: empty sample");
  auto [mn, mx] = std::minmax_element(positions.begin(), positions.end());
  lo_ = *mn;
  const double range = *mx - *mn;
  delta_ = range > 0.0 ? range / static_cast<double>(cells - 1) : 1.0;
  weights_.assign(cells_, 0.0);
  for (const double x : positions) {
    const double s = (x - lo_) / delta_;
    auto i = static_cast<std::size_t>(s);
    if (i >= static_cast<std::size_t>(cells_ - 1)) i = cells_ - 2;
    const double f = s - static_cast<double>(i);
    weights_[i] += 1.0 - f;
    weights_[i + 1] += f;
  }

  // autocorrelation of the bin weights by zero-padded FFT
  std::size_t m = 1;
  while (m < static_cast<std::size_t>(2 * cells_)) m <<= 1;
  std::vector<double> in(m, 0.0);
  std::copy(weights_.begin(), weights_.end(), in.begin());
  std::vector<fftw_complex> freq(m / 2 + 1);
  fftw_plan fwd = fftw_plan_dft_r2c_1d(static_cast<int>(m), in.data(),
                                       freq.data(), FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);
  for (auto& c : freq) {
    c[0] = c[0] * c[0] + c[1] * c[1];
    c[1] = 0.0;
  }
  std::vector<double> out(m);
  fftw_plan bwd = fftw_plan_dft_c2r_1d(static_cast<int>(m), freq.data(),
                                       out.data(), FFTW_ESTIMATE);
  fftw_execute(bwd);
  fftw_destroy_plan(bwd);
  autocorr_.resize(cells_);
  for (int d = 0; d < cells_; ++d)
    autocorr_[d] = out[d] / static_cast<double>(m);
}

double BinnedSample::pair_kernel_sum(int order, double h) const {
  if (!(h > 0.0)) throw std::invalid_argument("pair_kernel_sum: h must be > 0");
  const auto max_lag = static_cast<int>(std::ceil(kKernelCutoff * h / delta_));
  const int d_max = std::min(cells_ - 1, max_lag);
  double acc = autocorr_[0] * gaussian_kernel_deriv(order, 0.0);
  for (int d = 1; d <= d_max; ++d)
    acc += 2.0 * autocorr_[d] *
           gaussian_kernel_deriv(order, static_cast<double>(d) * delta_ / h);
  return acc;
}

std::vector<double> BinnedSample::kde_on_bins(double eps) const {
  if (!(eps > 0.0)) throw std::invalid_argument("kde_on_bins: eps must be > 0");
  const int w = std::min(
      cells_ - 1, static_cast<int>(std::ceil(kKernelCutoff * eps / delta_)));
  std::vector<double> table(w + 1);
  for (int t = 0; t <= w; ++t)
    table[t] = gaussian_kernel_deriv(0, static_cast<double>(t) * delta_ / eps);
  std::vector<double> out(cells_, 0.0);
  for (int a = 0; a < cells_; ++a) {
    const int tlo = std::max(-w, -a), thi = std::min(w, cells_ - 1 - a);
    double acc = 0.0;
    for (int t = tlo; t <= thi; ++t)
      acc += weights_[a + t] * table[std::abs(t)];
    out[a] = acc / (eps * static_cast<double>(n_));
  }
  return out;
}

std::vector<double> BinnedSample::kde_at(std::span<const double> xs,
                                         double eps) const {
  const std::vector<double> grid = kde_on_bins(eps);
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double s = (xs[i] - lo_) / delta_;
    if (s <= 0.0) {
      out[i] = grid.front();
      continue;
    }
    if (s >= static_cast<double>(cells_ - 1)) {
      out[i] = grid.back();
      continue;
    }
    const auto a = static_cast<std::size_t>(s);
    const double f = s - static_cast<double>(a);
    out[i] = grid[a] + f * (grid[a + 1] - grid[a]);
  }
  return out;
}

double pair_kernel_sum_exact(std::span<const double> positions, int order,
                             double h) {
  const std::size_t n = positions.size();
  double off_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      off_diag += gaussian_kernel_deriv(order, (positions[i] - positions[j]) / h);
  return static_cast<double>(n) * gaussian_kernel_deriv(order, 0.0) +
         2.0 * off_diag;
}

namespace detail {

double pair_kernel_sum(std::span<const double> positions, int order, double h,
                       PairSumMode mode, const BinnedSample* binned) {
  if (mode == PairSumMode::Auto)
    mode = positions.size() <= kBinnedThreshold ? PairSumMode::Truncated
                                                : PairSumMode::Binned;
  switch (mode) {
    case PairSumMode::Exact:
      return pair_kernel_sum_exact(positions, order, h);
    case PairSumMode::Truncated:
      return pair_kernel_sum_truncated(positions, order, h);
    default:
      if (binned) return binned->pair_kernel_sum(order, h);
      return BinnedSample(positions).pair_kernel_sum(order, h);
  }
}

double functional_norm(std::span<const double> positions, int s, double h,
                       PairSumMode mode, const BinnedSample* binned) {
  if (s != 2 && s != 3)
    throw std::invalid_argument("functional_norm_estimate: s must be 2 or 3");
  if (!(h > 0.0))
    throw std::invalid_argument("functional_norm_estimate: h must be > 0");
  const double n = static_cast<double>(positions.size());
  const double sign = (s % 2 == 0) ? 1.0 : -1.0;
  return sign / (n * n * std::pow(h, 2 * s + 1)) *
         pair_kernel_sum(positions, 2 * s, h, mode, binned);
}

}  // namespace detail

double functional_norm_estimate(const Sample& sample, int s, double h,
                                PairSumMode mode) {
  return detail::functional_norm(sample.positions, s, h, mode, nullptr);
}

double empirical_std(std::span<const double> xs, bool robust) {
  if (xs.size() < 2)
    throw std::invalid_argument("empirical_std: need at least two points");
  double mean = 0.0;
  for (const double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  if (!robust) return sd;
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr =
      sorted_quantile(sorted, 0.75) - sorted_quantile(sorted, 0.25);
  return iqr > 0.0 ? std::min(sd, iqr / 1.349) : sd;
}

double silverman_bandwidth(const Sample& sample, bool robust) {
  const double sd = empirical_std(sample.positions, robust);
  if (!(sd > 0.0))
    throw std::runtime_error("silverman_bandwidth: degenerate sample");
  return std::pow(4.0 / (3.0 * static_cast<double>(sample.n())), 0.2) * sd;
}

std::pair<double, double> pilot_bandwidths(const Sample& sample, bool robust) {
  const double sd = empirical_std(sample.positions, robust);
  if (!(sd > 0.0))
    throw std::runtime_error("pilot_bandwidths: degenerate sample");
  const double n = static_cast<double>(sample.n());
  const double k4 = gaussian_kernel_deriv(4, 0.0);   //  3/sqrt(2 pi)
  const double k6 = gaussian_kernel_deriv(6, 0.0);   // -15/sqrt(2 pi)
  const double h1 =
      sd * std::pow(2.0 * k4 * 16.0 * kSqrtPi / (15.0 * n), 1.0 / 7.0);
  const double h2 =
      sd * std::pow(-2.0 * k6 * 32.0 * kSqrtPi / (105.0 * n), 1.0 / 9.0);
  return {h1, h2};
}

namespace {

struct PilotState {
  double h1, h2;
  double norm2, norm3;       // ||d2u^{h1}||^2, ||d3u^{h2}||^2
  double gamma_coefficient;  // gamma(eps) = coeff * eps^(5/7)
};

PilotState pilot_state(std::span<const double> positions, bool robust,
                       PairSumMode mode, const BinnedSample* binned) {
  Sample s{std::vector<double>(positions.begin(), positions.end())};
  auto [h1, h2] = pilot_bandwidths(s, robust);
  PilotState st;
  st.h1 = h1;
  st.h2 = h2;
  st.norm2 = detail::functional_norm(positions, 2, h1, mode, binned);
  st.norm3 = detail::functional_norm(positions, 3, h2, mode, binned);
  st.gamma_coefficient =
      (st.norm2 > 0.0 && st.norm3 > 0.0)
          ? std::pow(4.0 * kSqrtPi * gaussian_kernel_deriv(4, 0.0) * st.norm2 /
                         st.norm3,
                     1.0 / 7.0)
          : 0.0;
  return st;
}

}  // namespace

double gamma_of_epsilon(const Sample& sample, double epsilon, PairSumMode mode,
                        bool robust) {
  if (epsilon == 0.0) return 0.0;
  if (!(epsilon > 0.0))
    throw std::invalid_argument("gamma_of_epsilon: epsilon must be >= 0");
  const PilotState st = pilot_state(sample.positions, robust, mode, nullptr);
  if (st.gamma_coefficient <= 0.0)
    throw std::runtime_error(
        "gamma_of_epsilon: non-positive pilot functional estimate");
  return st.gamma_coefficient * std::pow(epsilon, 5.0 / 7.0);
}

double amise(double epsilon, std::size_t n, double curvature_norm) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("amise: epsilon must be > 0");
  return 0.25 * std::pow(epsilon, 4.0) * curvature_norm +
         1.0 / (2.0 * epsilon * static_cast<double>(n) * kSqrtPi);
}

BandwidthReport silverman_report(const Sample& sample, bool robust) {
  BandwidthReport r;
  r.epsilon = silverman_bandwidth(sample, robust);
  const double sd = empirical_std(sample.positions, robust);
  r.curvature_norm = 3.0 / (8.0 * kSqrtPi * std::pow(sd, 5.0));
  r.method = BandwidthMethod::Silverman;
  return r;
}

BandwidthReport solve_the_equation_bandwidth(const Sample& sample, double tol,
                                             int max_iter, PairSumMode mode,
                                             bool robust) {
  const double silv = silverman_bandwidth(sample, robust);
  PairSumMode resolved = mode;
  if (resolved == PairSumMode::Auto)
    resolved = sample.n() <= kBinnedThreshold ? PairSumMode::Truncated
                                              : PairSumMode::Binned;
  std::unique_ptr<BinnedSample> binned;
  if (resolved == PairSumMode::Binned)
    binned = std::make_unique<BinnedSample>(sample.positions);

  const PilotState st =
      pilot_state(sample.positions, robust, resolved, binned.get());

  BandwidthReport report;
  report.h1 = st.h1;
  report.h2 = st.h2;

  auto fallback = [&] {
    BandwidthReport r = silverman_report(sample, robust);
    r.h1 = st.h1;
    r.h2 = st.h2;
    return r;
  };
  if (st.gamma_coefficient <= 0.0) return fallback();

  const double n = static_cast<double>(sample.n());
  // curvature estimate at pilot bandwidth gamma(eps)
  auto curvature = [&](double eps) {
    const double g = st.gamma_coefficient * std::pow(eps, 5.0 / 7.0);
    return detail::functional_norm(sample.positions, 2, g, resolved,
                                   binned.get());
  };
  // g(eps) = eps (2 n sqrt(pi) ||d2u^{gamma(eps)}||^2)^(1/5) - 1; a
  // non-positive curvature estimate counts as g < 0 (eps too small).
  auto residual = [&](double eps) {
    const double c = curvature(eps);
    if (!(c > 0.0)) return -1.0;
    return eps * std::pow(2.0 * n * kSqrtPi * c, 0.2) - 1.0;
  };

  double lo = silv / 100.0, hi = silv * 100.0;
  if (!(residual(lo) < 0.0 && residual(hi) > 0.0)) {
    lo /= 100.0;
    hi *= 100.0;
    if (!(residual(lo) < 0.0 && residual(hi) > 0.0)) return fallback();
  }

  int iterations = 0;
  while (iterations < max_iter && hi - lo > 0.5 * tol * (lo + hi)) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) < 0.0 ? lo : hi) = mid;
    ++iterations;
  }
  report.epsilon = 0.5 * (lo + hi);
  report.curvature_norm = curvature(report.epsilon);
  report.iterations = iterations;
  report.method = BandwidthMethod::SolveTheEquation;
  return report;
}

}  // namespace pml

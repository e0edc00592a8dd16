#include "pml/particle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pml {

std::size_t ParticleConfig::steps() const {
  if (!(dt > 0.0)) throw std::invalid_argument("ParticleConfig: dt must be > 0");
  if (T < 0.0) throw std::invalid_argument("ParticleConfig: T must be >= 0");
  const double ratio = T / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 0.5 * std::abs(ratio) *
                                      std::numeric_limits<double>::epsilon() +
                                  1e-12)
    throw std::invalid_argument("ParticleConfig: T/dt must be an integer");
  return static_cast<std::size_t>(rounded);
}

std::vector<double> interaction_density(std::span<const double> positions,
                                        double eps, PairSumMode mode) {
  if (!(eps > 0.0))
    throw std::invalid_argument("interaction_density: eps must be > 0");
  const std::size_t n = positions.size();
  if (mode == PairSumMode::Auto)
    mode = n <= kBinnedThreshold ? PairSumMode::Truncated : PairSumMode::Binned;

  std::vector<double> out(n);
  switch (mode) {
    case PairSumMode::Exact:
      for (std::size_t i = 0; i < n; ++i)
        out[i] = kde_eval(positions, eps, positions[i]);
      return out;
    case PairSumMode::Binned: {
      const BinnedSample binned(positions);
      return binned.kde_at(positions, eps);
    }
    default: {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&positions](auto a, auto b) {
        return positions[a] < positions[b];
      });
      std::vector<double> sorted(n);
      for (std::size_t i = 0; i < n; ++i) sorted[i] = positions[order[i]];
      const double cut = kInteractionCutoff * eps;
      const double norm = 1.0 / (eps * static_cast<double>(n));
      std::size_t lo = 0;
      for (std::size_t i = 0; i < n; ++i) {
        while (sorted[i] - sorted[lo] > cut) ++lo;
        double acc = 0.0;
        for (std::size_t j = lo; j < n && sorted[j] - sorted[i] <= cut; ++j)
          acc += gaussian_kernel_deriv(0, (sorted[i] - sorted[j]) / eps);
        out[order[i]] = acc * norm;
      }
      return out;
    }
  }
}

namespace {

BandwidthReport select_bandwidth(const std::vector<double>& positions,
                                 const ParticleConfig& config) {
  const Sample sample{positions};
  if (config.bandwidth_method == BandwidthMethod::Silverman)
    return silverman_report(sample, config.robust_std);
  return solve_the_equation_bandwidth(sample, 1e-4, 60,
                                      config.interaction_mode,
                                      config.robust_std);
}

}  // namespace

ParticleEnsemble init_ensemble(const ParticleConfig& config) {
  if (config.n == 0)
    throw std::invalid_argument("init_ensemble: n must be >= 1");
  config.steps();  // validate T/dt
  ParticleEnsemble ens;
  const CounterRng rng(config.seed);
  ens.positions =
      density_sample(config.init, config.n, rng, rng_stream::kInitialSample);
  ens.bandwidth = select_bandwidth(ens.positions, config);
  return ens;
}

void euler_step(ParticleEnsemble& ens, const ParticleConfig& config) {
  const std::size_t n = ens.positions.size();
  if (ens.step > 0 && config.bandwidth_stride > 0 &&
      ens.step % config.bandwidth_stride == 0)
    ens.bandwidth = select_bandwidth(ens.positions, config);

  if (!ens.frozen) {
    const std::vector<double> density =
        interaction_density(ens.positions, ens.bandwidth.epsilon,
                            config.interaction_mode);
    if (config.beta.kind == BetaKind::Heaviside) {
      const double peak = *std::max_element(density.begin(), density.end());
      if (peak < config.beta.u_c - 0.05) ens.frozen = true;
    }
    if (!ens.frozen) {
      const CounterRng rng(config.seed);
      const std::uint64_t stream = rng_stream::kEulerBase + ens.step;
      const double sqrt_dt = std::sqrt(config.dt);
      for (std::size_t i = 0; i < n; ++i) {
        const double dw = sqrt_dt * rng.normal(stream, i);
        ens.positions[i] += phi_eval(config.beta, density[i]) * dw;
        if (!std::isfinite(ens.positions[i]))
          throw std::runtime_error("euler_step: particle position blew up");
      }
    }
  }
  ++ens.step;
  ens.time = config.dt * static_cast<double>(ens.step);
}

ParticleRunResult run_particles(
    const ParticleConfig& config,
    const std::function<void(const ParticleEnsemble&)>& on_step) {
  const std::size_t nt = config.steps();
  ParticleEnsemble ens = init_ensemble(config);

  // map requested times to nearest step indices
  std::vector<std::size_t> snap_steps{0, nt};
  for (const double t : config.snapshot_times) {
    if (t < -1e-12 || t > config.T + 1e-12)
      throw std::invalid_argument("run_particles: snapshot time outside [0,T]");
    const double s = std::clamp(std::round(t / config.dt), 0.0,
                                static_cast<double>(nt));
    snap_steps.push_back(static_cast<std::size_t>(s));
  }
  std::sort(snap_steps.begin(), snap_steps.end());
  snap_steps.erase(std::unique(snap_steps.begin(), snap_steps.end()),
                   snap_steps.end());

  ParticleRunResult result;
  auto capture = [&] {
    result.snapshots.push_back(
        {ens.time, ens.step, ens.positions, ens.bandwidth});
  };
  std::size_t next = 0;
  if (snap_steps[next] == 0) {
    capture();
    ++next;
  }
  for (std::size_t step = 0; step < nt; ++step) {
    euler_step(ens, config);
    ++result.steps_taken;
    if (on_step) on_step(ens);
    if (next < snap_steps.size() && snap_steps[next] == ens.step) {
      capture();
      ++next;
    }
  }
  return result;
}

GridField estimate_density(std::span<const double> positions, double eps,
                           const Grid1D& grid) {
  if (!(eps > 0.0))
    throw std::invalid_argument("estimate_density: eps must be > 0");
  std::vector<double> sorted(positions.begin(), positions.end());
  std::sort(sorted.begin(), sorted.end());
  const double cut = kKernelCutoff * eps;
  const double norm = 1.0 / (eps * static_cast<double>(sorted.size()));
  GridField field{grid, std::vector<double>(grid.nx, 0.0), 0.0};
  for (std::size_t i = 0; i < grid.nx; ++i) {
    const double x = grid.center(i);
    const auto first =
        std::lower_bound(sorted.begin(), sorted.end(), x - cut);
    double acc = 0.0;
    for (auto it = first; it != sorted.end() && *it <= x + cut; ++it)
      acc += gaussian_kernel_deriv(0, (x - *it) / eps);
    field.values[i] = acc * norm;
  }
  return field;
}

}  // namespace pml

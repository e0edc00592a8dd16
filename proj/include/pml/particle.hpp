#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pml/beta.hpp"
#include "pml/density.hpp"
#include "pml/grid.hpp"
#include "pml/kde.hpp"
#include "pml/rng.hpp"

namespace pml {

// Gaussian tail cut for the per-step interaction sums (relative tail mass
// below 1e-15); the slower 12-bandwidth cut of the kde module is kept for
// the bandwidth selector.
inline constexpr double kInteractionCutoff = 8.0;

struct ParticleConfig {
  std::size_t n = 0;
  double dt = 0.0;
  double T = 0.0;
  BetaSpec beta;
  DensitySpec init;
  std::uint64_t seed = 0;
  BandwidthMethod bandwidth_method = BandwidthMethod::SolveTheEquation;
  std::size_t bandwidth_stride = 1;  // refresh epsilon every this many steps
  std::vector<double> snapshot_times;
  PairSumMode interaction_mode = PairSumMode::Auto;
  bool robust_std = false;

  // T/dt as an exact integer; throws if it is not one (to 0.5 ulp).
  std::size_t steps() const;
};

struct ParticleEnsemble {
  std::vector<double> positions;
  double time = 0.0;
  std::size_t step = 0;
  BandwidthReport bandwidth;
  bool frozen = false;  // Heaviside absorption: no further motion
};

// (1/n) sum_j K_eps(X_i - X_j) at every particle site, diagonal included.
// Exact: plain double loop. Truncated: sorted sliding window, kernel cut at
// kInteractionCutoff bandwidths. Binned: linear-binned KDE interpolated at
// the sites. Auto: Truncated up to kBinnedThreshold particles, then Binned.
std::vector<double> interaction_density(std::span<const double> positions,
                                        double eps, PairSumMode mode);

// n i.i.d. draws from config.init with bandwidth selected on that sample.
ParticleEnsemble init_ensemble(const ParticleConfig& config);

// One explicit Euler step: bandwidth refreshed per bandwidth_stride, the
// interaction KDE evaluated on the pre-step positions for all particles,
// then X_i += Phi(u^{eps,n}(X_i)) * dW_i with dW_i ~ N(0, dt) drawn from
// the counter stream keyed on (seed, step, particle index).
void euler_step(ParticleEnsemble& ens, const ParticleConfig& config);

struct ParticleSnapshot {
  double time = 0.0;
  std::size_t step = 0;
  std::vector<double> positions;
  BandwidthReport bandwidth;
};

struct ParticleRunResult {
  std::vector<ParticleSnapshot> snapshots;
  std::size_t steps_taken = 0;
};

// Advance N = T/dt steps, capturing snapshots at the grid times nearest the
// requested snapshot_times (t=0 and t=T always captured). on_step, when
// set, is called after every step with the current ensemble.
ParticleRunResult run_particles(
    const ParticleConfig& config,
    const std::function<void(const ParticleEnsemble&)>& on_step = nullptr);

// KDE of the ensemble at the cell centers of `grid`.
GridField estimate_density(std::span<const double> positions, double eps,
                           const Grid1D& grid);

}  // namespace pml

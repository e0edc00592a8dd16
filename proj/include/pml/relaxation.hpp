#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pml/beta.hpp"
#include "pml/density.hpp"
#include "pml/eno.hpp"
#include "pml/grid.hpp"

namespace pml {

// Butcher tableau of an explicit Runge-Kutta scheme.
struct RkTableau {
  std::size_t stages = 1;
  std::vector<std::vector<double>> a;  // strictly lower triangular
  std::vector<double> b;               // sums to 1

  static RkTableau forward_euler();
  // 3-stage third-order SSP tableau: a21=1, a31=a32=1/4, b=(1/6,1/6,2/3).
  static RkTableau ssp3();
  static RkTableau rk4();
};

// Godunov flux of the linear advection flux f(xi) = phi xi, phi > 0:
// always the upwind value phi * alpha.
double godunov_flux(double alpha, double gamma, double phi);

// Parabolic stability bound dt = c_stab * dx^2.
double cfl_dt(double dx, double c_stab);

// Semi-discrete right-hand side du_i/dt of the relaxed scheme: with
// w = beta(u) and v = -1/2 dw/dx, the interface flux
//   H_{i+1/2} = 1/2 (v^- + phi w^- + v^+ - phi w^+)_{i+1/2}
// gives du_i/dt = -(H_{i+1/2} - H_{i-1/2}) / dx. Interface w values are
// beta of the ENO-reconstructed u; interface v values come from a
// centered-stencil derivative reconstruction of the cell values of w.
// ua, ub are Dirichlet boundary values held constant in the ghost layer.
std::vector<double> spatial_rhs(const GridField& field, const BetaSpec& beta,
                                const EnoTables& tables, double phi,
                                double ua = 0.0, double ub = 0.0);

// One explicit RK step of size dt on the semi-discrete system.
GridField rk_step(const GridField& field, double dt, const RkTableau& tableau,
                  const BetaSpec& beta, const EnoTables& tables, double phi,
                  double ua = 0.0, double ub = 0.0);

struct RelaxationConfig {
  Grid1D grid;
  BetaSpec beta;
  double T = 0.0;
  int k = 3;
  RkTableau tableau = RkTableau::ssp3();
  double phi = 1.0;
  double c_stab = 0.01;
  double ua = 0.0;
  double ub = 0.0;
  // Additional times at which to record the field; 0 and T are always kept.
  std::vector<double> snapshot_times;
};

struct RelaxationResult {
  std::vector<GridField> snapshots;  // sorted by time; first 0, last T
  bool blew_up = false;              // true -> snapshots end at the last good step
  std::size_t steps_taken = 0;
  double dt = 0.0;
};

// Advance the projected initial condition (init at the cell centers) to
// time T with dt = T/N_t <= cfl_dt(dx, c_stab).
RelaxationResult run_relaxation(const RelaxationConfig& config,
                                const DensitySpec& init);
// Same, from an explicit initial field.
RelaxationResult run_relaxation(const RelaxationConfig& config,
                                std::vector<double> initial_values);

}  // namespace pml

#include "pml/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pml {

RkTableau RkTableau::forward_euler() {
  RkTableau t;
  t.stages = 1;
  t.a = {{0.0}};
  t.b = {1.0};
  return t;
}

RkTableau RkTableau::ssp3() {
  RkTableau t;
  t.stages = 3;
  t.a = {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.25, 0.25, 0.0}};
  t.b = {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0};
  return t;
}

RkTableau RkTableau::rk4() {
  RkTableau t;
  t.stages = 4;
  t.a = {{0.0, 0.0, 0.0, 0.0},
         {0.5, 0.0, 0.0, 0.0},
         {0.0, 0.5, 0.0, 0.0},
         {0.0, 0.0, 1.0, 0.0}};
  t.b = {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};
  return t;
}

double godunov_flux(double alpha, double gamma, double phi) {
  if (!(phi > 0.0)) throw std::invalid_argument("godunov_flux: phi must be > 0");
  (void)gamma;  // upwind value for a linear flux with positive speed
  return phi * alpha;
}

double cfl_dt(double dx, double c_stab) {
  if (!(dx > 0.0) || !(c_stab > 0.0))
    throw std::invalid_argument("cfl_dt: dx and c_stab must be > 0");
  return c_stab * dx * dx;
}

std::vector<double> spatial_rhs(const GridField& field, const BetaSpec& beta,
                                const EnoTables& tables, double phi,
                                double ua, double ub) {
  const std::size_t nx = field.values.size();
  if (nx != field.grid.nx)
    throw std::invalid_argument("spatial_rhs: field/grid size mismatch");
  const int k = tables.k;
  const double dx = field.grid.dx();

  const std::vector<double> ext_u =
      extend_dirichlet(field.values, k, ua, ub);
  std::vector<double> ext_w(ext_u.size());
  for (std::size_t i = 0; i < ext_u.size(); ++i)
    ext_w[i] = beta_eval(beta, ext_u[i]);

  const InterfaceRecon u_rec = reconstruct(ext_u, nx, tables);
  const DerivRecon dw = reconstruct_derivative(ext_w, nx, tables, true);

  std::vector<double> flux(nx + 1);
  for (std::size_t f = 0; f <= nx; ++f) {
    const double wm = beta_eval(beta, u_rec.minus[f]);
    const double wp = beta_eval(beta, u_rec.plus[f]);
    const double vm = -0.5 * dw.minus[f];
    const double vp = -0.5 * dw.plus[f];
    flux[f] = 0.5 * (vm + godunov_flux(wm, wp, phi) + vp -
                     godunov_flux(wp, wm, phi));
    if (!std::isfinite(flux[f]))
      throw std::runtime_error("spatial_rhs: non-finite flux");
  }
  std::vector<double> rhs(nx);
  for (std::size_t i = 0; i < nx; ++i) rhs[i] = -(flux[i + 1] - flux[i]) / dx;
  return rhs;
}

GridField rk_step(const GridField& field, double dt, const RkTableau& tableau,
                  const BetaSpec& beta, const EnoTables& tables, double phi,
                  double ua, double ub) {
  const std::size_t nx = field.values.size();
  std::vector<std::vector<double>> stage_rhs;
  stage_rhs.reserve(tableau.stages);
  GridField stage = field;
  for (std::size_t s = 0; s < tableau.stages; ++s) {
    stage.values = field.values;
    for (std::size_t l = 0; l < s; ++l) {
      const double a = tableau.a[s][l];
      if (a == 0.0) continue;
      for (std::size_t i = 0; i < nx; ++i)
        stage.values[i] += dt * a * stage_rhs[l][i];
    }
    stage_rhs.push_back(spatial_rhs(stage, beta, tables, phi, ua, ub));
  }
  GridField next = field;
  for (std::size_t s = 0; s < tableau.stages; ++s) {
    const double b = tableau.b[s];
    for (std::size_t i = 0; i < nx; ++i)
      next.values[i] += dt * b * stage_rhs[s][i];
  }
  next.time = field.time + dt;
  return next;
}

namespace {

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(),
                     [](double x) { return std::isfinite(x); });
}

}  // namespace

RelaxationResult run_relaxation(const RelaxationConfig& config,
                                std::vector<double> initial_values) {
  if (initial_values.size() != config.grid.nx)
    throw std::invalid_argument("run_relaxation: initial size mismatch");
  if (config.T < 0.0) throw std::invalid_argument("run_relaxation: T < 0");

  const EnoTables tables = eno_tables(config.k, config.grid.dx());

  GridField field{config.grid, std::move(initial_values), 0.0};
  RelaxationResult result;
  result.snapshots.push_back(field);
  if (config.T == 0.0) return result;

  const double dt_max = cfl_dt(config.grid.dx(), config.c_stab);
  const auto nt = static_cast<std::size_t>(std::ceil(config.T / dt_max - 1e-12));
  const double dt = config.T / static_cast<double>(nt);
  result.dt = dt;

  std::vector<double> wanted(config.snapshot_times);
  std::sort(wanted.begin(), wanted.end());
  std::size_t next_snap = 0;
  while (next_snap < wanted.size() && wanted[next_snap] <= 0.0) ++next_snap;

  for (std::size_t step = 0; step < nt; ++step) {
    GridField next;
    try {
      next = rk_step(field, dt, config.tableau, config.beta, tables,
                     config.phi, config.ua, config.ub);
    } catch (const std::runtime_error&) {
      result.blew_up = true;
      break;
    }
    if (!all_finite(next.values)) {
      result.blew_up = true;
      break;
    }
    field = std::move(next);
    field.time = dt * static_cast<double>(step + 1);
    ++result.steps_taken;
    while (next_snap < wanted.size() &&
           wanted[next_snap] <= field.time + 1e-12) {
      if (wanted[next_snap] < config.T - 1e-12)
        result.snapshots.push_back(field);
      ++next_snap;
    }
  }
  if (field.time > result.snapshots.back().time + 1e-15)
    result.snapshots.push_back(field);
  return result;
}

RelaxationResult run_relaxation(const RelaxationConfig& config,
                                const DensitySpec& init) {
  std::vector<double> values(config.grid.nx);
  for (std::size_t i = 0; i < config.grid.nx; ++i)
    values[i] = density_eval(init, config.grid.center(i));
  return run_relaxation(config, std::move(values));
}

}  // namespace pml

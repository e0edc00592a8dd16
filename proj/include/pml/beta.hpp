#pragma once

#include <functional>
#include <string>

namespace pml {

enum class BetaKind { PowerLaw, Heaviside, Tabulated };

enum class Degeneracy { Degenerate, NonDegenerate, Neither };

// The nonlinearity beta of the PDE  du/dt = 1/2 d^2/dx^2 beta(u)  together
// with the derived diffusion coefficient Phi(u) = sqrt(beta(u)/u).
//
// Phi is multivalued at u = 0 (and, for the Heaviside kind, at u = u_c);
// phi_at_zero and phi_at_jump pin the single values the solvers use.
struct BetaSpec {
  BetaKind kind = BetaKind::PowerLaw;
  double m = 3.0;    // PowerLaw exponent, m > 1
  double u_c = 0.0;  // Heaviside critical threshold, u_c > 0
  double phi_at_zero = 0.0;
  double phi_at_jump = 1.0;

  // Tabulated kind: arbitrary nondecreasing beta with beta(0) = 0, plus the
  // liminf/limsup of Phi as u -> 0+ (needed by classify()).
  std::function<double(double)> tabulated_beta;
  double phi_liminf_at_zero = 0.0;
  double phi_limsup_at_zero = 0.0;
  std::string label;

  static BetaSpec power_law(double m);
  static BetaSpec heaviside(double u_c, double phi_at_jump = 1.0);
  static BetaSpec tabulated(std::function<double(double)> beta,
                            double phi_liminf_at_zero,
                            double phi_limsup_at_zero,
                            std::string label = "tabulated");
};

double beta_eval(const BetaSpec& spec, double u);

// Phi(u) for u >= 0; throws std::domain_error on negative u.
double phi_eval(const BetaSpec& spec, double u);

Degeneracy classify(const BetaSpec& spec);

}  // namespace pml

#include "pml/beta.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace pml {

BetaSpec BetaSpec::power_law(double m) {
  if (!(m > 1.0)) throw std::invalid_argument("power_law: requires m > 1");
  BetaSpec s;
  s.kind = BetaKind::PowerLaw;
  s.m = m;
  s.phi_at_zero = 0.0;  // |u|^((m-1)/2) -> 0
  s.label = "powerlaw";
  return s;
}

BetaSpec BetaSpec::heaviside(double u_c, double phi_at_jump) {
  if (!(u_c > 0.0)) throw std::invalid_argument("heaviside: requires u_c > 0");
  BetaSpec s;
  s.kind = BetaKind::Heaviside;
  s.u_c = u_c;
  s.phi_at_zero = 0.0;
  s.phi_at_jump = phi_at_jump;
  s.label = "heaviside";
  return s;
}

BetaSpec BetaSpec::tabulated(std::function<double(double)> beta,
                             double phi_liminf_at_zero,
                             double phi_limsup_at_zero, std::string label) {
  BetaSpec s;
  s.kind = BetaKind::Tabulated;
  s.tabulated_beta = std::move(beta);
  s.phi_liminf_at_zero = phi_liminf_at_zero;
  s.phi_limsup_at_zero = phi_limsup_at_zero;
  s.phi_at_zero = phi_liminf_at_zero;
  s.label = std::move(label);
  return s;
}

double beta_eval(const BetaSpec& spec, double u) {
  switch (spec.kind) {
    case BetaKind::PowerLaw:
      // odd symmetrization: u |u|^(m-1)
      return u * std::pow(std::abs(u), spec.m - 1.0);
    case BetaKind::Heaviside:
      // H(u - u_c) u, right-continuous at the jump: beta(u_c) = u_c
      return u >= spec.u_c ? u : 0.0;
    case BetaKind::Tabulated:
      return spec.tabulated_beta(u);
  }
  return 0.0;
}

double phi_eval(const BetaSpec& spec, double u) {
  if (u < 0.0) throw std::domain_error("phi_eval: negative density");
  if (u == 0.0) return spec.phi_at_zero;
  if (spec.kind == BetaKind::Heaviside && u == spec.u_c)
    return spec.phi_at_jump;
  return std::sqrt(beta_eval(spec, u) / u);
}

Degeneracy classify(const BetaSpec& spec) {
  switch (spec.kind) {
    case BetaKind::PowerLaw:
    case BetaKind::Heaviside:
      return Degeneracy::Degenerate;
    case BetaKind::Tabulated:
      if (spec.phi_limsup_at_zero == 0.0) return Degeneracy::Degenerate;
      if (spec.phi_liminf_at_zero > 0.0) return Degeneracy::NonDegenerate;
      return Degeneracy::Neither;
  }
  return Degeneracy::Neither;
}

}  // namespace pml

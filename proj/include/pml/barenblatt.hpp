#pragma once

namespace pml {

// gamma_m = integral over [-pi/2, pi/2] of cos(x)^((m+1)/(m-1)),
// computed by adaptive quadrature to 1e-12 (equals pi/2 for m = 3).
double barenblatt_gamma_m(double m);

// Self-similar Barenblatt-Pattle density
//   U(t,x) = t^(-b) (C - k x^2 t^(-2b))_+^(1/(m-1)),
//   b = 1/(m+1),  k = (m-1)/(2(m+1)m),  C = (sqrt(k)/gamma_m)^(2(m-1)/(m+1)).
// Throws std::domain_error for t <= 0 or m <= 1.
double barenblatt(double m, double t, double x);

// Time-translated exact solution for m = 3:
//   v(t,x) = (t+1)^(-1/4) sqrt( 1/(pi sqrt(3)) - x^2/(12 sqrt(t+1)) )
// inside the support (radicand >= 0), 0 outside; equals barenblatt(3, t+1, x).
double barenblatt_translated(double t, double x);

// Half-width of the support of barenblatt_translated(t, .).
double barenblatt_translated_support(double t);

}  // namespace pml

#pragma once

namespace flatcal {

// Canonical bump exp(-1/(1-u^2)) on (-1,1), extended by zero. Derivatives are
// exact: B^(n)(u) = P_n(u) / (1-u^2)^(2n) * B(u) with P_n from the recurrence
// P_{n+1} = (1-u^2)^2 P_n' + 4nu(1-u^2) P_n - 2u P_n.
double bump_eval(double u);
double bump_deriv(int n, double u);

// integral of bump_eval over [-1,1]
double bump_mass();

// Bump rescaled to support [-halfwidth, halfwidth] and normalized to unit
// integral. deriv(n,.) is the n-th derivative of the normalized profile.
struct ScaledBump {
  double halfwidth = 1.0;
  double inv_norm = 1.0;
  static ScaledBump make(double halfwidth);
  double eval(double t) const;
  double deriv(int n, double t) const;
};

}  // namespace flatcal

#pragma once

#include "betheforge/types.hpp"

namespace betheforge {

// Two-parameter kernel family. The pair (hbar, r) selects one member of the
// trigonometric function family G, Gamma, gamma, gamma-hat, kappa-hat, K;
// hbar == 0 selects the rational (hbar -> 0) column with e_r, phi_r instead.
//
// Degenerate members (r = 0 and r = pi/hbar) have their own closed forms, so
// the regime is decided once at construction and never by tolerance checks
// later.  Spin-derived parameters enter through from_doubled(), where both
// pi/hbar and r are exact integers.
enum class KernelRegime { generic, r_zero, r_max, hbar_zero };

struct KernelParams {
  double hbar = 1.0;
  double r = 1.0;
  KernelRegime regime = KernelRegime::generic;

  /// hbar > 0, 0 <= r <= pi/hbar.  r == 0 and r == pi/hbar (exact double
  /// comparison) select the degenerate regimes.
  static KernelParams generic_params(double hbar, double r);

  /// Spin-derived parameters: hbar = pi/gap_doubled, index r integer.
  /// gap_doubled == 0 encodes the hbar -> 0 family (the "infinite gap" above
  /// the top sea).
  static KernelParams from_doubled(int gap_doubled, int r_index);

  /// The hbar -> 0 column of the function table, r >= 0.
  static KernelParams hbar_limit(double r);
};

struct EPhiResult {
  cplx e_r;            // (lambda + ir/2)/(lambda - ir/2)
  double phi;          // 2 arctan(2 lambda / r)
  double phi_prime;    // 4r / (4 lambda^2 + r^2)
};

/// Rational-column elementary functions; requires r > 0.
EPhiResult eval_e_phi(double r, double lambda);

struct TrigFamilyResult {
  cplx G;
  double Gamma;
  double gamma;
  bool is_dirac = false;  // r = 0: gamma is 2*pi*delta, never sampled
};

/// G, Gamma, gamma at the given parameters.  All four regimes supported; the
/// hbar -> 0 family forwards to eval_e_phi (G = -e_r(-lambda), Gamma = phi_r,
/// gamma = phi_r').
TrigFamilyResult eval_trig_family(const KernelParams& p, double lambda);

/// Fourier transform gamma-hat.  Evaluated in exponential form, stable for
/// large |momentum|; the removable singularity at momentum = 0 returns
/// 1 - r*hbar/pi.
double eval_gamma_hat(const KernelParams& p, double momentum);

/// kappa-hat = gamma-hat / (2 cosh(momentum/2)).
double eval_kappa_hat(const KernelParams& p, double momentum);

/// A kernel value together with the route that produced it.  NaN is always
/// an error, never a return.
struct EvaluatedFunction {
  cplx value;
  enum class Method { closed_form, quadrature, series } method;
};

/// K evaluated through its closed forms where they exist (r = 0, r = pi/hbar,
/// hbar = 0) and by oscillatory quadrature otherwise.  |K| = 1 for real
/// lambda in every regime.
cplx eval_K(const KernelParams& p, double lambda);

/// Same value, tagged with the evaluation route.
EvaluatedFunction eval_K_traced(const KernelParams& p, double lambda);

/// The real phase theta with K = exp(-i theta); odd in lambda, continuous,
/// theta(+inf) = (pi - hbar r)/2.  Used by the scattering phase integrals.
double eval_K_phase(const KernelParams& p, double lambda);

/// Quadrature route for K in any regime, kept independent of the closed
/// forms so the two can be cross-checked.
cplx eval_K_quadrature(const KernelParams& p, double lambda);
double eval_K_phase_quadrature(const KernelParams& p, double lambda);

/// Gamma function on the right half plane (Lanczos); used for the
/// Gamma-ratio form of K at hbar = 0.
cplx complex_lgamma(cplx z);

/// Euler digamma.
double digamma(double x);

/// Extended backscattering phase 2 arctan(tanh(hbar lambda)/tan(hbar r/2)),
/// valid for 0 < hbar r < 2 pi (the auxiliary XXZ-type Bethe kernels need
/// indices beyond pi/hbar).  r = pi/hbar gives 0.  hbar == 0 gives phi_r.
double Gamma_extended(double hbar, double r, double lambda);

/// lambda-derivative of Gamma_extended.
double gamma_extended(double hbar, double r, double lambda);

}  // namespace betheforge

#include "betheforge/special_functions.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/digamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace betheforge {

namespace {

constexpr double tiny_p = 1e-3;  // series window around the removable p = 0

double pi_over_hbar(const KernelParams& p) { return pi / p.hbar; }

// sin(p*lambda)/p with the p -> 0 limit handled by series.
double sinc_scaled(double p, double lambda) {
  double x = p * lambda;
  if (std::abs(x) < 1e-4) {
    double x2 = x * x;
    return lambda * (1.0 - x2 / 6.0 * (1.0 - x2 / 20.0));
  }
  return std::sin(x) / p;
}

}  // namespace

KernelParams KernelParams::generic_params(double hbar, double r) {
  if (!std::isfinite(hbar) || !std::isfinite(r))
    throw domain_error("KernelParams: hbar and r must be finite");
  if (hbar < 0.0) throw domain_error("KernelParams: hbar must be >= 0");
  if (hbar == 0.0) return hbar_limit(r);
  if (r < 0.0 || r > pi / hbar)
    throw domain_error("KernelParams: need 0 <= r <= pi/hbar");
  KernelParams p;
  p.hbar = hbar;
  p.r = r;
  if (r == 0.0)
    p.regime = KernelRegime::r_zero;
  else if (r == pi / hbar)
    p.regime = KernelRegime::r_max;
  else
    p.regime = KernelRegime::generic;
  return p;
}

KernelParams KernelParams::from_doubled(int gap_doubled, int r_index) {
  if (gap_doubled < 0) throw domain_error("KernelParams: gap_doubled < 0");
  if (gap_doubled == 0) return hbar_limit(static_cast<double>(r_index));
  if (r_index < 0 || r_index > gap_doubled)
    throw domain_error("KernelParams: index outside [0, gap]");
  KernelParams p;
  p.hbar = pi / gap_doubled;
  p.r = r_index;
  if (r_index == 0)
    p.regime = KernelRegime::r_zero;
  else if (r_index == gap_doubled)
    p.regime = KernelRegime::r_max;
  else
    p.regime = KernelRegime::generic;
  return p;
}

KernelParams KernelParams::hbar_limit(double r) {
  if (!(r >= 0.0) || !std::isfinite(r))
    throw domain_error("KernelParams: hbar limit needs finite r >= 0");
  KernelParams p;
  p.hbar = 0.0;
  p.r = r;
  p.regime = (r == 0.0) ? KernelRegime::r_zero : KernelRegime::hbar_zero;
  return p;
}

EPhiResult eval_e_phi(double r, double lambda) {
  if (!(r > 0.0)) throw domain_error("eval_e_phi: r must be positive");
  EPhiResult out;
  out.e_r = cplx(lambda, 0.5 * r) / cplx(lambda, -0.5 * r);
  out.phi = 2.0 * std::atan(2.0 * lambda / r);
  out.phi_prime = 4.0 * r / (4.0 * lambda * lambda + r * r);
  return out;
}

TrigFamilyResult eval_trig_family(const KernelParams& p, double lambda) {
  TrigFamilyResult out;
  switch (p.regime) {
    case KernelRegime::r_zero:
      out.G = -1.0;
      out.Gamma = 0.0;
      out.gamma = 0.0;  // the distributional member; consumers branch on is_dirac
      out.is_dirac = true;
      return out;
    case KernelRegime::r_max:
      out.G = 1.0;
      out.Gamma = 0.0;
      out.gamma = 0.0;
      return out;
    case KernelRegime::hbar_zero: {
      EPhiResult e = eval_e_phi(p.r, lambda);
      out.G = -(cplx(-lambda, 0.5 * p.r) / cplx(-lambda, -0.5 * p.r));
      out.Gamma = e.phi;
      out.gamma = e.phi_prime;
      return out;
    }
    case KernelRegime::generic:
      break;
  }
  const double h = p.hbar, r = p.r;
  double x = h * lambda;
  if (std::abs(x) > 350.0) {
    // asymptotic value exp(-sign(lambda) i (pi - hbar r))
    double s = (lambda > 0) ? 1.0 : -1.0;
    out.G = std::exp(cplx(0.0, -s * (pi - h * r)));
  } else {
    cplx num = std::sinh(cplx(-x, -0.5 * h * r));
    cplx den = std::sinh(cplx(x, -0.5 * h * r));
    out.G = num / den;
  }
  out.Gamma = 2.0 * std::atan(std::tanh(x) / std::tan(0.5 * h * r));
  double c2 = (std::abs(x) > 350.0) ? std::numeric_limits<double>::infinity()
                                    : std::cosh(2.0 * x);
  out.gamma = std::isinf(c2) ? 0.0 : 2.0 * h * std::sin(h * r) / (c2 - std::cos(h * r));
  return out;
}

double eval_gamma_hat(const KernelParams& p, double momentum) {
  double t = std::abs(momentum);
  switch (p.regime) {
    case KernelRegime::r_zero:
      return 1.0;
    case KernelRegime::r_max:
      return 0.0;
    case KernelRegime::hbar_zero:
      return std::exp(-0.5 * p.r * t);
    case KernelRegime::generic:
      break;
  }
  const double g = pi_over_hbar(p), r = p.r;
  if (t == 0.0) return (g - r) / g;
  // sinh((t/2)(g-r))/sinh(t g/2) in exponential form: no overflow for large t.
  double a = -std::expm1(-t * (g - r));
  double b = -std::expm1(-t * g);
  return std::exp(-0.5 * r * t) * a / b;
}

double eval_kappa_hat(const KernelParams& p, double momentum) {
  return eval_gamma_hat(p, momentum) / (2.0 * std::cosh(0.5 * momentum));
}

double eval_K_phase_quadrature(const KernelParams& p, double lambda) {
  if (p.regime == KernelRegime::r_max) return 0.0;
  if (lambda == 0.0) return 0.0;
  // theta(lambda) = int_0^inf gamma_hat(p) sin(p lambda) / (p cosh(p/2)) dp.
  // Envelope decays like exp(-(r+1) p / 2).
  double rate = 0.5 * (p.r + 1.0);
  double p_max = std::min(400.0, 30.0 + 37.0 / std::min(rate, 1.0) + 37.0);
  auto f = [&](double q) {
    if (q < tiny_p) {
      double gh = eval_gamma_hat(p, q);
      return sinc_scaled(q, lambda) * gh / std::cosh(0.5 * q);
    }
    return eval_gamma_hat(p, q) * std::sin(q * lambda) /
           (q * std::cosh(0.5 * q));
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double err = 0.0;
  double val = GK::integrate(f, 0.0, p_max, 15, 1e-13, &err);
  if (!(std::isfinite(val)) || err > 1e-8)
    throw numeric_error("eval_K: quadrature failed (err=" + std::to_string(err) + ")");
  return val;
}

cplx eval_K_quadrature(const KernelParams& p, double lambda) {
  double theta = eval_K_phase_quadrature(p, lambda);
  return std::exp(cplx(0.0, -theta));
}

cplx complex_lgamma(cplx z) {
  // Lanczos, g = 7, 9 coefficients.
  static const double coef[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,       -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // reflection: lgamma(z) = log(pi/sin(pi z)) - lgamma(1-z)
    return std::log(pi / std::sin(pi * z)) - complex_lgamma(1.0 - z);
  }
  z -= 1.0;
  cplx x = coef[0];
  for (int i = 1; i < 9; ++i) x += coef[i] / (z + static_cast<double>(i));
  cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

double digamma(double x) { return boost::math::digamma(x); }

namespace {

// Continuous phase of the hbar -> 0 closed form: the Gamma-ratio collapses to
// exp(-2i (Im lgamma(a) - Im lgamma(b))) with a, b in the right half plane.
double K_phase_hbar_zero(double r, double lambda) {
  cplx a(0.25 * (r + 3.0), 0.5 * lambda);
  cplx b(0.25 * (r + 1.0), 0.5 * lambda);
  return 2.0 * (complex_lgamma(a).imag() - complex_lgamma(b).imag());
}

// Phase of K_0 = -i coth((pi/2)(lambda - i/2)): the Gudermannian gd(pi lambda).
double K_phase_r_zero(double lambda) {
  return 2.0 * std::atan(std::tanh(0.5 * pi * lambda));
}

}  // namespace

double eval_K_phase(const KernelParams& p, double lambda) {
  switch (p.regime) {
    case KernelRegime::r_max:
      return 0.0;
    case KernelRegime::r_zero:
      return K_phase_r_zero(lambda);
    case KernelRegime::hbar_zero:
      return K_phase_hbar_zero(p.r, lambda);
    case KernelRegime::generic:
      return eval_K_phase_quadrature(p, lambda);
  }
  return 0.0;
}

cplx eval_K(const KernelParams& p, double lambda) {
  return std::exp(cplx(0.0, -eval_K_phase(p, lambda)));
}

EvaluatedFunction eval_K_traced(const KernelParams& p, double lambda) {
  EvaluatedFunction out;
  out.value = eval_K(p, lambda);
  if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag()))
    throw numeric_error("eval_K: non-finite value");
  switch (p.regime) {
    case KernelRegime::generic:
      out.method = (std::abs(lambda) == 0.0) ? EvaluatedFunction::Method::series
                                             : EvaluatedFunction::Method::quadrature;
      break;
    default:
      out.method = EvaluatedFunction::Method::closed_form;
      break;
  }
  return out;
}

double Gamma_extended(double hbar, double r, double lambda) {
  if (hbar == 0.0) {
    if (r == 0.0) return 0.0;
    return 2.0 * std::atan(2.0 * lambda / r);
  }
  if (r == 0.0) return 0.0;
  double half = 0.5 * hbar * r;
  if (!(half > 0.0 && half < pi))
    throw domain_error("Gamma_extended: need 0 <= hbar r < 2 pi");
  double t = std::tan(half);
  if (!std::isfinite(t) || std::abs(t) > 1e150) return 0.0;  // r = pi/hbar
  return 2.0 * std::atan(std::tanh(hbar * lambda) / t);
}

double gamma_extended(double hbar, double r, double lambda) {
  if (hbar == 0.0) {
    if (r == 0.0) return 0.0;
    return 4.0 * r / (4.0 * lambda * lambda + r * r);
  }
  if (r == 0.0) return 0.0;
  double half = 0.5 * hbar * r;
  if (!(half > 0.0 && half < pi))
    throw domain_error("gamma_extended: need 0 <= hbar r < 2 pi");
  double x = 2.0 * hbar * lambda;
  if (std::abs(x) > 700.0) return 0.0;
  return 2.0 * hbar * std::sin(hbar * r) / (std::cosh(x) - std::cos(hbar * r));
}

}  // namespace betheforge

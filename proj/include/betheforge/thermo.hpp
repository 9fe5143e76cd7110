#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "betheforge/chain.hpp"
#include "betheforge/special_functions.hpp"
#include "betheforge/types.hpp"

namespace betheforge {

/// Uniformly sampled functions of the rapidity, one channel per sea spin.
/// N must be a power of two (the transform route pairs it with an FFT grid).
struct DensityGrid {
  double lambda_min = -24.0;
  double lambda_max = 24.0;
  int N = 4096;
  std::map<int, Eigen::VectorXd> values;  // doubled sea spin -> samples

  double dx() const { return (lambda_max - lambda_min) / N; }
  double lambda(int k) const { return lambda_min + k * dx(); }
};

void validate_grid(const DensityGrid& grid);

/// Excited-state descriptor: hole rapidities per sea and new-string centers
/// per gap spin.  Feasibility bookkeeping (evenness, ledger positivity) lives
/// in the rsos module; the fields here are the raw rapidity data.
struct ExcitationContext {
  std::map<int, std::vector<double>> holes;        // doubled sea spin -> rapidities
  std::map<int, std::vector<double>> new_strings;  // doubled gap spin -> centers

  int hole_count(int s2) const;
  std::map<int, int> hole_counts(const ChainSpec& spec) const;  // every sea, zero-filled
};

/// sigma_s^(0)(lambda) = rho_s / (2 cosh(pi lambda)).
double vacuum_density(const ChainSpec& spec, int s2, double lambda);

enum class DensityRoute { transform, dense };

/// Solves the coupled vacuum integral equations on the grid window.  The
/// transform route divides in Fourier space using the analytic kernel
/// transforms; the dense route discretizes the convolution directly and
/// solves one linear system.  Both must reproduce vacuum_density.
DensityGrid solve_vacuum_integral(const ChainSpec& spec, double window, int N,
                                  DensityRoute route = DensityRoute::transform);

struct VacuumEnergy {
  double closed_form;  // digamma expression
  double numeric;      // Plancherel quadrature
};

VacuumEnergy vacuum_energy(const ChainSpec& spec, int s2);

struct VacuumMomentum {
  Rational coefficient;  // p_0 = pi * coefficient before reduction
  double reduced;        // in [0, 2 pi / L0)
};

VacuumMomentum vacuum_momentum(const ChainSpec& spec);

/// kappa_r^(hbar)(lambda): inverse transform of kappa-hat, by quadrature.
double kappa_kernel(const KernelParams& p, double lambda);

struct CorrectionValue {
  double r;  // smooth part of the hole correction (Dirac masses excluded)
  double c;  // new-string polarization
};

/// One kernel of the sea-j density correction: kappa-type for holes
/// (is_string = false), gamma-type for new strings (is_string = true).
struct CorrectionKernelTerm {
  KernelParams params;
  double center;
  bool is_string;
};

std::vector<CorrectionKernelTerm> correction_kernel_terms(const ChainSpec& spec,
                                                          const ExcitationContext& ctx, int j);

/// Smooth parts of the order-1/L density corrections for sea j (1-based).
/// The Dirac terms are point masses of weight -1 at the sea-j hole
/// rapidities; integrals must add them separately (see hole_point_masses).
CorrectionValue excited_corrections(const ChainSpec& spec, const ExcitationContext& ctx,
                                    double lambda, int j);

/// Centers of the Dirac masses carried by the sea-j correction (weight -1 each).
std::vector<double> hole_point_masses(const ExcitationContext& ctx, const ChainSpec& spec, int j);

/// Analytic value of int (r + c) d lambda including the point masses,
/// from the kernel transforms at momentum zero.  Equals -mu_j for feasible
/// contexts.
double corrections_integral(const ChainSpec& spec, const ExcitationContext& ctx, int j);

struct DispersionResult {
  double dE;                    // sum of pi / cosh(pi lambda) over sea-s holes
  std::vector<double> momenta;  // p^(s) per hole, in (0, rho_s pi)
  double dispersion_residual;   // |dE - pi sum sin(p/rho)|
};

DispersionResult delta_energy_dispersion(const ChainSpec& spec, const ExcitationContext& ctx,
                                         int s2);

/// Hole momentum p^(s)(lambda) = rho_s arctan(sinh(pi lambda)) + rho_s pi/2.
double hole_momentum(const ChainSpec& spec, int s2, double lambda);

/// Hole energy pi / cosh(pi lambda).
double hole_energy(double lambda);

/// Samples f over the grid points; OpenMP-parallel with a serial reference.
Eigen::VectorXd sample_grid(const DensityGrid& grid, const std::function<double(double)>& f);
Eigen::VectorXd sample_grid_serial(const DensityGrid& grid, const std::function<double(double)>& f);

}  // namespace betheforge

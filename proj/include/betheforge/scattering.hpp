#pragma once

#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "betheforge/chain.hpp"
#include "betheforge/rsos.hpp"
#include "betheforge/thermo.hpp"
#include "betheforge/types.hpp"

namespace betheforge {

struct PhaseResult {
  double phi = 0.0;        // total phase Phi_{s,d} from the density integral
  cplx S_check = 1.0;      // new-string factor product
  cplx S_tilde = 1.0;      // hole K-factor product
  int C = 1;               // exp(-i pi mu_s), always +-1
  double consistency = 0;  // |exp(i phi) - C S_check S_tilde|
};

/// Scattering phase of the d-th hole (1-based) in the sea with doubled spin
/// s2, via the integral of the density corrections, together with the
/// closed-form factor decomposition.  The context must be ledger-feasible.
PhaseResult phase_shift(const ChainSpec& spec, const ExcitationContext& ctx, int s2, int d);

/// Integral-route phase only, without ledger validation; defined for any
/// rapidity sets (used by the factorization checks, which probe odd hole
/// numbers).
double phase_integral_raw(const ChainSpec& spec, const ExcitationContext& ctx, int s2,
                          double lambda_hole);

/// Quantum numbers for the new-string centers, keyed like the context's
/// new_strings lists.
struct AuxQuantumNumbers {
  std::map<int, std::vector<int>> Q2;  // doubled gap spin -> doubled Q per center
};

/// Residuals of the auxiliary Bethe equations that tie the new-string centers
/// in gap j to the hole rapidities.
std::vector<double> aux_constraint_residual(const ChainSpec& spec, const ExcitationContext& ctx,
                                            int j, const AuxQuantumNumbers& Q);

/// Newton solve for the new-string centers in every gap, holes held fixed.
ExcitationContext solve_aux_constraints(const ChainSpec& spec, ExcitationContext ctx,
                                        const AuxQuantumNumbers& Q);

/// Product form of the auxiliary equations (the XXZ identification): returns
/// |LHS/RHS - 1| per center in gap j, evaluated at the same data as the
/// logarithmic residual.
std::vector<double> aux_product_residual(const ChainSpec& spec, const ExcitationContext& ctx,
                                         int j);

/// Spin-sector transfer matrix tr_0 S(lambda - lam_1) ... S(lambda - lam_D)
/// with S(u) = K_1^(0)(u) R(-u), acting on (C^2)^(x) D for the top-sea holes.
DenseOperator spin_transfer(const ExcitationContext& ctx, const ChainSpec& spec, cplx lambda);

struct ConjecturedS {
  std::optional<Eigen::MatrixXcd> spin_part;  // only for the top sea
  std::vector<Eigen::MatrixXcd> rsos_parts;
  std::vector<cplx> spectrum;  // eigenvalues of the assembled operator
};

/// Conjectured scattering operator of the d-th hole of sea j; only the
/// spectrum is contractual (the conjecture holds up to conjugation).
ConjecturedS conjectured_S(const ChainSpec& spec, const ExcitationContext& ctx, int j, int d);

/// c = L + sum_j (2 - 3/(gap_j + 1)), exact.
Rational central_charge(const ChainSpec& spec);

}  // namespace betheforge

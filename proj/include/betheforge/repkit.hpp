#pragma once

#include "betheforge/tensor.hpp"
#include "betheforge/types.hpp"

namespace betheforge {

/// Spins are capped at doubled <= 8; everything downstream is dense.
inline constexpr int max_spin_doubled = 8;

struct SpinGenerators {
  DenseOperator e3, e_plus, e_minus, e0;
};

/// gl(2) generator matrices in the spin-s representation.
SpinGenerators spin_rep(Spin s);

/// Lagrange-interpolation projector onto the spin-k submodule of V_s (x) V_sp.
DenseOperator projector(Spin s, Spin sp, Spin k);

/// Fused R-matrix R^(s,s')(u) = sum_k f_k(u) P_k with
/// f_k(u) = prod_{l=k+1}^{s+s'} (u - il)/(u + il).
/// Normalized so R^(s,s)(0) is the permutation and R(u) R(-u) = 1.
DenseOperator fused_R(Spin s, Spin sp, cplx u);

/// Max-norm of LHS - RHS of the Yang-Baxter equation on V_si (x) V_sj (x) V_sk.
double ybe_residual(Spin si, Spin sj, Spin sk, cplx u, cplx v, cplx w);

}  // namespace betheforge

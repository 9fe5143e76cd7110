#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "betheforge/repkit.hpp"
#include "betheforge/types.hpp"

namespace betheforge {

/// L0-regular chain: the motif repeats `repeats` times.  Everything derived
/// (seas, densities, gap sets, hbar_j) is kept exact.
struct ChainSpec {
  std::vector<Spin> motif;
  int repeats = 1;

  // derived
  int L0 = 0;                       // motif length
  int L = 0;                        // total sites
  std::vector<Spin> seas;           // distinct spins, ascending (the set S)
  std::vector<int> sea_sites;       // occurrences of each sea spin in the motif
  std::vector<Rational> rho;        // sea_sites / L0
  BigInt hilbert_dim = 1;

  int num_seas() const { return static_cast<int>(seas.size()); }

  /// Doubled spin of sea j (1-based; the convention sbar_0 = 0 gives 0 at j = 0).
  int sea_doubled(int j) const;

  /// 2(sbar_{j+1} - sbar_j) for j = 0 .. num_seas(); the top gap (j =
  /// num_seas()) is infinite and encoded as 0, matching the hbar -> 0 kernel
  /// family.
  int gap_doubled(int j) const;

  /// The finite gap set R_j (doubled spins strictly between sea j and sea
  /// j+1); R_{num_seas()} is infinite and must be handled by callers.
  std::vector<int> gap_set(int j) const;

  /// Sea index j (1-based) with sea_doubled(j) == s2, or 0 if absent.
  int sea_index(int s2) const;

  /// Gap index j such that r2 lies strictly between seas j and j+1.
  /// Requires r2 not present in S.
  int gap_index_of(int r2) const;

  Rational density_of(int s2) const;

  /// L * sum_s s rho_s, the highest total spin, exact.
  Rational highest_spin() const;
};

ChainSpec make_chain_spec(std::vector<Spin> motif, int repeats,
                          const BigInt& dim_cap = BigInt(4096));

/// {"motif": ["1/2", "1", ...], "repeats": n}
ChainSpec chain_spec_from_json(const std::string& text, const BigInt& dim_cap = BigInt(4096));
std::string chain_spec_to_json(const ChainSpec& spec);

/// Transfer matrix with auxiliary spin s (s must be one of the seas),
/// t^(s)(u) = tr_0 of the ordered product of fused R-matrices along the chain.
DenseOperator transfer_matrix(const ChainSpec& spec, Spin s, cplx u);

/// Transfer matrix over an explicit site list with per-site inhomogeneities;
/// the chain module uses zero shifts, the scattering module reuses this with
/// hole rapidities.
DenseOperator inhomogeneous_transfer(Spin aux, const std::vector<Spin>& sites,
                                     cplx u, const std::vector<cplx>& shifts,
                                     bool use_reference_kernel = false);

/// t^(s_1)(u_1) ... t^(s_L0)(u_L0); at u = 0 this is the L0-step shift.
DenseOperator composite_transfer(const ChainSpec& spec, const std::vector<cplx>& u_list);

/// H^(s) = i d/du ln t^(s)(u) at u = 0, computed with a Richardson-extrapolated
/// central difference and symmetrized (the pre-symmetrization Hermiticity
/// defect must stay below 1e-8).
DenseOperator hamiltonian(const ChainSpec& spec, Spin s);

/// General Hamiltonian sum_s theta_s H^(s) with theta_s = sum_j delta_{s,s_j}
/// alpha_j.  Both the gradient construction and the sum are formed and must
/// agree within 1e-7; the sum is returned.
DenseOperator general_hamiltonian(const ChainSpec& spec,
                                  const std::vector<double>& alpha,
                                  bool allow_nonpositive_theta = false);

/// Momentum operator from the L0-step shift, eigenvalue branches in
/// [0, 2 pi / L0).
DenseOperator momentum_operator(const ChainSpec& spec);

struct SpectrumResult {
  std::vector<cplx> eigenvalues;  // sorted by (re, im); real ascending for Hermitian input
  int dimension = 0;
};

SpectrumResult diagonalize(const DenseOperator& op);

/// Total generator sum_i pi_{s_i}(e) for e in {e3, e+, e-}; used by the
/// symmetry checks.
enum class Gl2Generator { e3, e_plus, e_minus };
DenseOperator total_generator(const ChainSpec& spec, Gl2Generator which);

std::vector<int> site_dims(const ChainSpec& spec);
std::vector<Spin> site_spins(const ChainSpec& spec);

}  // namespace betheforge

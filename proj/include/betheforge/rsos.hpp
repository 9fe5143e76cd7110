#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "betheforge/chain.hpp"
#include "betheforge/thermo.hpp"
#include "betheforge/types.hpp"

namespace betheforge {

/// Height-path space H^RSOS(D; D'; sbar): D steps with jump 2 sbar - 1
/// followed by D' steps with jump 1, heights in [0, 2 sbar], boundary
/// a_0 = 0, a_D = b_0, b_{D'} = 0.  Restriction parameter 2 sbar + 2.
struct RSOSSpace {
  int D = 0;
  int Dp = 0;
  int sbar2 = 1;  // doubled gap spin, >= 1

  int height_max() const { return sbar2; }        // 2 sbar
  int restriction() const { return sbar2 + 2; }   // 2 sbar + 2
  double hbar() const;                            // pi / restriction
};

struct RSOSPath {
  std::vector<int> a;  // length D + 1
  std::vector<int> b;  // length Dp + 1
};

bool path_valid(const RSOSSpace& space, const RSOSPath& path);

/// Exhaustive enumeration; guarded at D + Dp <= 14.
std::vector<RSOSPath> enumerate_paths(const RSOSSpace& space);

/// Exact DP count over height layers.
BigInt count_paths(const RSOSSpace& space);

/// Trigonometric closed form conjectured for the path count; the value is
/// checked to be integral within 1e-9 before rounding.
BigInt zj_formula(int Dsum, int sbar2);

/// Z_L = 2^D, exact.
BigInt zL_formula(int D);

/// Sweep of DP count vs formula over a (D, Dp, sbar) grid; parallel over
/// cells, with a serial twin for the consistency tests.
struct SweepCell {
  int D, Dp, sbar2;
  BigInt count;
  BigInt formula;
  bool match;
};
std::vector<SweepCell> conjecture_sweep(int max_sum, int max_sbar2);
std::vector<SweepCell> conjecture_sweep_serial(int max_sum, int max_sbar2);

/// Hole/new-string bookkeeping for an excited-state configuration.
struct HoleLedger {
  std::map<int, int> D;            // doubled sea spin -> hole count (even)
  std::map<int, long long> nu_tilde;  // doubled gap spin -> new string count
  std::map<int, long long> A;      // doubled gap spin -> unused quantum numbers
  std::map<int, long long> mu;     // doubled sea spin -> removed sea strings
  Rational S_total;                // total spin of the configuration
  BigInt degeneracy;               // prod_j Z_j including the 2^{D_L} factor
};

/// Computes A_r, mu_s, the total spin and the degeneracy product; throws on
/// infeasible input (negative or odd A_r, fractional mu).
HoleLedger hole_ledger(const ChainSpec& spec, const std::map<int, int>& D_by_sea,
                       const std::map<int, long long>& nu_tilde);

/// Inverts A back to nu_tilde via the discrete second difference; used by the
/// round-trip consistency checks.
std::map<int, long long> nu_from_A(const ChainSpec& spec, const HoleLedger& ledger);

/// Ledger-based validation of an excitation context (evenness, feasibility).
HoleLedger validate_context(const ChainSpec& spec, const ExcitationContext& ctx);

/// Face weight of the restricted height model.  Heights must satisfy the
/// unit-jump adjacency around the plaquette (top d--c, bottom a--b, sides)
/// and sit inside the restriction window.
cplx boltzmann_weight(double hbar, int a, int b, int c, int d, cplx lambda);

/// Fused face weight with horizontal jump `jump` = 2s - 1: the product of
/// `jump` unit faces at arguments lambda + i(n - jump), internal bottom
/// heights summed.  The internal top path is fixed to the canonical greedy
/// path (up first); values for jump >= 2 are tied to that convention.
/// jump == 0 returns 1.
cplx fused_weight(double hbar, int top_left, int top_right, int bottom_left,
                  int bottom_right, cplx lambda, int jump);

enum class RSOSTransferKind { plain_aux, fused_aux };

/// Inhomogeneity data for the RSOS transfer matrices: lam_a pairs with the
/// jump-(2 sbar - 1) segment (holes of sea j), lam_b with the jump-1 segment
/// (holes of sea j+1).  The index d marks the scattering particle whose
/// rapidity is skipped: a hole of the b-family for plain_aux, of the
/// a-family for fused_aux.
struct RSOSTransferContext {
  RSOSSpace space;
  std::vector<double> lam_a;
  std::vector<double> lam_b;
  int d = 1;  // 1-based
};

cplx rsos_transfer_entry(RSOSTransferKind kind, const RSOSTransferContext& ctx,
                         const RSOSPath& bra, const RSOSPath& ket, cplx lambda);

/// Full matrix over enumerate_paths order.
Eigen::MatrixXcd rsos_transfer_matrix(RSOSTransferKind kind, const RSOSTransferContext& ctx,
                                      cplx lambda);

}  // namespace betheforge

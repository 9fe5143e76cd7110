#pragma once

#include <map>
#include <vector>

#include "betheforge/chain.hpp"
#include "betheforge/types.hpp"

namespace betheforge {

struct BetheRoots {
  std::vector<cplx> roots;  // sorted by (re, im)
  int M = 0;
};

/// Per-root multiplicative residual LHS/RHS - 1 of the Bethe equations (the
/// pairing product excludes the self term, which absorbs the overall sign).
std::vector<cplx> bethe_residual(const ChainSpec& spec, const std::vector<cplx>& roots);

struct SolveOptions {
  int max_iterations = 200;
  double target_residual = 1e-10;
  double collision_tol = 1e-9;
  double pole_tol = 1e-10;
};

/// Newton iteration on the logarithmic form of the Bethe equations with
/// branch integers frozen at the seeds.  Throws numeric_error on
/// non-convergence, root collision, or pole proximity.
BetheRoots solve_bethe(const ChainSpec& spec, int M, std::vector<cplx> seeds,
                       const SolveOptions& opts = {});

/// Transfer-matrix eigenvalue on the Bethe state with the given roots.
cplx tau_eigenvalue(const ChainSpec& spec, Spin s, cplx u, const std::vector<cplx>& roots);

struct EnergyMomentum {
  std::map<int, double> E;  // doubled sea spin -> eigenvalue of H^(s)
  double p = 0.0;           // in [0, 2 pi / L0)
};

/// Energies E^(s) = -sum_k 2s/(lambda_k^2 + s^2) and the total momentum.
/// Roots must be real or come in conjugate pairs; the imaginary residue of
/// each sum is checked against 1e-9.
EnergyMomentum energy_momentum(const ChainSpec& spec, const std::vector<cplx>& roots);

/// S = S_0 - M, exact.
Rational total_spin(const ChainSpec& spec, int M);

std::string roots_to_json(const std::vector<cplx>& roots);
std::vector<cplx> roots_from_json(const std::string& text);

/// A Bethe state constructed from string-hypothesis seeds together with its
/// provenance.
struct ConstructedState {
  BetheRoots roots;
  int M = 0;
  std::string label;  // configuration + quantum numbers, for reports
};

/// Builds every admissible string configuration / quantum number assignment
/// at the given M, seeds from the logarithmic string equations and tries to
/// converge the exact equations.  States whose Newton iteration fails (e.g.
/// exceptional roots sitting on poles) are skipped.
std::vector<ConstructedState> construct_states(const ChainSpec& spec, int M);

}  // namespace betheforge

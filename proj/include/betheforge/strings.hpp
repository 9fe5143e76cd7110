#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "betheforge/chain.hpp"
#include "betheforge/types.hpp"

namespace betheforge {

/// Multiplicities nu_m of 2m-strings, keyed by the doubled length 2m.
struct StringConfig {
  std::map<int, int> nu;

  /// M = sum over strings of their root count (= doubled length each).
  int total_roots() const;
};

/// Half-integer quantum numbers Q_{m,k}, stored doubled, keyed by
/// (doubled string length, k) with k = 1..nu_m and values strictly
/// increasing in k.
struct QuantumNumbers {
  std::map<std::pair<int, int>, int> Q2;
};

/// phi_r with the phi_0 == 0 convention (r <= 0 contributes nothing).
double phi_fn(int r, double lambda);
double phi_prime_fn(int r, double lambda);

/// Driving kernel Phi_p^(m) (p = 2s integer, m doubled) and the pair kernel
/// Phi_2^(p,m) (both indices doubled), plus their lambda-derivatives Psi.
double Phi_driving(int p, int m2, double lambda);
double Psi_driving(int p, int m2, double lambda);
double Phi_pair(int p2, int m2, double lambda);
double Psi_pair(int p2, int m2, double lambda);

/// Fourier transforms of the Psi kernels (sums of exp(-alpha |p|)); exact.
double Psi_driving_hat(int p, int m2, double momentum);
double Psi_pair_hat(int p2, int m2, double momentum);

struct PhiKernelValues {
  double Phi_p_m;
  double Phi2_p_m;
  double Psi_p_m;
  double Psi2_p_m;
};

/// Convenience bundle; p is the doubled first index for both families.
PhiKernelValues phi_kernels(int p, int m2, double lambda);

struct Valence {
  long long P_m;
  int Q_max_doubled;  // 2 Q_max = P_m - 1
};

Valence valence(const ChainSpec& spec, const StringConfig& config, int m2);

/// Residual of the logarithmic Bethe equations at the given string centers.
std::vector<double> log_bethe_residual(const ChainSpec& spec, const StringConfig& config,
                                       const std::vector<double>& centers,
                                       const QuantumNumbers& Q);

/// Newton solve of the logarithmic equations for the real string centers.
std::vector<double> solve_string_centers(const ChainSpec& spec, const StringConfig& config,
                                         const QuantumNumbers& Q);

/// Expands string centers into complex root seeds; deviation scales the
/// imaginary offsets (exact finite-size strings deviate from i/2 spacing).
std::vector<cplx> expand_string_seeds(const StringConfig& config,
                                      const std::vector<double>& centers,
                                      double deviation);

/// Z_M^bethe: (2 S_0 - 2M + 1) * sum over configurations of prod binom(P_m, nu_m).
BigInt count_states(const ChainSpec& spec, int M);
BigInt count_states_serial(const ChainSpec& spec, int M);

struct CompletenessResult {
  BigInt sum;
  BigInt hilbert_dim;
  bool equal;
};

CompletenessResult completeness_check(const ChainSpec& spec);

/// Power-series check of the combinatorial identity behind the completeness
/// count: coefficients of (1-x) prod_n (1-x^n)^{b_n} against the direct
/// configuration sums with generalized binomials.  Requires b_1 < 0.
bool series_identity_check(const std::map<int, long long>& b, int M_max);

/// The vacuum configuration nu_s = L rho_s / 2 for s in S; throws if any
/// L rho_s is odd.
StringConfig vacuum_config(const ChainSpec& spec);

struct BetheStateLabel {
  StringConfig config;
  QuantumNumbers Q;
  std::string describe() const;
};

/// All admissible (configuration, quantum number) labels at the given M.
std::vector<BetheStateLabel> enumerate_states(const ChainSpec& spec, int M,
                                              int max_states = 4096);

/// Exact binomial; zero when n < k or n < 0.
BigInt binomial(long long n, long long k);

/// Generalized binomial: falling factorial over k!, valid for any integer top.
BigInt binomial_general(long long n, long long k);

}  // namespace betheforge

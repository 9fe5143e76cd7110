#include "betheforge/scattering.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "betheforge/special_functions.hpp"
#include "betheforge/tensor.hpp"

namespace betheforge {

namespace {

// Half-line integral of a kappa kernel: int_{-inf}^{X} kappa = pi kappa_hat(0)
// + theta(X) with K = exp(-i theta).
double kappa_halfline(const KernelParams& p, double X) {
  return pi * eval_kappa_hat(p, 0.0) + eval_K_phase(p, X);
}

// Half-line integral of a gamma kernel: pi gamma_hat(0) + Gamma(X).
double gamma_halfline(const KernelParams& p, double X) {
  TrigFamilyResult t = eval_trig_family(p, X);
  if (t.is_dirac) throw numeric_error("phase integral: Dirac gamma kernel");
  return pi * eval_gamma_hat(p, 0.0) + t.Gamma;
}

}  // namespace

double phase_integral_raw(const ChainSpec& spec, const ExcitationContext& ctx, int s2,
                          double lambda_hole) {
  int j = spec.sea_index(s2);
  if (j == 0) throw domain_error("phase_integral_raw: spin not in the chain");
  double phi = 0.0;
  for (const auto& t : correction_kernel_terms(spec, ctx, j)) {
    double X = lambda_hole - t.center;
    if (t.is_string)
      phi -= gamma_halfline(t.params, X);
    else
      phi += kappa_halfline(t.params, X);
  }
  return phi;
}

PhaseResult phase_shift(const ChainSpec& spec, const ExcitationContext& ctx, int s2, int d) {
  HoleLedger ledger = validate_context(spec, ctx);
  int j = spec.sea_index(s2);
  if (j == 0) throw domain_error("phase_shift: spin not in the chain");
  auto it = ctx.holes.find(s2);
  if (it == ctx.holes.end() || d < 1 || d > static_cast<int>(it->second.size()))
    throw domain_error("phase_shift: hole index out of range");
  const double lam = it->second[d - 1];

  PhaseResult out;
  out.phi = phase_integral_raw(spec, ctx, s2, lam);
  for (const auto& t : correction_kernel_terms(spec, ctx, j)) {
    double X = lam - t.center;
    if (t.is_string)
      out.S_check *= eval_trig_family(t.params, X).G;
    else
      out.S_tilde *= eval_K(t.params, -X);
  }
  long long mu = ledger.mu.at(s2);
  out.C = (mu % 2 == 0) ? 1 : -1;
  cplx lhs = std::exp(cplx(0.0, out.phi));
  cplx rhs = static_cast<double>(out.C) * out.S_check * out.S_tilde;
  out.consistency = std::abs(lhs - rhs);
  if (out.consistency > 1e-5)
    throw numeric_error("phase_shift: factor decomposition inconsistent (|diff| = " +
                        std::to_string(out.consistency) + ")");
  return out;
}

namespace {

// F_2-type kernel inside gap j, in shifted doubled indices a = m2 - sbar2_j,
// b = r2 - sbar2_j; same index pattern as the pair kernel.
double F2_gap(double hbar, int a, int b, double x) {
  double v = Gamma_extended(hbar, a + b, x);
  if (std::abs(a - b) > 0) v += Gamma_extended(hbar, std::abs(a - b), x);
  for (int idx = std::abs(a - b) + 2; idx <= a + b - 2; idx += 2)
    v += 2.0 * Gamma_extended(hbar, idx, x);
  return v;
}

double F2_gap_prime(double hbar, int a, int b, double x) {
  double v = gamma_extended(hbar, a + b, x);
  if (std::abs(a - b) > 0) v += gamma_extended(hbar, std::abs(a - b), x);
  for (int idx = std::abs(a - b) + 2; idx <= a + b - 2; idx += 2)
    v += 2.0 * gamma_extended(hbar, idx, x);
  return v;
}

double gap_hbar(const ChainSpec& spec, int j) {
  int g = spec.gap_doubled(j);
  return g == 0 ? 0.0 : pi / g;
}

struct GapStrings {
  std::vector<int> m2;        // doubled spin per center, aligned with centers
  std::vector<double> centers;
  std::vector<int> q2;        // doubled quantum numbers (when provided)
};

GapStrings collect_gap_strings(const ChainSpec& spec, const ExcitationContext& ctx, int j,
                               const AuxQuantumNumbers* Q) {
  GapStrings out;
  for (const auto& [m2, centers] : ctx.new_strings) {
    if (centers.empty()) continue;
    if (spec.gap_index_of(m2) != j) continue;
    const std::vector<int>* q = nullptr;
    if (Q) {
      auto it = Q->Q2.find(m2);
      if (it == Q->Q2.end() || it->second.size() != centers.size())
        throw domain_error("aux constraints: quantum numbers missing for spin " +
                           Spin(m2).str());
      q = &it->second;
    }
    for (size_t k = 0; k < centers.size(); ++k) {
      out.m2.push_back(m2);
      out.centers.push_back(centers[k]);
      out.q2.push_back(q ? (*q)[k] : 0);
    }
  }
  return out;
}

const std::vector<double>* holes_of_sea(const ChainSpec& spec, const ExcitationContext& ctx,
                                        int sea) {
  if (sea < 1 || sea > spec.num_seas()) return nullptr;
  auto it = ctx.holes.find(spec.sea_doubled(sea));
  return it == ctx.holes.end() ? nullptr : &it->second;
}

}  // namespace

std::vector<double> aux_constraint_residual(const ChainSpec& spec, const ExcitationContext& ctx,
                                            int j, const AuxQuantumNumbers& Q) {
  if (j < 0 || j > spec.num_seas())
    throw domain_error("aux_constraint_residual: bad gap index");
  GapStrings gs = collect_gap_strings(spec, ctx, j, &Q);
  const double hbar = gap_hbar(spec, j);
  const int sj2 = spec.sea_doubled(j);
  std::vector<double> res(gs.centers.size());
  for (size_t k = 0; k < gs.centers.size(); ++k) {
    double x = gs.centers[k];
    double v = -pi * gs.q2[k];  // -2 pi Q
    if (auto* h = holes_of_sea(spec, ctx, j))
      for (double lam : *h) v += Gamma_extended(hbar, gs.m2[k] - sj2, x - lam);
    if (auto* h = holes_of_sea(spec, ctx, j + 1))
      for (double lam : *h)
        v += Gamma_extended(hbar, spec.sea_doubled(j + 1) - gs.m2[k], x - lam);
    for (size_t l = 0; l < gs.centers.size(); ++l) {
      if (l == k) continue;
      v -= F2_gap(hbar, gs.m2[k] - sj2, gs.m2[l] - sj2, x - gs.centers[l]);
    }
    res[k] = v;
  }
  return res;
}

ExcitationContext solve_aux_constraints(const ChainSpec& spec, ExcitationContext ctx,
                                        const AuxQuantumNumbers& Q) {
  HoleLedger ledger = validate_context(spec, ctx);
  // admissible quantum numbers: |Q| bounded by the string valence
  for (const auto& [m2, q2s] : Q.Q2) {
    auto it = ledger.nu_tilde.find(m2);
    long long nu = (it == ledger.nu_tilde.end()) ? 0 : it->second;
    if (nu == 0) continue;
    long long q_max2 = ledger.A.at(m2) + nu - 1;
    for (int q2 : q2s)
      if (std::abs(q2) > q_max2)
        throw domain_error("solve_aux_constraints: quantum number outside the valence window");
  }
  for (int j = 0; j <= spec.num_seas(); ++j) {
    GapStrings gs = collect_gap_strings(spec, ctx, j, &Q);
    const int n = static_cast<int>(gs.centers.size());
    if (n == 0) continue;
    const double hbar = gap_hbar(spec, j);
    const int sj2 = spec.sea_doubled(j);

    // seed at the mean of the adjacent hole rapidities, spread by Q
    double mean = 0.0;
    int cnt = 0;
    for (int sea : {j, j + 1})
      if (auto* h = holes_of_sea(spec, ctx, sea))
        for (double lam : *h) {
          mean += lam;
          ++cnt;
        }
    if (cnt) mean /= cnt;
    std::vector<double> x(n);
    for (int k = 0; k < n; ++k) x[k] = mean + 0.3 * gs.q2[k];

    for (int iter = 0; iter < 200; ++iter) {
      for (int k = 0; k < n; ++k) gs.centers[k] = x[k];
      ExcitationContext probe = ctx;
      // rebuild the per-spin center lists from the flat order
      {
        std::map<int, std::vector<double>> rebuilt;
        for (int k = 0; k < n; ++k) rebuilt[gs.m2[k]].push_back(x[k]);
        for (auto& [m2, centers] : rebuilt) probe.new_strings[m2] = centers;
      }
      std::vector<double> F = aux_constraint_residual(spec, probe, j, Q);
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
      for (int k = 0; k < n; ++k) {
        if (auto* h = holes_of_sea(spec, ctx, j))
          for (double lam : *h)
            J(k, k) += gamma_extended(hbar, gs.m2[k] - sj2, x[k] - lam);
        if (auto* h = holes_of_sea(spec, ctx, j + 1))
          for (double lam : *h)
            J(k, k) += gamma_extended(hbar, spec.sea_doubled(j + 1) - gs.m2[k], x[k] - lam);
        for (int l = 0; l < n; ++l) {
          if (l == k) continue;
          double d = F2_gap_prime(hbar, gs.m2[k] - sj2, gs.m2[l] - sj2, x[k] - x[l]);
          J(k, k) -= d;
          J(k, l) += d;
        }
      }
      Eigen::VectorXd Fv = Eigen::Map<Eigen::VectorXd>(F.data(), n);
      Eigen::VectorXd step = J.partialPivLu().solve(Fv);
      if (!step.allFinite())
        throw numeric_error("solve_aux_constraints: singular Jacobian");
      double norm = step.cwiseAbs().maxCoeff();
      double damp = std::min(1.0, 1.0 / std::max(norm, 1.0));
      for (int k = 0; k < n; ++k) x[k] -= damp * step(k);
      if (norm < 1e-13) break;
    }

    std::map<int, std::vector<double>> rebuilt;
    for (int k = 0; k < n; ++k) rebuilt[gs.m2[k]].push_back(x[k]);
    for (auto& [m2, centers] : rebuilt) ctx.new_strings[m2] = centers;
    std::vector<double> res = aux_constraint_residual(spec, ctx, j, Q);
    for (double r : res)
      if (std::abs(r) > 1e-10)
        throw numeric_error("solve_aux_constraints: no convergence (residual " +
                            std::to_string(r) + ")");
  }
  return ctx;
}

std::vector<double> aux_product_residual(const ChainSpec& spec, const ExcitationContext& ctx,
                                         int j) {
  GapStrings gs = collect_gap_strings(spec, ctx, j, nullptr);
  const double hbar = gap_hbar(spec, j);
  const int sj2 = spec.sea_doubled(j);

  // unimodular edge factor exp(-i Gamma_idx) evaluated in product form
  auto edge = [&](int idx, double y) -> cplx {
    if (idx == 0) return 1.0;
    if (hbar == 0.0) return (cplx(y, 0.5 * idx)) / (cplx(y, -0.5 * idx));
    cplx num = std::sinh(hbar * cplx(y, 0.5 * idx));
    cplx den = std::sinh(hbar * cplx(y, -0.5 * idx));
    return num / den;
  };

  std::vector<double> out(gs.centers.size());
  for (size_t k = 0; k < gs.centers.size(); ++k) {
    double x = gs.centers[k];
    cplx lhs = 1.0;
    if (auto* h = holes_of_sea(spec, ctx, j))
      for (double lam : *h) lhs *= edge(gs.m2[k] - sj2, x - lam);
    if (auto* h = holes_of_sea(spec, ctx, j + 1))
      for (double lam : *h)
        lhs *= edge(spec.sea_doubled(j + 1) - gs.m2[k], x - lam);
    cplx rhs = 1.0;
    for (size_t l = 0; l < gs.centers.size(); ++l) {
      if (l == k) continue;
      int a = gs.m2[k] - sj2, b = gs.m2[l] - sj2;
      double y = x - gs.centers[l];
      rhs *= edge(a + b, y);
      if (std::abs(a - b) > 0) rhs *= edge(std::abs(a - b), y);
      for (int idx = std::abs(a - b) + 2; idx <= a + b - 2; idx += 2) {
        cplx e = edge(idx, y);
        rhs *= e * e;
      }
    }
    cplx z = lhs / rhs;
    out[k] = std::min(std::abs(z - 1.0), std::abs(z + 1.0));
  }
  return out;
}

DenseOperator spin_transfer(const ExcitationContext& ctx, const ChainSpec& spec, cplx lambda) {
  if (lambda.imag() != 0.0)
    throw domain_error("spin_transfer: spectral parameter must be real");
  int top = spec.sea_doubled(spec.num_seas());
  auto it = ctx.holes.find(top);
  if (it == ctx.holes.end() || it->second.empty())
    throw domain_error("spin_transfer: no holes in the top sea");
  const std::vector<double>& lam = it->second;
  const int D = static_cast<int>(lam.size());

  std::vector<Spin> sites(D, Spin(1));
  std::vector<cplx> shifts(D);
  for (int q = 0; q < D; ++q) shifts[q] = -lam[q];
  DenseOperator t = inhomogeneous_transfer(Spin(1), sites, -lambda, shifts);

  cplx prefactor = 1.0;
  KernelParams K1 = KernelParams::hbar_limit(1.0);
  for (int q = 0; q < D; ++q)
    prefactor *= eval_K(K1, lambda.real() - lam[q]);
  t.mat *= prefactor;
  return t;
}

ConjecturedS conjectured_S(const ChainSpec& spec, const ExcitationContext& ctx, int j, int d) {
  validate_context(spec, ctx);
  const int nS = spec.num_seas();
  if (j < 1 || j > nS) throw domain_error("conjectured_S: bad particle type");
  auto holes_at = [&](int sea) -> std::vector<double> {
    auto* h = holes_of_sea(spec, ctx, sea);
    return h ? *h : std::vector<double>{};
  };
  std::vector<double> own = holes_at(j);
  if (d < 1 || d > static_cast<int>(own.size()))
    throw domain_error("conjectured_S: hole index out of range");
  const double lam = own[d - 1];

  ConjecturedS out;
  Eigen::MatrixXcd assembled = Eigen::MatrixXcd::Identity(1, 1);

  if (j == nS) {
    DenseOperator sp = spin_transfer(ctx, spec, lam);
    out.spin_part = sp.mat;
    RSOSTransferContext rc;
    rc.space = RSOSSpace{static_cast<int>(holes_at(nS - 1).size()),
                         static_cast<int>(own.size()), spec.gap_doubled(nS - 1)};
    rc.lam_a = holes_at(nS - 1);
    rc.lam_b = own;
    rc.d = d;
    Eigen::MatrixXcd rsos = rsos_transfer_matrix(RSOSTransferKind::plain_aux, rc, lam);
    out.rsos_parts.push_back(rsos);
    assembled = kron(sp.mat, rsos);
  } else {
    RSOSTransferContext below;
    below.space = RSOSSpace{static_cast<int>(holes_at(j - 1).size()),
                            static_cast<int>(own.size()), spec.gap_doubled(j - 1)};
    below.lam_a = holes_at(j - 1);
    below.lam_b = own;
    below.d = d;
    Eigen::MatrixXcd t_below = rsos_transfer_matrix(RSOSTransferKind::plain_aux, below, lam);

    RSOSTransferContext above;
    above.space = RSOSSpace{static_cast<int>(own.size()),
                            static_cast<int>(holes_at(j + 1).size()), spec.gap_doubled(j)};
    above.lam_a = own;
    above.lam_b = holes_at(j + 1);
    above.d = d;
    Eigen::MatrixXcd t_above = rsos_transfer_matrix(RSOSTransferKind::fused_aux, above, lam);

    out.rsos_parts.push_back(t_below);
    out.rsos_parts.push_back(t_above);
    assembled = kron(t_below, t_above);
  }

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(assembled);
  if (es.info() != Eigen::Success) throw numeric_error("conjectured_S: eigensolver failed");
  for (int i = 0; i < assembled.rows(); ++i) out.spectrum.push_back(es.eigenvalues()(i));
  std::sort(out.spectrum.begin(), out.spectrum.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

Rational central_charge(const ChainSpec& spec) {
  const int nS = spec.num_seas();
  Rational c(nS);
  for (int j = 1; j <= nS; ++j)
    c += Rational(2) - Rational(6, spec.gap_doubled(j - 1) + 2);
  return c;
}

}  // namespace betheforge

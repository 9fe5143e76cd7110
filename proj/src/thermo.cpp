#include "betheforge/thermo.hpp"

#include <fftw3.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>

#include "betheforge/strings.hpp"

namespace betheforge {

void validate_grid(const DensityGrid& grid) {
  if (grid.N < 2 || (grid.N & (grid.N - 1)) != 0)
    throw domain_error("DensityGrid: N must be a power of two");
  if (!(grid.lambda_max > grid.lambda_min))
    throw domain_error("DensityGrid: empty window");
}

int ExcitationContext::hole_count(int s2) const {
  auto it = holes.find(s2);
  return it == holes.end() ? 0 : static_cast<int>(it->second.size());
}

std::map<int, int> ExcitationContext::hole_counts(const ChainSpec& spec) const {
  std::map<int, int> out;
  for (int j = 1; j <= spec.num_seas(); ++j)
    out[spec.sea_doubled(j)] = hole_count(spec.sea_doubled(j));
  return out;
}

double vacuum_density(const ChainSpec& spec, int s2, double lambda) {
  double rho = to_double(spec.density_of(s2));
  return rho / (2.0 * std::cosh(pi * lambda));
}

namespace {

std::mutex fftw_plan_mutex;  // FFTW planning is not thread-safe

// f(lambda_k) = int exp(-i p lambda_k) fhat(p) dp on the conjugate grid.
// With p_j = (j - N/2) dp, dp = 2 pi / (N dx):
//   f(lambda_k) = dp (-1)^k sum_j g_j exp(-2 pi i j k / N),  g_j = fhat(p_j) exp(-i p_j lambda_min)
Eigen::VectorXd inverse_transform_to_grid(const DensityGrid& grid,
                                          const std::function<double(double)>& fhat) {
  const int N = grid.N;
  const double dp = 2.0 * pi / (N * grid.dx());
  std::vector<fftw_complex> buf(N);
  for (int j = 0; j < N; ++j) {
    double p = (j - N / 2) * dp;
    cplx g = fhat(p) * std::exp(cplx(0.0, -p * grid.lambda_min));
    buf[j][0] = g.real();
    buf[j][1] = g.imag();
  }
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_plan plan = fftw_plan_dft_1d(N, buf.data(), buf.data(), FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  Eigen::VectorXd out(N);
  for (int k = 0; k < N; ++k) {
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    out(k) = dp * sign * buf[k][0];
  }
  return out;
}

}  // namespace

DensityGrid solve_vacuum_integral(const ChainSpec& spec, double window, int N,
                                  DensityRoute route) {
  if (window < 20.0) throw domain_error("solve_vacuum_integral: window must cover [-20, 20]");
  DensityGrid grid;
  grid.lambda_min = -window;
  grid.lambda_max = window;
  grid.N = N;
  validate_grid(grid);
  if (route == DensityRoute::transform && N < (1 << 10))
    throw domain_error("solve_vacuum_integral: N >= 1024 required");

  const int nS = spec.num_seas();

  if (route == DensityRoute::transform) {
    // solve the |S| x |S| system (delta_{sr} + Psi2hat^(r,s)) sigma_r
    //   = rho_r Psihat_{2r}^(s) / (2 pi) per momentum, then transform back
    for (int a = 1; a <= nS; ++a) {
      int s2 = spec.sea_doubled(a);
      auto fhat = [&](double p) {
        Eigen::MatrixXd Mt(nS, nS);
        Eigen::VectorXd rhs(nS);
        for (int i = 1; i <= nS; ++i) {
          int si2 = spec.sea_doubled(i);
          double drive = 0.0;
          for (int r = 1; r <= nS; ++r)
            drive += to_double(spec.rho[r - 1]) *
                     Psi_driving_hat(spec.sea_doubled(r), si2, p);
          rhs(i - 1) = drive / (2.0 * pi);
          for (int r = 1; r <= nS; ++r)
            Mt(i - 1, r - 1) = ((i == r) ? 1.0 : 0.0) +
                               Psi_pair_hat(spec.sea_doubled(r), si2, p);
        }
        Eigen::VectorXd sol = Mt.partialPivLu().solve(rhs);
        return sol(a - 1);
      };
      grid.values[s2] = inverse_transform_to_grid(grid, fhat);
    }
  } else {
    // collocation on the lambda grid; trapezoid weights degenerate to dx on
    // a uniform grid with decaying integrand
    const long long total = static_cast<long long>(nS) * N;
    if (total > 6000) throw domain_error("solve_vacuum_integral: dense route capped at |S| N <= 6000");
    const double h = grid.dx();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(total, total);
    Eigen::VectorXd rhs(total);
    for (int i = 1; i <= nS; ++i) {
      int si2 = spec.sea_doubled(i);
      for (int k = 0; k < N; ++k) {
        long long row = static_cast<long long>(i - 1) * N + k;
        double l0 = grid.lambda(k);
        double drive = 0.0;
        for (int r = 1; r <= nS; ++r)
          drive += to_double(spec.rho[r - 1]) * Psi_driving(spec.sea_doubled(r), si2, l0);
        rhs(row) = drive / (2.0 * pi);
        A(row, row) += 1.0;
        for (int r = 1; r <= nS; ++r) {
          int sr2 = spec.sea_doubled(r);
          for (int l = 0; l < N; ++l) {
            long long col = static_cast<long long>(r - 1) * N + l;
            A(row, col) += h * Psi_pair(sr2, si2, l0 - grid.lambda(l)) / (2.0 * pi);
          }
        }
      }
    }
    Eigen::VectorXd sol = A.partialPivLu().solve(rhs);
    for (int i = 1; i <= nS; ++i)
      grid.values[spec.sea_doubled(i)] =
          sol.segment(static_cast<long long>(i - 1) * N, N);
  }

  // window adequacy
  for (auto& [s2, v] : grid.values) {
    double edge = std::max(std::abs(v(0)), std::abs(v(grid.N - 1)));
    if (edge > 1e-10)
      throw numeric_error("solve_vacuum_integral: boundary decay violated (edge " +
                          std::to_string(edge) + ")");
  }
  return grid;
}

VacuumEnergy vacuum_energy(const ChainSpec& spec, int s2) {
  if (spec.sea_index(s2) == 0)
    throw domain_error("vacuum_energy: spin not present in the chain");
  VacuumEnergy out{};

  // closed digamma form
  double closed = 0.0;
  for (int j = 1; j <= spec.num_seas(); ++j) {
    int sp2 = spec.sea_doubled(j);
    double rho = to_double(spec.rho[j - 1]);
    double a = 0.25 * (sp2 + s2) + 0.5;          // (s' + s + 1)/2
    double bnd = 0.25 * std::abs(sp2 - s2) + 0.5;  // (|s' - s| + 1)/2
    closed -= rho * (digamma(a) - digamma(bnd));
  }
  out.closed_form = closed;

  // Plancherel form: -sum_{s'} rho_{s'} int_0^inf Psihat_{2s}^(s')(p) sech(p/2) dp
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double numeric = 0.0;
  for (int j = 1; j <= spec.num_seas(); ++j) {
    int sp2 = spec.sea_doubled(j);
    double rho = to_double(spec.rho[j - 1]);
    auto f = [&](double p) {
      return Psi_driving_hat(s2, sp2, p) / std::cosh(0.5 * p);
    };
    double err = 0.0;
    double val = GK::integrate(f, 0.0, 120.0, 12, 1e-13, &err);
    if (err > 1e-10) throw numeric_error("vacuum_energy: quadrature failure");
    numeric -= rho * val;
  }
  out.numeric = numeric;
  return out;
}

VacuumMomentum vacuum_momentum(const ChainSpec& spec) {
  VacuumMomentum out;
  out.coefficient = spec.highest_spin();  // L sum_s s rho_s
  // reduce pi * c mod 2 pi / L0 exactly through c mod (2/L0)
  Rational c = out.coefficient;
  Rational window(2, spec.L0);
  Rational q = c / window;
  long long fl = q.numerator() / q.denominator();  // c >= 0
  Rational reduced = c - window * Rational(fl);
  out.reduced = pi * to_double(reduced);
  return out;
}

double kappa_kernel(const KernelParams& p, double lambda) {
  // kappa(lambda) = 2 int_0^inf kappa_hat(q) cos(q lambda) dq (even transform)
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double rate = 0.5 * (p.r + 1.0);
  double p_max = std::min(400.0, 30.0 + 74.0 / std::min(rate, 1.0));
  auto f = [&](double q) { return eval_kappa_hat(p, q) * std::cos(q * lambda); };
  double err = 0.0;
  double val = GK::integrate(f, 0.0, p_max, 15, 1e-13, &err);
  if (err > 1e-9) throw numeric_error("kappa_kernel: quadrature failure");
  return 2.0 * val;
}

std::vector<CorrectionKernelTerm> correction_kernel_terms(const ChainSpec& spec,
                                                          const ExcitationContext& ctx, int j) {
  std::vector<CorrectionKernelTerm> terms;
  const int nS = spec.num_seas();
  if (j < 1 || j > nS) throw domain_error("correction_kernel_terms: bad sea index");
  auto holes_at = [&](int sea) -> const std::vector<double>* {
    if (sea < 1 || sea > nS) return nullptr;
    auto it = ctx.holes.find(spec.sea_doubled(sea));
    return it == ctx.holes.end() ? nullptr : &it->second;
  };
  // holes in adjacent seas, kernel index 2(sea gap) - 1
  if (auto* h = holes_at(j - 1))
    for (double l : *h)
      terms.push_back({KernelParams::from_doubled(spec.gap_doubled(j - 1),
                                                  spec.gap_doubled(j - 1) - 1),
                       l, false});
  if (auto* h = holes_at(j + 1))
    for (double l : *h)
      terms.push_back({KernelParams::from_doubled(spec.gap_doubled(j),
                                                  spec.gap_doubled(j) - 1),
                       l, false});
  // holes in the same sea, kernel index 1 with both neighbor gaps
  if (auto* h = holes_at(j))
    for (double l : *h) {
      terms.push_back({KernelParams::from_doubled(spec.gap_doubled(j), 1), l, false});
      terms.push_back({KernelParams::from_doubled(spec.gap_doubled(j - 1), 1), l, false});
    }
  // new strings in the gaps adjacent to sea j
  const int sj2 = spec.sea_doubled(j);
  for (const auto& [m2, centers] : ctx.new_strings) {
    if (centers.empty()) continue;
    int gap = spec.gap_index_of(m2);
    if (gap == j - 1) {
      for (double c : centers)
        terms.push_back(
            {KernelParams::from_doubled(spec.gap_doubled(j - 1), sj2 - m2), c, true});
    } else if (gap == j) {
      for (double c : centers)
        terms.push_back(
            {KernelParams::from_doubled(spec.gap_doubled(j), m2 - sj2), c, true});
    }
  }
  return terms;
}

CorrectionValue excited_corrections(const ChainSpec& spec, const ExcitationContext& ctx,
                                    double lambda, int j) {
  CorrectionValue out{0.0, 0.0};
  for (const auto& t : correction_kernel_terms(spec, ctx, j)) {
    if (t.is_string) {
      TrigFamilyResult g = eval_trig_family(t.params, lambda - t.center);
      if (g.is_dirac)
        throw numeric_error("excited_corrections: gamma_0 Dirac kernel cannot be sampled");
      out.c -= g.gamma / (2.0 * pi);
    } else {
      out.r += kappa_kernel(t.params, lambda - t.center) / (2.0 * pi);
    }
  }
  return out;
}

std::vector<double> hole_point_masses(const ExcitationContext& ctx, const ChainSpec& spec, int j) {
  auto it = ctx.holes.find(spec.sea_doubled(j));
  if (it == ctx.holes.end()) return {};
  return it->second;
}

double corrections_integral(const ChainSpec& spec, const ExcitationContext& ctx, int j) {
  // int kappa = 2 pi kappa_hat(0); int gamma = 2 pi gamma_hat(0); Dirac masses -1 each
  double total = 0.0;
  for (const auto& t : correction_kernel_terms(spec, ctx, j)) {
    if (t.is_string)
      total -= eval_gamma_hat(t.params, 0.0);
    else
      total += eval_kappa_hat(t.params, 0.0);
  }
  total -= static_cast<double>(hole_point_masses(ctx, spec, j).size());
  return total;
}

double hole_energy(double lambda) { return pi / std::cosh(pi * lambda); }

double hole_momentum(const ChainSpec& spec, int s2, double lambda) {
  double rho = to_double(spec.density_of(s2));
  return rho * std::atan(std::sinh(pi * lambda)) + 0.5 * rho * pi;
}

DispersionResult delta_energy_dispersion(const ChainSpec& spec, const ExcitationContext& ctx,
                                         int s2) {
  if (spec.sea_index(s2) == 0)
    throw domain_error("delta_energy_dispersion: spin not present in the chain");
  DispersionResult out{0.0, {}, 0.0};
  double rho = to_double(spec.density_of(s2));
  auto it = ctx.holes.find(s2);
  double sum_sin = 0.0;
  if (it != ctx.holes.end()) {
    for (double l : it->second) {
      out.dE += hole_energy(l);
      double p = hole_momentum(spec, s2, l);
      out.momenta.push_back(p);
      sum_sin += std::sin(p / rho);
    }
  }
  out.dispersion_residual = std::abs(out.dE - pi * sum_sin);
  return out;
}

Eigen::VectorXd sample_grid(const DensityGrid& grid, const std::function<double(double)>& f) {
  Eigen::VectorXd out(grid.N);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < grid.N; ++k) out(k) = f(grid.lambda(k));
  return out;
}

Eigen::VectorXd sample_grid_serial(const DensityGrid& grid,
                                   const std::function<double(double)>& f) {
  Eigen::VectorXd out(grid.N);
  for (int k = 0; k < grid.N; ++k) out(k) = f(grid.lambda(k));
  return out;
}

}  // namespace betheforge

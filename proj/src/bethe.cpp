#include "betheforge/bethe.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "betheforge/strings.hpp"

namespace betheforge {

namespace {

// d/dl log((l + i r2/2)/(l - i r2/2)); r2 is the doubled index of e_r
cplx dlog_e(cplx lambda, int r2) {
  cplx ir(0.0, 0.5 * r2);
  return 1.0 / (lambda + ir) - 1.0 / (lambda - ir);
}

cplx log_e(cplx lambda, int r2) {
  cplx ir(0.0, 0.5 * r2);
  return std::log((lambda + ir) / (lambda - ir));
}

void check_poles(const ChainSpec& spec, const std::vector<cplx>& roots, double tol) {
  for (cplx l : roots)
    for (int j = 1; j <= spec.num_seas(); ++j) {
      double s = 0.5 * spec.sea_doubled(j);
      if (std::abs(l - cplx(0.0, s)) < tol || std::abs(l + cplx(0.0, s)) < tol)
        throw numeric_error("bethe: root at pole +-i s");
    }
}

}  // namespace

std::vector<cplx> bethe_residual(const ChainSpec& spec, const std::vector<cplx>& roots) {
  check_poles(spec, roots, 1e-10);
  const int M = static_cast<int>(roots.size());
  std::vector<cplx> out(M);
  for (int n = 0; n < M; ++n) {
    cplx lhs = 1.0;
    for (int j = 1; j <= spec.num_seas(); ++j) {
      int exponent = spec.repeats * spec.sea_sites[j - 1];  // L rho_s
      cplx base = (roots[n] + cplx(0.0, 0.5 * spec.sea_doubled(j))) /
                  (roots[n] - cplx(0.0, 0.5 * spec.sea_doubled(j)));
      lhs *= std::pow(base, exponent);
    }
    cplx rhs = 1.0;  // self term and the overall sign cancel
    for (int p = 0; p < M; ++p) {
      if (p == n) continue;
      rhs *= (roots[n] - roots[p] + cplx(0.0, 1.0)) /
             (roots[n] - roots[p] - cplx(0.0, 1.0));
    }
    out[n] = lhs / rhs - 1.0;
  }
  return out;
}

BetheRoots solve_bethe(const ChainSpec& spec, int M, std::vector<cplx> seeds,
                       const SolveOptions& opts) {
  if (M < 1) throw domain_error("solve_bethe: M must be >= 1");
  if (static_cast<int>(seeds.size()) != M)
    throw domain_error("solve_bethe: seed count must equal M");
  check_poles(spec, seeds, opts.pole_tol);

  // The principal logarithm has its cut on the segment between the poles
  // +-i r/2, exactly where physical roots sit.  Each factor's argument is
  // therefore unwrapped continuously along the Newton path, with the branch
  // integers of the full equation frozen at the seeds.
  const int nS = spec.num_seas();
  const int n_factors = nS + (M - 1);
  std::vector<std::vector<double>> arg_track(M, std::vector<double>(n_factors, 0.0));

  auto factor_value = [&](const std::vector<cplx>& l, int n, int f) -> cplx {
    if (f < nS) {
      cplx ir(0.0, 0.5 * spec.sea_doubled(f + 1));
      return (l[n] + ir) / (l[n] - ir);
    }
    int p = f - nS;
    if (p >= n) ++p;  // skip the self index
    return (l[n] - l[p] + cplx(0.0, 1.0)) / (l[n] - l[p] - cplx(0.0, 1.0));
  };
  auto tracked_log = [&](const std::vector<cplx>& l, int n, int f, bool update) -> cplx {
    cplx z = factor_value(l, n, f);
    double a = std::arg(z);
    double prev = arg_track[n][f];
    a += 2.0 * pi * std::round((prev - a) / (2.0 * pi));
    if (update) arg_track[n][f] = a;
    return cplx(std::log(std::abs(z)), a);
  };
  auto G_tracked = [&](const std::vector<cplx>& l, int n, bool update) -> cplx {
    cplx acc = 0.0;
    for (int f = 0; f < n_factors; ++f) {
      double weight = (f < nS)
                          ? static_cast<double>(spec.repeats * spec.sea_sites[f])
                          : -1.0;
      acc += weight * tracked_log(l, n, f, update);
    }
    return acc;
  };

  // initialize the tracker and freeze the branch integers at the seeds
  for (int n = 0; n < M; ++n)
    for (int f = 0; f < n_factors; ++f)
      arg_track[n][f] = std::arg(factor_value(seeds, n, f));
  std::vector<double> branch(M);
  for (int n = 0; n < M; ++n)
    branch[n] = 2.0 * pi * std::round(G_tracked(seeds, n, false).imag() / (2.0 * pi));

  std::vector<cplx> l = std::move(seeds);
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    Eigen::VectorXcd F(M);
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(M, M);
    for (int n = 0; n < M; ++n) {
      F(n) = G_tracked(l, n, true) - cplx(0.0, branch[n]);
      for (int j = 1; j <= nS; ++j)
        J(n, n) += static_cast<double>(spec.repeats * spec.sea_sites[j - 1]) *
                   dlog_e(l[n], spec.sea_doubled(j));
      for (int p = 0; p < M; ++p) {
        if (p == n) continue;
        cplx d = dlog_e(l[n] - l[p], 2);
        J(n, n) -= d;
        J(n, p) += d;
      }
    }
    Eigen::VectorXcd step = J.partialPivLu().solve(F);
    double step_norm = step.cwiseAbs().maxCoeff();
    if (!std::isfinite(step_norm)) throw numeric_error("solve_bethe: Newton step diverged");
    // keep single-step argument motion well below pi so the unwrapping stays
    // locked onto the right sheet
    double damp = std::min(1.0, 0.35 / std::max(step_norm, 0.35));
    for (int n = 0; n < M; ++n) l[n] -= damp * step(n);

    check_poles(spec, l, opts.pole_tol);
    if (step_norm < 1e-13) break;
  }

  double res = 0.0;
  for (cplx r : bethe_residual(spec, l)) res = std::max(res, std::abs(r));
  if (res > opts.target_residual)
    throw numeric_error("solve_bethe: did not converge (residual " +
                        std::to_string(res) + ")");
  for (int a = 0; a < M; ++a)
    for (int b = a + 1; b < M; ++b)
      if (std::abs(l[a] - l[b]) < opts.collision_tol)
        throw numeric_error("solve_bethe: collided roots");

  std::sort(l.begin(), l.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  BetheRoots out;
  out.roots = std::move(l);
  out.M = M;
  return out;
}

cplx tau_eigenvalue(const ChainSpec& spec, Spin s, cplx u, const std::vector<cplx>& roots) {
  const int s2 = s.doubled;

  // pole guard: the alpha-term denominators and the C_alpha denominators
  auto near = [](cplx z) { return std::abs(z) < 1e-9; };
  for (int alpha = 0; alpha <= s2; ++alpha)
    for (const cplx& l : roots) {
      if (near(u - l + cplx(0.0, alpha - 0.5 * s2 + 1.0)) ||
          near(u - l + cplx(0.0, alpha - 0.5 * s2)))
        throw numeric_error("tau_eigenvalue: u at a displayed pole");
    }

  cplx tau = 0.0;
  for (int alpha = 0; alpha <= s2; ++alpha) {
    // C_alpha
    cplx C = 1.0;
    if (alpha < s2) {
      for (int k = alpha; k <= s2 - 1; ++k)
        for (int j = 1; j <= spec.num_seas(); ++j) {
          int sp2 = spec.sea_doubled(j);
          int exponent = spec.repeats * spec.sea_sites[j - 1];
          cplx num = u + cplx(0.0, k - 0.5 * s2 - 0.5 * sp2 + 1.0);
          cplx den = u + cplx(0.0, k - 0.5 * s2 + 0.5 * sp2 + 1.0);
          if (near(den)) throw numeric_error("tau_eigenvalue: u at a C_alpha pole");
          C *= std::pow(num / den, exponent);
        }
    }
    cplx prod = 1.0;
    for (const cplx& l : roots) {
      cplx num = (u - l + cplx(0.0, 0.5 * s2 + 1.0)) * (u - l - cplx(0.0, 0.5 * s2));
      cplx den = (u - l + cplx(0.0, alpha - 0.5 * s2 + 1.0)) *
                 (u - l + cplx(0.0, alpha - 0.5 * s2));
      prod *= num / den;
    }
    tau += C * prod;
  }
  return tau;
}

EnergyMomentum energy_momentum(const ChainSpec& spec, const std::vector<cplx>& roots) {
  check_poles(spec, roots, 1e-10);
  EnergyMomentum out;
  for (int j = 1; j <= spec.num_seas(); ++j) {
    int s2 = spec.sea_doubled(j);
    double s = 0.5 * s2;
    cplx E = 0.0;
    for (const cplx& l : roots) E -= 2.0 * s / (l * l + s * s);
    if (std::abs(E.imag()) > 1e-9)
      throw numeric_error("energy_momentum: imaginary energy residue (unphysical roots)");
    out.E[s2] = E.real();
  }
  cplx p_acc = 0.0;
  for (int j = 1; j <= spec.num_seas(); ++j) {
    int s2 = spec.sea_doubled(j);
    double rho = to_double(spec.rho[j - 1]);
    for (const cplx& l : roots)
      p_acc += cplx(0.0, 1.0) * rho * log_e(l, s2);
  }
  if (roots.size() > 0 && std::abs(p_acc.imag()) > 1e-9)
    throw numeric_error("energy_momentum: imaginary momentum residue");
  const double window = 2.0 * pi / spec.L0;
  double p = std::fmod(p_acc.real(), window);
  if (p < 0) p += window;
  if (p >= window) p -= window;
  out.p = p;
  return out;
}

Rational total_spin(const ChainSpec& spec, int M) {
  return spec.highest_spin() - Rational(M);
}

std::string roots_to_json(const std::vector<cplx>& roots) {
  nlohmann::json j = nlohmann::json::array();
  for (const cplx& r : roots) j.push_back({r.real(), r.imag()});
  return j.dump();
}

std::vector<cplx> roots_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<cplx> out;
  for (const auto& item : j) {
    if (!item.is_array() || item.size() != 2)
      throw domain_error("roots JSON: expected [re, im] pairs");
    out.emplace_back(item[0].get<double>(), item[1].get<double>());
  }
  return out;
}

std::vector<ConstructedState> construct_states(const ChainSpec& spec, int M) {
  std::vector<ConstructedState> out;
  if (M == 0) {
    ConstructedState st;
    st.M = 0;
    st.label = "pseudo-vacuum";
    out.push_back(st);
    return out;
  }

  const auto labels = enumerate_states(spec, M);
  // deviation factors applied to the string imaginary offsets; several seeds
  // per state because exact strings can deviate strongly at small L
  const double deviations[] = {0.9, 0.7, 1.2, 0.55, 1.45};

  for (const auto& lab : labels) {
    std::vector<double> centers;
    try {
      centers = solve_string_centers(spec, lab.config, lab.Q);
    } catch (const numeric_error&) {
      continue;  // no real-center solution from this Q set
    }
    bool done = false;
    for (double dev : deviations) {
      if (done) break;
      auto seeds = expand_string_seeds(lab.config, centers, dev);
      try {
        BetheRoots roots = solve_bethe(spec, M, seeds);
        // skip duplicates (different seeds may land in one basin)
        bool dup = false;
        for (const auto& prev : out) {
          if (prev.M != M || prev.roots.roots.size() != roots.roots.size()) continue;
          double dist = 0.0;
          for (size_t i = 0; i < roots.roots.size(); ++i)
            dist = std::max(dist, std::abs(prev.roots.roots[i] - roots.roots[i]));
          if (dist < 1e-7) { dup = true; break; }
        }
        if (dup) { done = true; break; }
        ConstructedState st;
        st.roots = std::move(roots);
        st.M = M;
        st.label = lab.describe();
        out.push_back(std::move(st));
        done = true;
      } catch (const numeric_error&) {
        continue;
      }
    }
  }
  return out;
}

}  // namespace betheforge

#include "betheforge/strings.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

namespace betheforge {

int StringConfig::total_roots() const {
  int m = 0;
  for (const auto& [n2, count] : nu) {
    if (n2 <= 0 || count < 0) throw domain_error("StringConfig: bad entry");
    m += n2 * count;
  }
  return m;
}

double phi_fn(int r, double lambda) {
  if (r <= 0) return 0.0;
  return 2.0 * std::atan(2.0 * lambda / r);
}

double phi_prime_fn(int r, double lambda) {
  if (r <= 0) return 0.0;
  return 4.0 * r / (4.0 * lambda * lambda + static_cast<double>(r) * r);
}

double Phi_pair(int p2, int m2, double lambda) {
  double v = phi_fn(p2 + m2, lambda) + phi_fn(std::abs(p2 - m2), lambda);
  for (int idx = std::abs(p2 - m2) + 2; idx <= p2 + m2 - 2; idx += 2)
    v += 2.0 * phi_fn(idx, lambda);
  return v;
}

double Psi_pair(int p2, int m2, double lambda) {
  double v = phi_prime_fn(p2 + m2, lambda) + phi_prime_fn(std::abs(p2 - m2), lambda);
  for (int idx = std::abs(p2 - m2) + 2; idx <= p2 + m2 - 2; idx += 2)
    v += 2.0 * phi_prime_fn(idx, lambda);
  return v;
}

double Phi_driving(int p, int m2, double lambda) {
  double v = 0.0;
  for (int idx = std::abs(p - m2 + 1) + 2; idx <= p + m2 - 1; idx += 2)
    v += phi_fn(idx, lambda);
  if (p > m2 - 1) v += phi_fn(p - m2 + 1, lambda);
  return v;
}

double Psi_driving(int p, int m2, double lambda) {
  double v = 0.0;
  for (int idx = std::abs(p - m2 + 1) + 2; idx <= p + m2 - 1; idx += 2)
    v += phi_prime_fn(idx, lambda);
  if (p > m2 - 1) v += phi_prime_fn(p - m2 + 1, lambda);
  return v;
}

namespace {

double hat_term(int idx, double t) {
  if (idx <= 0) return 0.0;  // phi_0 convention carries over to transforms
  return std::exp(-0.5 * idx * t);
}

}  // namespace

double Psi_pair_hat(int p2, int m2, double momentum) {
  double t = std::abs(momentum);
  double v = hat_term(p2 + m2, t) + hat_term(std::abs(p2 - m2), t);
  for (int idx = std::abs(p2 - m2) + 2; idx <= p2 + m2 - 2; idx += 2)
    v += 2.0 * hat_term(idx, t);
  return v;
}

double Psi_driving_hat(int p, int m2, double momentum) {
  double t = std::abs(momentum);
  double v = 0.0;
  for (int idx = std::abs(p - m2 + 1) + 2; idx <= p + m2 - 1; idx += 2)
    v += hat_term(idx, t);
  if (p > m2 - 1) v += hat_term(p - m2 + 1, t);
  return v;
}

PhiKernelValues phi_kernels(int p, int m2, double lambda) {
  if (p <= 0 || m2 <= 0) throw domain_error("phi_kernels: indices must be positive");
  return PhiKernelValues{Phi_driving(p, m2, lambda), Phi_pair(p, m2, lambda),
                         Psi_driving(p, m2, lambda), Psi_pair(p, m2, lambda)};
}

Valence valence(const ChainSpec& spec, const StringConfig& config, int m2) {
  if (m2 <= 0) throw domain_error("valence: m must be positive");
  long long site_sum = 0;
  for (Spin s : spec.motif) site_sum += std::min(m2, s.doubled);
  site_sum *= spec.repeats;
  long long string_sum = 0;
  for (const auto& [n2, count] : config.nu)
    string_sum += static_cast<long long>(std::min(m2, n2)) * count;
  int nu_m = 0;
  if (auto it = config.nu.find(m2); it != config.nu.end()) nu_m = it->second;
  Valence v;
  v.P_m = site_sum - 2 * string_sum + nu_m;
  v.Q_max_doubled = static_cast<int>(v.P_m - 1);
  return v;
}

namespace {

struct EquationIndex {
  int m2;
  int k;  // 1-based within the 2m-string family
};

std::vector<EquationIndex> equation_order(const StringConfig& config) {
  std::vector<EquationIndex> order;
  for (const auto& [m2, count] : config.nu)
    for (int k = 1; k <= count; ++k) order.push_back({m2, k});
  return order;
}

}  // namespace

std::vector<double> log_bethe_residual(const ChainSpec& spec, const StringConfig& config,
                                       const std::vector<double>& centers,
                                       const QuantumNumbers& Q) {
  auto order = equation_order(config);
  if (centers.size() != order.size())
    throw domain_error("log_bethe_residual: one center per string required");
  std::vector<double> res(order.size());
  for (size_t i = 0; i < order.size(); ++i) {
    auto [m2, k] = order[i];
    auto qit = Q.Q2.find({m2, k});
    if (qit == Q.Q2.end()) throw domain_error("log_bethe_residual: missing quantum number");
    double v = -pi * qit->second;  // -2 pi Q with Q = Q2/2
    for (int j = 1; j <= spec.num_seas(); ++j)
      v += static_cast<double>(spec.repeats * spec.sea_sites[j - 1]) *
           Phi_driving(spec.sea_doubled(j), m2, centers[i]);
    for (size_t l = 0; l < order.size(); ++l)
      v -= Phi_pair(order[l].m2, m2, centers[i] - centers[l]);
    res[i] = v;
  }
  return res;
}

std::vector<double> solve_string_centers(const ChainSpec& spec, const StringConfig& config,
                                         const QuantumNumbers& Q) {
  auto order = equation_order(config);
  const int n = static_cast<int>(order.size());
  if (n == 0) return {};

  // seed each center from its driving term alone (monotone odd function)
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    auto [m2, k] = order[i];
    double q = 0.5 * Q.Q2.at({m2, k});
    auto g = [&](double l) {
      double v = 0.0;
      for (int j = 1; j <= spec.num_seas(); ++j)
        v += static_cast<double>(spec.repeats * spec.sea_sites[j - 1]) *
             Phi_driving(spec.sea_doubled(j), m2, l);
      return v - 2.0 * pi * q;
    };
    double lo = -60.0, hi = 60.0;
    if (g(lo) > 0)
      x[i] = lo;
    else if (g(hi) < 0)
      x[i] = hi;
    else {
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) < 0 ? lo : hi) = mid;
      }
      x[i] = 0.5 * (lo + hi);
    }
  }

  for (int iter = 0; iter < 200; ++iter) {
    Eigen::VectorXd F = Eigen::Map<Eigen::VectorXd>(
        log_bethe_residual(spec, config, x, Q).data(), n);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      auto [m2, k] = order[i];
      for (int j = 1; j <= spec.num_seas(); ++j)
        J(i, i) += static_cast<double>(spec.repeats * spec.sea_sites[j - 1]) *
                   Psi_driving(spec.sea_doubled(j), m2, x[i]);
      for (int l = 0; l < n; ++l) {
        double d = Psi_pair(order[l].m2, m2, x[i] - x[l]);
        J(i, i) -= d;
        J(i, l) += d;
      }
    }
    Eigen::VectorXd step = J.partialPivLu().solve(F);
    if (!step.allFinite()) throw numeric_error("solve_string_centers: singular Jacobian");
    double norm = step.cwiseAbs().maxCoeff();
    double damp = std::min(1.0, 1.0 / std::max(norm, 1.0));
    for (int i = 0; i < n; ++i) x[i] -= damp * step(i);
    if (norm < 1e-12) break;
  }
  auto res = log_bethe_residual(spec, config, x, Q);
  double worst = 0.0;
  for (double r : res) worst = std::max(worst, std::abs(r));
  if (worst > 1e-10)
    throw numeric_error("solve_string_centers: no convergence (residual " +
                        std::to_string(worst) + ")");
  return x;
}

std::vector<cplx> expand_string_seeds(const StringConfig& config,
                                      const std::vector<double>& centers,
                                      double deviation) {
  auto order = equation_order(config);
  if (centers.size() != order.size())
    throw domain_error("expand_string_seeds: one center per string required");
  std::vector<cplx> roots;
  for (size_t i = 0; i < order.size(); ++i) {
    int m2 = order[i].m2;
    for (int a2 = -(m2 - 1); a2 <= m2 - 1; a2 += 2)
      roots.emplace_back(centers[i], 0.5 * a2 * deviation);
  }
  return roots;
}

BigInt binomial(long long n, long long k) {
  if (k < 0 || n < 0 || n < k) return 0;
  BigInt num = 1, den = 1;
  for (long long i = 0; i < k; ++i) {
    num *= (n - i);
    den *= (i + 1);
  }
  return num / den;
}

BigInt binomial_general(long long n, long long k) {
  if (k < 0) return 0;
  BigInt num = 1, den = 1;
  for (long long i = 0; i < k; ++i) {
    num *= BigInt(n - i);
    den *= (i + 1);
  }
  return num / den;  // falling factorial of integers is divisible by k!
}

namespace {

// All string configurations with total root count M: partitions of M into
// positive integer parts (doubled lengths), largest part first.
void partitions_rec(int remaining, int max_part, StringConfig& current,
                    const std::function<void(const StringConfig&)>& emit) {
  if (remaining == 0) {
    emit(current);
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    current.nu[part] += 1;
    partitions_rec(remaining - part, part, current, emit);
    if (--current.nu[part] == 0) current.nu.erase(part);
  }
}

BigInt config_term(const ChainSpec& spec, const StringConfig& config) {
  BigInt term = 1;
  for (const auto& [m2, count] : config.nu) {
    Valence v = valence(spec, config, m2);
    term *= binomial(v.P_m, count);
    if (term == 0) break;
  }
  return term;
}

long long prefactor(const ChainSpec& spec, int M) {
  Rational s0 = spec.highest_spin();
  long long s0_doubled = (Rational(2) * s0).numerator();  // integral by construction
  return s0_doubled - 2LL * M + 1;
}

}  // namespace

BigInt count_states_serial(const ChainSpec& spec, int M) {
  if (M < 0) throw domain_error("count_states: M must be >= 0");
  long long pref = prefactor(spec, M);
  if (pref <= 0) return 0;  // M > S_0
  if (M == 0) return BigInt(pref);
  BigInt sum = 0;
  StringConfig current;
  partitions_rec(M, M, current,
                 [&](const StringConfig& c) { sum += config_term(spec, c); });
  return sum * pref;
}

BigInt count_states(const ChainSpec& spec, int M) {
  if (M < 0) throw domain_error("count_states: M must be >= 0");
  long long pref = prefactor(spec, M);
  if (pref <= 0) return 0;
  if (M == 0) return BigInt(pref);

  // materialize the configurations, then evaluate the binomial products in
  // parallel (each term is independent)
  std::vector<StringConfig> configs;
  StringConfig current;
  partitions_rec(M, M, current,
                 [&](const StringConfig& c) { configs.push_back(c); });

  BigInt sum = 0;
#pragma omp parallel
  {
    BigInt local = 0;
#pragma omp for schedule(dynamic, 16) nowait
    for (long long i = 0; i < static_cast<long long>(configs.size()); ++i)
      local += config_term(spec, configs[i]);
#pragma omp critical
    sum += local;
  }
  return sum * pref;
}

CompletenessResult completeness_check(const ChainSpec& spec) {
  Rational s0 = spec.highest_spin();
  long long s0_doubled = (Rational(2) * s0).numerator();
  int m_max = static_cast<int>(s0_doubled / 2);

  CompletenessResult out;
  out.sum = 0;
  for (int M = 0; M <= m_max; ++M) out.sum += count_states(spec, M);

  out.hilbert_dim = 1;
  for (int j = 1; j <= spec.num_seas(); ++j) {
    int exponent = spec.repeats * spec.sea_sites[j - 1];  // L rho_j
    BigInt base = spec.sea_doubled(j) + 1;
    for (int e = 0; e < exponent; ++e) out.hilbert_dim *= base;
  }
  out.equal = (out.sum == out.hilbert_dim);
  return out;
}

bool series_identity_check(const std::map<int, long long>& b, int M_max) {
  if (M_max < 0 || M_max > 20) throw domain_error("series_identity_check: M_max in [0, 20]");
  auto it1 = b.find(1);
  if (it1 == b.end() || it1->second >= 0)
    throw domain_error("series_identity_check: admissible sets have b_1 < 0");

  // series side: (1-x) prod_n (1-x^n)^{b_n}, truncated at M_max
  std::vector<BigInt> poly(M_max + 1, 0);
  poly[0] = 1;
  if (M_max >= 1) poly[1] = -1;
  auto multiply = [&](const std::vector<BigInt>& factor) {
    std::vector<BigInt> out(M_max + 1, 0);
    for (int i = 0; i <= M_max; ++i) {
      if (poly[i] == 0) continue;
      for (int j = 0; i + j <= M_max; ++j) {
        if (factor[j] == 0) continue;
        out[i + j] += poly[i] * factor[j];
      }
    }
    poly = std::move(out);
  };
  for (const auto& [n, bn] : b) {
    if (n < 1) throw domain_error("series_identity_check: indices start at 1");
    if (bn == 0) continue;
    std::vector<BigInt> factor(M_max + 1, 0);
    if (bn > 0) {
      for (long long k = 0; n * k <= M_max; ++k)
        factor[n * k] = ((k % 2) ? -1 : 1) * binomial(bn, k);
    } else {
      for (long long k = 0; n * k <= M_max; ++k)
        factor[n * k] = binomial(-bn + k - 1, k);
    }
    multiply(factor);
  }

  // direct side with generalized binomials
  auto b_at = [&](int j) -> long long {
    auto it = b.find(j);
    return it == b.end() ? 0 : it->second;
  };
  for (int M = 0; M <= M_max; ++M) {
    BigInt direct = 0;
    StringConfig current;
    if (M == 0) {
      direct = 1;
    } else {
      partitions_rec(M, M, current, [&](const StringConfig& c) {
        BigInt term = 1;
        for (const auto& [m2, count] : c.nu) {
          // A_m(nu, b) in doubled indices: 4(n-m) = 2(n2-m2)
          long long A = 0;
          for (int j = 1; j <= m2; ++j) A -= static_cast<long long>(m2 - j + 1) * b_at(j);
          A -= 2LL * M;
          for (const auto& [n2, cnt] : c.nu)
            if (n2 > m2) A += 2LL * (n2 - m2) * cnt;
          A += count;
          term *= binomial_general(A, count);
        }
        direct += term;
      });
    }
    if (direct != poly[M]) return false;
  }
  return true;
}

StringConfig vacuum_config(const ChainSpec& spec) {
  StringConfig config;
  for (int j = 1; j <= spec.num_seas(); ++j) {
    int l_rho = spec.repeats * spec.sea_sites[j - 1];
    if (l_rho % 2 != 0)
      throw domain_error("vacuum_config: L rho_s must be even for spin " +
                         Spin(spec.sea_doubled(j)).str());
    if (l_rho > 0) config.nu[spec.sea_doubled(j)] = l_rho / 2;
  }
  return config;
}

std::string BetheStateLabel::describe() const {
  std::string out = "nu={";
  bool first = true;
  for (const auto& [m2, count] : config.nu) {
    if (!first) out += " ";
    first = false;
    out += Spin(m2).str() + ":" + std::to_string(count);
  }
  out += "} Q={";
  first = true;
  for (const auto& [key, q2] : Q.Q2) {
    if (!first) out += " ";
    first = false;
    out += (q2 % 2 == 0) ? std::to_string(q2 / 2) : (std::to_string(q2) + "/2");
  }
  out += "}";
  return out;
}

std::vector<BetheStateLabel> enumerate_states(const ChainSpec& spec, int M, int max_states) {
  std::vector<BetheStateLabel> out;
  if (M <= 0) return out;

  std::vector<StringConfig> configs;
  StringConfig current;
  partitions_rec(M, M, current,
                 [&](const StringConfig& c) { configs.push_back(c); });

  for (const StringConfig& c : configs) {
    // admissible quantum-number lattices per string family
    bool feasible = true;
    std::vector<std::pair<int, std::vector<int>>> lattices;  // m2 -> allowed Q2
    for (const auto& [m2, count] : c.nu) {
      Valence v = valence(spec, c, m2);
      if (v.P_m < count) {
        feasible = false;
        break;
      }
      std::vector<int> allowed;
      for (int q2 = -v.Q_max_doubled; q2 <= v.Q_max_doubled; q2 += 2) allowed.push_back(q2);
      lattices.emplace_back(m2, std::move(allowed));
    }
    if (!feasible) continue;

    // cartesian product of k-combinations over the families
    std::vector<std::vector<std::vector<int>>> choices;  // per family: list of Q2-subsets
    for (auto& [m2, allowed] : lattices) {
      int count = c.nu.at(m2);
      std::vector<std::vector<int>> subsets;
      std::vector<int> idx(count);
      for (int i = 0; i < count; ++i) idx[i] = i;
      while (true) {
        std::vector<int> subset;
        for (int i : idx) subset.push_back(allowed[i]);
        subsets.push_back(subset);
        int pos = count - 1;
        while (pos >= 0 && idx[pos] == static_cast<int>(allowed.size()) - count + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < count; ++i) idx[i] = idx[i - 1] + 1;
      }
      choices.push_back(std::move(subsets));
    }

    std::vector<size_t> cursor(choices.size(), 0);
    while (true) {
      BetheStateLabel label;
      label.config = c;
      for (size_t f = 0; f < choices.size(); ++f) {
        int m2 = lattices[f].first;
        const auto& subset = choices[f][cursor[f]];
        for (size_t k = 0; k < subset.size(); ++k)
          label.Q.Q2[{m2, static_cast<int>(k) + 1}] = subset[k];
      }
      out.push_back(std::move(label));
      if (static_cast<int>(out.size()) >= max_states) return out;
      size_t f = 0;
      for (; f < choices.size(); ++f) {
        if (++cursor[f] < choices[f].size()) break;
        cursor[f] = 0;
      }
      if (f == choices.size()) break;
    }
  }
  return out;
}

}  // namespace betheforge

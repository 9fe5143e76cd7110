#include "betheforge/rsos.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "betheforge/special_functions.hpp"

namespace betheforge {

double RSOSSpace::hbar() const { return pi / restriction(); }

namespace {

bool a_step_ok(const RSOSSpace& s, int from, int to) {
  int jump = s.sbar2 - 1;
  int diff = to - from;
  if (std::abs(diff) > jump || ((diff + jump) % 2) != 0) return false;
  int sum = from + to;
  return sum >= s.sbar2 - 2 && sum <= s.sbar2 + 2;
}

bool b_step_ok(int from, int to) { return std::abs(to - from) == 1; }

bool height_ok(const RSOSSpace& s, int h) { return h >= 0 && h <= s.height_max(); }

}  // namespace

bool path_valid(const RSOSSpace& space, const RSOSPath& path) {
  if (static_cast<int>(path.a.size()) != space.D + 1) return false;
  if (static_cast<int>(path.b.size()) != space.Dp + 1) return false;
  for (int h : path.a)
    if (!height_ok(space, h)) return false;
  for (int h : path.b)
    if (!height_ok(space, h)) return false;
  if (path.a.front() != 0 || path.b.back() != 0) return false;
  if (path.a.back() != path.b.front()) return false;
  for (int i = 0; i + 1 <= space.D; ++i)
    if (!a_step_ok(space, path.a[i], path.a[i + 1])) return false;
  for (int i = 0; i + 1 <= space.Dp; ++i)
    if (!b_step_ok(path.b[i], path.b[i + 1])) return false;
  return true;
}

std::vector<RSOSPath> enumerate_paths(const RSOSSpace& space) {
  if (space.sbar2 < 1) throw domain_error("RSOSSpace: sbar must be >= 1/2");
  if (space.D < 0 || space.Dp < 0 || space.D % 2 || space.Dp % 2)
    throw domain_error("RSOSSpace: D and D' must be even and non-negative");
  if (space.D + space.Dp > 14)
    throw domain_error("enumerate_paths: guarded at D + D' <= 14");

  std::vector<RSOSPath> out;
  RSOSPath path;
  path.a.assign(space.D + 1, 0);
  path.b.assign(space.Dp + 1, 0);

  std::function<void(int)> walk_b = [&](int i) {
    if (i == space.Dp) {
      if (path.b[space.Dp] == 0) out.push_back(path);
      return;
    }
    for (int h = 0; h <= space.height_max(); ++h) {
      if (!b_step_ok(path.b[i], h)) continue;
      path.b[i + 1] = h;
      walk_b(i + 1);
    }
  };
  std::function<void(int)> walk_a = [&](int i) {
    if (i == space.D) {
      path.b[0] = path.a[space.D];
      walk_b(0);
      return;
    }
    for (int h = 0; h <= space.height_max(); ++h) {
      if (!a_step_ok(space, path.a[i], h)) continue;
      path.a[i + 1] = h;
      walk_a(i + 1);
    }
  };
  walk_a(0);
  return out;
}

BigInt count_paths(const RSOSSpace& space) {
  if (space.sbar2 < 1) throw domain_error("RSOSSpace: sbar must be >= 1/2");
  if (space.D < 0 || space.Dp < 0 || space.D % 2 || space.Dp % 2)
    throw domain_error("RSOSSpace: D and D' must be even and non-negative");

  const int H = space.height_max();
  std::vector<BigInt> layer(H + 1, 0);
  layer[0] = 1;
  for (int i = 0; i < space.D; ++i) {
    std::vector<BigInt> next(H + 1, 0);
    for (int from = 0; from <= H; ++from) {
      if (layer[from] == 0) continue;
      for (int to = 0; to <= H; ++to)
        if (a_step_ok(space, from, to)) next[to] += layer[from];
    }
    layer.swap(next);
  }
  for (int i = 0; i < space.Dp; ++i) {
    std::vector<BigInt> next(H + 1, 0);
    for (int from = 0; from <= H; ++from) {
      if (layer[from] == 0) continue;
      for (int to = 0; to <= H; ++to)
        if (b_step_ok(from, to)) next[to] += layer[from];
    }
    layer.swap(next);
  }
  return layer[0];
}

BigInt zj_formula(int Dsum, int sbar2) {
  if (Dsum < 0 || Dsum % 2) throw domain_error("zj_formula: Dsum must be even");
  if (sbar2 < 1) throw domain_error("zj_formula: sbar must be >= 1/2");
  if (Dsum > 60) throw domain_error("zj_formula: closed form evaluated up to Dsum = 60");
  const long double restr = sbar2 + 2;
  long double sum = 0.0L;
  for (int q = 1; q <= sbar2 + 1; ++q) {
    long double angle = q * static_cast<long double>(pi) / restr;
    long double s = std::sin(angle);
    sum += s * s * std::pow(std::cos(angle), Dsum);
  }
  long double value = std::pow(2.0L, Dsum) / (0.5L * sbar2 + 1.0L) * sum;
  long double nearest = std::llround(value);
  long double rel = std::abs(value - nearest) / std::max(1.0L, std::abs(value));
  if (rel > 1e-6) throw numeric_error("zj_formula: value is not integral");
  if (rel > 1e-9) throw numeric_error("zj_formula: integrality beyond rounding guard");
  return BigInt(static_cast<long long>(nearest));
}

BigInt zL_formula(int D) {
  if (D < 0) throw domain_error("zL_formula: D must be >= 0");
  return BigInt(1) << D;
}

namespace {

std::vector<SweepCell> sweep_cells(int max_sum, int max_sbar2) {
  std::vector<SweepCell> cells;
  for (int sbar2 = 1; sbar2 <= max_sbar2; ++sbar2)
    for (int D = 0; D <= max_sum; D += 2)
      for (int Dp = 0; D + Dp <= max_sum; Dp += 2)
        cells.push_back({D, Dp, sbar2, 0, 0, false});
  return cells;
}

void fill_cell(SweepCell& cell) {
  RSOSSpace space{cell.D, cell.Dp, cell.sbar2};
  cell.count = count_paths(space);
  cell.formula = zj_formula(cell.D + cell.Dp, cell.sbar2);
  cell.match = (cell.count == cell.formula);
}

}  // namespace

std::vector<SweepCell> conjecture_sweep(int max_sum, int max_sbar2) {
  std::vector<SweepCell> cells = sweep_cells(max_sum, max_sbar2);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(cells.size()); ++i) fill_cell(cells[i]);
  return cells;
}

std::vector<SweepCell> conjecture_sweep_serial(int max_sum, int max_sbar2) {
  std::vector<SweepCell> cells = sweep_cells(max_sum, max_sbar2);
  for (auto& cell : cells) fill_cell(cell);
  return cells;
}

namespace {

// A_n = 4 sum_s min(n,s) mu_s - 4 sum_r min(n,r) nu_r, doubled arithmetic.
long long A_value(const std::map<int, long long>& mu,
                  const std::map<int, long long>& nu_tilde, int n2) {
  long long acc = 0;
  for (const auto& [s2, m] : mu) acc += 2LL * std::min(n2, s2) * m;
  for (const auto& [r2, n] : nu_tilde) acc -= 2LL * std::min(n2, r2) * n;
  return acc;
}

}  // namespace

HoleLedger hole_ledger(const ChainSpec& spec, const std::map<int, int>& D_by_sea,
                       const std::map<int, long long>& nu_tilde) {
  const int nS = spec.num_seas();
  HoleLedger ledger;

  for (int j = 1; j <= nS; ++j) {
    int s2 = spec.sea_doubled(j);
    auto it = D_by_sea.find(s2);
    int D = (it == D_by_sea.end()) ? 0 : it->second;
    if (D < 0 || D % 2) throw domain_error("hole_ledger: hole counts must be even");
    ledger.D[s2] = D;
  }
  for (const auto& [key, val] : D_by_sea)
    if (spec.sea_index(key) == 0)
      throw domain_error("hole_ledger: hole key " + Spin(key).str() + " is not a sea");
  for (const auto& [r2, count] : nu_tilde) {
    if (count < 0) throw domain_error("hole_ledger: negative string count");
    if (spec.sea_index(r2) != 0)
      throw domain_error("hole_ledger: new strings must live in the gap sets");
    if (count > 0) ledger.nu_tilde[r2] = count;
  }

  // mu solves 2 sum_{s'} min(s2, s'2) mu_{s'} = D_s + 2 sum_r min(s2, r2) nu_r
  Eigen::MatrixXd M(nS, nS);
  Eigen::VectorXd rhs(nS);
  for (int i = 1; i <= nS; ++i) {
    int si2 = spec.sea_doubled(i);
    for (int k = 1; k <= nS; ++k)
      M(i - 1, k - 1) = 2.0 * std::min(si2, spec.sea_doubled(k));
    double r = ledger.D[si2];
    for (const auto& [r2, count] : ledger.nu_tilde)
      r += 2.0 * std::min(si2, r2) * count;
    rhs(i - 1) = r;
  }
  Eigen::VectorXd mu = M.partialPivLu().solve(rhs);
  for (int i = 1; i <= nS; ++i) {
    double v = mu(i - 1);
    long long rounded = std::llround(v);
    if (std::abs(v - rounded) > 1e-9)
      throw domain_error("hole_ledger: infeasible configuration (fractional mu)");
    ledger.mu[spec.sea_doubled(i)] = rounded;
  }

  // feasibility: A_r >= 0 and even across the finite gaps and the support of
  // the top gap
  int top_r2 = spec.sea_doubled(nS) + 1;
  for (const auto& [r2, count] : ledger.nu_tilde) top_r2 = std::max(top_r2, r2 + 1);
  for (int j = 0; j < nS; ++j)
    for (int r2 : spec.gap_set(j)) {
      long long A = A_value(ledger.mu, ledger.nu_tilde, r2);
      if (A < 0) throw domain_error("hole_ledger: infeasible (negative A at r=" +
                                    Spin(r2).str() + ")");
      if (A % 2) throw domain_error("hole_ledger: infeasible (odd A at r=" + Spin(r2).str() + ")");
      ledger.A[r2] = A;
    }
  for (int r2 = spec.sea_doubled(nS) + 1; r2 <= top_r2; ++r2) {
    long long A = A_value(ledger.mu, ledger.nu_tilde, r2);
    if (A < 0) throw domain_error("hole_ledger: infeasible (negative A at r=" +
                                  Spin(r2).str() + ")");
    if (A % 2) throw domain_error("hole_ledger: infeasible (odd A at r=" + Spin(r2).str() + ")");
    ledger.A[r2] = A;
  }

  // total spin from the top-gap content
  int sL2 = spec.sea_doubled(nS);
  Rational S(ledger.D[sL2], 2);
  for (const auto& [r2, count] : ledger.nu_tilde)
    if (r2 > sL2) S -= Rational(r2 - sL2) * Rational(count);
  if (S < Rational(0)) throw domain_error("hole_ledger: infeasible (negative total spin)");
  ledger.S_total = S;

  // degeneracy: prod_{j=0}^{nS-1} paths(D_j; D_{j+1}; gap_j) * 2^{D_top}
  ledger.degeneracy = 1;
  for (int j = 0; j < nS; ++j) {
    int Dj = (j == 0) ? 0 : ledger.D[spec.sea_doubled(j)];
    int Djp = ledger.D[spec.sea_doubled(j + 1)];
    RSOSSpace space{Dj, Djp, spec.gap_doubled(j)};
    ledger.degeneracy *= count_paths(space);
  }
  ledger.degeneracy *= zL_formula(ledger.D[sL2]);
  return ledger;
}

std::map<int, long long> nu_from_A(const ChainSpec& spec, const HoleLedger& ledger) {
  auto A_at = [&](int n2) -> long long {
    if (n2 == 0) return 0;
    int j = spec.sea_index(n2);
    if (j != 0) return ledger.D.at(n2);  // convention A_s = D_s on the seas
    return A_value(ledger.mu, ledger.nu_tilde, n2);
  };
  std::map<int, long long> nu;
  int top = spec.sea_doubled(spec.num_seas()) + 1;
  for (const auto& [r2, count] : ledger.nu_tilde) top = std::max(top, r2);
  for (int r2 = 1; r2 <= top; ++r2) {
    if (spec.sea_index(r2) != 0) continue;
    long long second = A_at(r2 - 1) + A_at(r2 + 1) - 2 * A_at(r2);
    if (second % 2) throw numeric_error("nu_from_A: inversion parity violated");
    long long v = second / 2;
    if (v != 0) nu[r2] = v;
  }
  return nu;
}

HoleLedger validate_context(const ChainSpec& spec, const ExcitationContext& ctx) {
  std::map<int, int> D;
  for (const auto& [s2, rapidities] : ctx.holes)
    D[s2] = static_cast<int>(rapidities.size());
  std::map<int, long long> nu;
  for (const auto& [r2, centers] : ctx.new_strings)
    if (!centers.empty()) nu[r2] = static_cast<long long>(centers.size());
  return hole_ledger(spec, D, nu);
}

cplx boltzmann_weight(double hbar, int a, int b, int c, int d, cplx lambda) {
  if (!(hbar > 0.0 && hbar < pi))
    throw domain_error("boltzmann_weight: need 0 < hbar < pi");
  for (int h : {a, b, c, d}) {
    if (h < 0 || std::sin(hbar * (h + 1)) <= 1e-12)
      throw domain_error("boltzmann_weight: height outside the restriction window");
  }
  // plaquette edges all carry jump 1; non-adjacent faces have zero weight
  if (std::abs(a - b) != 1 || std::abs(d - c) != 1 || std::abs(a - d) != 1 ||
      std::abs(b - c) != 1)
    return 0.0;
  if ((a - c) % 2 != 0) throw numeric_error("boltzmann_weight: (a-c) parity violated");

  cplx w = (a == c) ? 1.0 : 0.0;
  if (b == d) {
    double sign = ((a - c) / 2 % 2 == 0) ? 1.0 : -1.0;
    cplx ratio = std::sinh(hbar * lambda) / std::sinh(hbar * (lambda - cplx(0.0, 1.0)));
    double root = std::sqrt(std::sin(hbar * (a + 1)) * std::sin(hbar * (c + 1)) /
                            (std::sin(hbar * (b + 1)) * std::sin(hbar * (d + 1))));
    w -= sign * ratio * root;
  }
  return w;
}

cplx fused_weight(double hbar, int top_left, int top_right, int bottom_left,
                  int bottom_right, cplx lambda, int jump) {
  if (jump < 0) throw domain_error("fused_weight: jump must be non-negative");
  if (jump == 0) return 1.0;  // the half-spin fused weight is trivial
  if (!(hbar > 0.0 && hbar < pi)) throw domain_error("fused_weight: need 0 < hbar < pi");
  int height_max = static_cast<int>(std::llround(pi / hbar)) - 2;
  if (std::abs(pi / hbar - (height_max + 2)) > 1e-9)
    throw domain_error("fused_weight: pi/hbar must be an integer restriction");
  for (int h : {top_left, top_right, bottom_left, bottom_right})
    if (h < 0 || h > height_max)
      throw domain_error("fused_weight: height outside the restriction window");

  // corner admissibility: vertical edges are single lines
  if (std::abs(top_left - bottom_left) != 1 || std::abs(top_right - bottom_right) != 1)
    return 0.0;
  if (std::abs(top_right - top_left) > jump ||
      ((top_right - top_left + jump) % 2) != 0)
    return 0.0;

  // The internal top path is not pinned by the defining sum (only the bottom
  // heights are summed); the value depends on the choice whenever jump >= 2.
  // The convention here is the canonical greedy path: unit steps toward
  // top_right, moving up first when a detour is needed.
  std::vector<int> top(jump + 1);
  top[0] = top_left;
  for (int i = 0; i < jump; ++i) {
    int remaining = jump - i - 1;
    bool placed = false;
    for (int step : {+1, -1}) {
      int cand = top[i] + step;
      if (cand < 0 || cand > height_max) continue;
      int dist = std::abs(top_right - cand);
      if (dist > remaining || ((remaining - dist) % 2) != 0) continue;
      top[i + 1] = cand;
      placed = true;
      break;
    }
    if (!placed) return 0.0;
  }

  // sum over internal bottom heights
  std::vector<int> bottom(jump + 1);
  bottom[0] = bottom_left;
  bottom[jump] = bottom_right;
  cplx total = 0.0;
  std::function<void(int, cplx)> recurse = [&](int n, cplx acc) {
    if (acc == cplx(0.0)) return;
    if (n == jump) {
      cplx w = boltzmann_weight(hbar, bottom[jump - 1], bottom[jump], top[jump],
                                top[jump - 1], lambda + cplx(0.0, 0.0));
      total += acc * w;
      return;
    }
    // factor n (1-based): W(top[n-1], top[n]; bottom[n-1], bottom[n] | lambda + i(n - jump))
    for (int h = 0; h <= height_max; ++h) {
      bottom[n] = h;
      cplx w = boltzmann_weight(hbar, bottom[n - 1], bottom[n], top[n], top[n - 1],
                                lambda + cplx(0.0, static_cast<double>(n - jump)));
      recurse(n + 1, acc * w);
    }
  };
  recurse(1, 1.0);
  return total;
}

namespace {

cplx kernel_K(int restriction, int index, double lambda) {
  return eval_K(KernelParams::from_doubled(restriction, index), lambda);
}

}  // namespace

cplx rsos_transfer_entry(RSOSTransferKind kind, const RSOSTransferContext& ctx,
                         const RSOSPath& bra, const RSOSPath& ket, cplx lambda) {
  const RSOSSpace& space = ctx.space;
  if (!path_valid(space, bra) || !path_valid(space, ket))
    throw domain_error("rsos_transfer_entry: invalid path");
  if (static_cast<int>(ctx.lam_a.size()) != space.D ||
      static_cast<int>(ctx.lam_b.size()) != space.Dp)
    throw domain_error("rsos_transfer_entry: inhomogeneity count mismatch");
  const double hbar = space.hbar();
  const int restriction = space.restriction();
  const int jump = space.sbar2 - 1;
  if (lambda.imag() != 0.0)
    throw domain_error("rsos_transfer_entry: spectral parameter must be real");

  if (kind == RSOSTransferKind::plain_aux) {
    if (space.Dp > 0 && (ctx.d < 1 || ctx.d > space.Dp))
      throw domain_error("rsos_transfer_entry: d out of range");
    cplx entry = 1.0;
    // normalization N^(j)
    for (int q = 1; q <= space.D; ++q)
      entry *= kernel_K(restriction, jump, ctx.lam_a[q - 1] - lambda.real());
    for (int q = 1; q <= space.Dp; ++q)
      entry *= kernel_K(restriction, 1, ctx.lam_b[q - 1] - lambda.real());
    // fused faces along the a-segment; the bra runs one step ahead,
    // a'_{D+1} = b'_1
    auto bra_a = [&](int i) -> int {
      return (i <= space.D) ? bra.a[i] : bra.b[i - space.D];
    };
    for (int q = 1; q <= space.D; ++q) {
      entry *= fused_weight(hbar, ket.a[q - 1], ket.a[q], bra_a(q), bra_a(q + 1),
                            lambda - ctx.lam_a[q - 1], jump);
      if (entry == cplx(0.0)) return entry;
    }
    // plain faces along the b-segment, skipping the particle's own rapidity
    for (int q = 1; q <= space.Dp - 1; ++q) {
      double lam = (q <= ctx.d - 1) ? ctx.lam_b[q - 1] : ctx.lam_b[q];
      // W(top: b_{q-1}, b_q ; bottom: b'_q, b'_{q+1})
      entry *= boltzmann_weight(hbar, bra.b[q], bra.b[q + 1], ket.b[q], ket.b[q - 1],
                                lambda - lam);
      if (entry == cplx(0.0)) return entry;
    }
    return entry;
  }

  // fused auxiliary space
  if (space.D < 1)
    throw domain_error("rsos_transfer_entry: fused_aux needs D >= 1");
  if (ctx.d < 1 || ctx.d > space.D)
    throw domain_error("rsos_transfer_entry: d out of range");
  auto ov = [&](int h) { return space.sbar2 - h; };
  cplx entry = 1.0;
  for (int q = 1; q <= space.D; ++q)
    entry *= kernel_K(restriction, 1, ctx.lam_a[q - 1] - lambda.real());
  for (int q = 1; q <= space.Dp; ++q)
    entry *= kernel_K(restriction, jump, ctx.lam_b[q - 1] - lambda.real());
  // fused faces along the b-segment with overlined heights; b_{-1} = a_{D-1}
  auto ket_b = [&](int i) -> int { return (i < 0) ? ket.a[space.D - 1] : ket.b[i]; };
  for (int q = 1; q <= space.Dp; ++q) {
    entry *= fused_weight(hbar, ket_b(q - 2), ov(ket_b(q - 1)), ov(bra.b[q - 1]),
                          bra.b[q], lambda - ctx.lam_b[q - 1], jump);
    if (entry == cplx(0.0)) return entry;
  }
  // plain faces along the a-segment, skipping the particle's rapidity
  for (int q = 1; q <= space.D - 1; ++q) {
    double lam = (q <= ctx.d - 1) ? ctx.lam_a[q - 1] : ctx.lam_a[q];
    entry *= boltzmann_weight(hbar, ov(bra.a[q]), bra.a[q + 1], ov(ket.a[q]),
                              ket.a[q - 1], lambda - lam);
    if (entry == cplx(0.0)) return entry;
  }
  return entry;
}

Eigen::MatrixXcd rsos_transfer_matrix(RSOSTransferKind kind, const RSOSTransferContext& ctx,
                                      cplx lambda) {
  auto basis = enumerate_paths(ctx.space);
  const int n = static_cast<int>(basis.size());
  Eigen::MatrixXcd out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = rsos_transfer_entry(kind, ctx, basis[i], basis[j], lambda);
  return out;
}

}  // namespace betheforge

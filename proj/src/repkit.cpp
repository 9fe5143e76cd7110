#include "betheforge/repkit.hpp"

#include <cmath>
#include <string>

namespace betheforge {

namespace {

void check_spin(Spin s) {
  if (s.doubled > max_spin_doubled)
    throw domain_error("spin doubled value exceeds cap " +
                       std::to_string(max_spin_doubled));
}

}  // namespace

SpinGenerators spin_rep(Spin s) {
  check_spin(s);
  const int d = s.dimension();
  SpinGenerators g;
  for (DenseOperator* op : {&g.e3, &g.e_plus, &g.e_minus, &g.e0}) {
    op->mat = Eigen::MatrixXcd::Zero(d, d);
    op->dims = {d};
  }
  for (int n = 1; n <= d; ++n)
    g.e3.mat(n - 1, n - 1) = s.value() + 1.0 - n;
  for (int n = 1; n <= d - 1; ++n) {
    double c = std::sqrt(static_cast<double>(n) * (d - n));
    g.e_plus.mat(n - 1, n) = c;
    g.e_minus.mat(n, n - 1) = c;
  }
  g.e0.mat = Eigen::MatrixXcd::Identity(d, d);
  return g;
}

namespace {

// e3 (x) e3 + (e+ (x) e- + e- (x) e+)/2 on V_s (x) V_sp
Eigen::MatrixXcd casimir_pair(Spin s, Spin sp) {
  SpinGenerators a = spin_rep(s), b = spin_rep(sp);
  return kron(a.e3.mat, b.e3.mat) +
         0.5 * (kron(a.e_plus.mat, b.e_minus.mat) +
                kron(a.e_minus.mat, b.e_plus.mat));
}

double x_coeff(int k2, Spin s, Spin sp) {
  auto cas = [](int d2) { return 0.25 * d2 * (d2 + 2); };  // j(j+1) for j = d2/2
  return 0.5 * (cas(k2) - cas(s.doubled) - cas(sp.doubled));
}

}  // namespace

DenseOperator projector(Spin s, Spin sp, Spin k) {
  check_spin(s);
  check_spin(sp);
  const int lo = std::abs(s.doubled - sp.doubled);
  const int hi = s.doubled + sp.doubled;
  if (k.doubled < lo || k.doubled > hi || (k.doubled - lo) % 2 != 0)
    throw domain_error("projector: k outside the Clebsch-Gordan range");

  const int d = s.dimension() * sp.dimension();
  Eigen::MatrixXcd C = casimir_pair(s, sp);
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(d, d);
  const double xk = x_coeff(k.doubled, s, sp);
  for (int j2 = lo; j2 <= hi; j2 += 2) {
    if (j2 == k.doubled) continue;
    double xj = x_coeff(j2, s, sp);
    P = P * (C - xj * Eigen::MatrixXcd::Identity(d, d)) / (xk - xj);
  }
  DenseOperator out;
  out.mat = std::move(P);
  out.dims = {s.dimension(), sp.dimension()};
  return out;
}

DenseOperator fused_R(Spin s, Spin sp, cplx u) {
  check_spin(s);
  check_spin(sp);
  const int lo = std::abs(s.doubled - sp.doubled);
  const int hi = s.doubled + sp.doubled;
  const int d = s.dimension() * sp.dimension();

  DenseOperator out;
  out.mat = Eigen::MatrixXcd::Zero(d, d);
  out.dims = {s.dimension(), sp.dimension()};
  for (int k2 = lo; k2 <= hi; k2 += 2) {
    cplx f = 1.0;
    for (int l2 = k2 + 2; l2 <= hi; l2 += 2) {
      cplx pole(0.0, 0.5 * l2);
      if (std::abs(u + pole) < 1e-12)
        throw numeric_error("fused_R: spectral parameter at pole u = -i*" +
                            std::to_string(0.5 * l2));
      f *= (u - pole) / (u + pole);
    }
    out.mat += f * projector(s, sp, Spin(k2)).mat;
  }
  return out;
}

double ybe_residual(Spin si, Spin sj, Spin sk, cplx u, cplx v, cplx w) {
  const std::vector<int> dims = {si.dimension(), sj.dimension(), sk.dimension()};
  Eigen::MatrixXcd R12 = embed_pair(fused_R(si, sj, u - v).mat, 0, 1, dims);
  Eigen::MatrixXcd R13 = embed_pair(fused_R(si, sk, u - w).mat, 0, 2, dims);
  Eigen::MatrixXcd R23 = embed_pair(fused_R(sj, sk, v - w).mat, 1, 2, dims);
  Eigen::MatrixXcd lhs = R12 * R13 * R23;
  Eigen::MatrixXcd rhs = R23 * R13 * R12;
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace betheforge

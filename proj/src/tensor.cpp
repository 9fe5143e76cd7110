#include "betheforge/tensor.hpp"

#include <numeric>

namespace betheforge {

int product_dim(const std::vector<int>& dims) {
  int d = 1;
  for (int x : dims) {
    if (x <= 0) throw domain_error("tensor: factor dimension must be positive");
    d *= x;
  }
  return d;
}

DenseOperator DenseOperator::identity(std::vector<int> dims) {
  DenseOperator op;
  int d = product_dim(dims);
  op.mat = Eigen::MatrixXcd::Identity(d, d);
  op.dims = std::move(dims);
  return op;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXcd permutation_matrix(int d) {
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) P(i * d + j, j * d + i) = 1.0;
  return P;
}

namespace {

std::vector<int> leg_strides(const std::vector<int>& dims) {
  std::vector<int> stride(dims.size());
  int s = 1;
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    stride[i] = s;
    s *= dims[i];
  }
  return stride;
}

}  // namespace

Eigen::MatrixXcd embed_pair(const Eigen::MatrixXcd& op, int leg_a, int leg_b,
                            const std::vector<int>& dims) {
  const int n = static_cast<int>(dims.size());
  if (leg_a < 0 || leg_b < 0 || leg_a >= n || leg_b >= n || leg_a == leg_b)
    throw domain_error("embed_pair: bad leg indices");
  const int da = dims[leg_a], db = dims[leg_b];
  if (op.rows() != da * db || op.cols() != da * db)
    throw domain_error("embed_pair: operator shape mismatch");
  const auto stride = leg_strides(dims);
  const int D = product_dim(dims);
  const int rest = D / (da * db);

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(D, D);
  // enumerate the complement legs once, then fill the (da*db)^2 block
  std::vector<int> other;
  for (int l = 0; l < n; ++l)
    if (l != leg_a && l != leg_b) other.push_back(l);
  for (int rest_idx = 0; rest_idx < rest; ++rest_idx) {
    int base = 0, t = rest_idx;
    for (int k = static_cast<int>(other.size()) - 1; k >= 0; --k) {
      int l = other[k];
      base += (t % dims[l]) * stride[l];
      t /= dims[l];
    }
    for (int a = 0; a < da; ++a)
      for (int b = 0; b < db; ++b)
        for (int ap = 0; ap < da; ++ap)
          for (int bp = 0; bp < db; ++bp) {
            cplx v = op(a * db + b, ap * db + bp);
            if (v == cplx(0.0)) continue;
            int row = base + a * stride[leg_a] + b * stride[leg_b];
            int col = base + ap * stride[leg_a] + bp * stride[leg_b];
            out(row, col) = v;
          }
  }
  return out;
}

Eigen::MatrixXcd embed_single(const Eigen::MatrixXcd& op, int leg,
                              const std::vector<int>& dims) {
  const int n = static_cast<int>(dims.size());
  if (leg < 0 || leg >= n) throw domain_error("embed_single: bad leg index");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int l = 0; l < n; ++l) {
    if (l == leg)
      out = kron(out, op);
    else
      out = kron(out, Eigen::MatrixXcd::Identity(dims[l], dims[l]));
  }
  return out;
}

void apply_pair_right(Eigen::MatrixXcd& T, const Eigen::MatrixXcd& op,
                      int leg_a, int leg_b, const std::vector<int>& dims) {
  const int n = static_cast<int>(dims.size());
  if (leg_a < 0 || leg_b < 0 || leg_a >= n || leg_b >= n || leg_a == leg_b)
    throw domain_error("apply_pair_right: bad leg indices");
  const int da = dims[leg_a], db = dims[leg_b];
  const auto stride = leg_strides(dims);
  const int D = product_dim(dims);
  if (T.rows() != D || T.cols() != D)
    throw domain_error("apply_pair_right: operand shape mismatch");
  const int rest = D / (da * db);

  // complement-leg base offsets, shared by all rows
  std::vector<int> other;
  for (int l = 0; l < n; ++l)
    if (l != leg_a && l != leg_b) other.push_back(l);
  std::vector<int> bases(rest);
  for (int rest_idx = 0; rest_idx < rest; ++rest_idx) {
    int base = 0, t = rest_idx;
    for (int k = static_cast<int>(other.size()) - 1; k >= 0; --k) {
      int l = other[k];
      base += (t % dims[l]) * stride[l];
      t /= dims[l];
    }
    bases[rest_idx] = base;
  }

  Eigen::MatrixXcd out(D, D);
#pragma omp parallel for schedule(static)
  for (int row = 0; row < D; ++row) {
    for (int rest_idx = 0; rest_idx < rest; ++rest_idx) {
      const int base = bases[rest_idx];
      for (int ap = 0; ap < da; ++ap)
        for (int bp = 0; bp < db; ++bp) {
          cplx acc = 0.0;
          for (int a = 0; a < da; ++a)
            for (int b = 0; b < db; ++b) {
              cplx v = op(a * db + b, ap * db + bp);
              if (v == cplx(0.0)) continue;
              acc += T(row, base + a * stride[leg_a] + b * stride[leg_b]) * v;
            }
          out(row, base + ap * stride[leg_a] + bp * stride[leg_b]) = acc;
        }
    }
  }
  T.swap(out);
}

void apply_pair_right_reference(Eigen::MatrixXcd& T, const Eigen::MatrixXcd& op,
                                int leg_a, int leg_b,
                                const std::vector<int>& dims) {
  Eigen::MatrixXcd E = embed_pair(op, leg_a, leg_b, dims);
  T = T * E;
}

DenseOperator trace_leg0(const Eigen::MatrixXcd& T, const std::vector<int>& dims) {
  if (dims.empty()) throw domain_error("trace_leg0: no legs");
  const int d0 = dims[0];
  const int D = product_dim(dims) / d0;
  DenseOperator out;
  out.dims.assign(dims.begin() + 1, dims.end());
  out.mat = Eigen::MatrixXcd::Zero(D, D);
  for (int a = 0; a < d0; ++a)
    out.mat += T.block(a * D, a * D, D, D);
  return out;
}

}  // namespace betheforge

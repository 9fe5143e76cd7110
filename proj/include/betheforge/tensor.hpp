#pragma once

#include <Eigen/Dense>

#include <vector>

#include "betheforge/types.hpp"

namespace betheforge {

/// Dense operator on an ordered tensor product of finite factors.
/// Row-major multi-index over `dims` (leftmost factor is slowest).
struct DenseOperator {
  Eigen::MatrixXcd mat;
  std::vector<int> dims;

  static DenseOperator identity(std::vector<int> dims);
  int dim() const { return static_cast<int>(mat.rows()); }
};

int product_dim(const std::vector<int>& dims);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Permutation operator on C^d (x) C^d.
Eigen::MatrixXcd permutation_matrix(int d);

/// Embeds a two-leg operator `op` (acting on legs a and b, in that order) into
/// the identity on the remaining legs of `dims`.
Eigen::MatrixXcd embed_pair(const Eigen::MatrixXcd& op, int leg_a, int leg_b,
                            const std::vector<int>& dims);

/// Embeds a one-leg operator into the full product space.
Eigen::MatrixXcd embed_single(const Eigen::MatrixXcd& op, int leg,
                              const std::vector<int>& dims);

/// Right-multiplies T (an operator on the product space `dims`) by the
/// embedding of the two-leg operator `op` on legs (leg_a, leg_b), contracting
/// in place over those legs only.  Rows are independent; OpenMP-parallel.
void apply_pair_right(Eigen::MatrixXcd& T, const Eigen::MatrixXcd& op,
                      int leg_a, int leg_b, const std::vector<int>& dims);

/// Reference implementation of apply_pair_right: explicit embed + dense
/// multiply.  Kept for tests and the benchmark.
void apply_pair_right_reference(Eigen::MatrixXcd& T, const Eigen::MatrixXcd& op,
                                int leg_a, int leg_b,
                                const std::vector<int>& dims);

/// Partial trace over leg 0; returns the operator on the remaining legs.
DenseOperator trace_leg0(const Eigen::MatrixXcd& T, const std::vector<int>& dims);

}  // namespace betheforge

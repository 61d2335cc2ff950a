#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ratlas {

/// Comparison tolerance shared across the project. Matrix entries such as
/// 1/sqrt(6) are irrational, so everything numeric is compared against this
/// rather than exactly.
inline constexpr double kTol = 1e-9;

/// Singular values in descending order, one-sided Jacobi (no squaring of the
/// condition number, unlike a Gram-matrix eigen approach).
std::vector<double> singular_values(const Eigen::MatrixXd& a);

/// Count of singular values > rel_tol * sigma_max. Zero matrix has rank 0.
int numeric_rank(const Eigen::MatrixXd& a, double rel_tol = kTol);

}  // namespace ratlas

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace koalint::linalg {

// Singular values in descending order.
std::vector<double> singular_values(const Eigen::MatrixXd& m);

// Number of singular values above rank_tol * sigma_max.
int rank_from_singular_values(const std::vector<double>& sv, double rank_tol);

// Determinant / inverse via LU with partial pivoting (the oracle side of the
// closed-form separability checks).
double lu_determinant(const Eigen::MatrixXd& m);
Eigen::MatrixXd lu_inverse(const Eigen::MatrixXd& m);

}  // namespace koalint::linalg

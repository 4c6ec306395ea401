#include "koalint/linalg.hpp"

namespace koalint::linalg {

std::vector<double> singular_values(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    return std::vector<double>(sv.data(), sv.data() + sv.size());
}

int rank_from_singular_values(const std::vector<double>& sv, double rank_tol) {
    if (sv.empty() || sv.front() == 0.0) return 0;
    int rank = 0;
    for (double s : sv)
        if (s > rank_tol * sv.front()) ++rank;
    return rank;
}

double lu_determinant(const Eigen::MatrixXd& m) {
    return Eigen::PartialPivLU<Eigen::MatrixXd>(m).determinant();
}

Eigen::MatrixXd lu_inverse(const Eigen::MatrixXd& m) {
    return Eigen::PartialPivLU<Eigen::MatrixXd>(m).inverse();
}

}  // namespace koalint::linalg

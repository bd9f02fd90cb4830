#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

// Brute-force stationary distribution of the backoff chain, built independently of the library.
namespace oracle {

inline Eigen::MatrixXd backoff_chain(double p_b, int cw, int L, int l, long n, bool expiration = true) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Constant(cw, cw, 1.0 / cw);
    for (int k = 1; k < cw; ++k) {
        long m = expiration ? std::min<long>(n, L - l - k) : n;
        double q = m < 0 ? 0.0 : 1.0 - std::pow(p_b, static_cast<double>(m + 1));
        t.row(k).setConstant((1.0 - q) / cw);
        t(k, k - 1) += q;
    }
    return t;
}

// Solves pi (T - I) = 0, sum(pi) = 1 by least squares on the stacked system.
inline Eigen::VectorXd stationary(const Eigen::MatrixXd& t) {
    const auto n = t.rows();
    Eigen::MatrixXd a(n + 1, n);
    a.topRows(n) = (t - Eigen::MatrixXd::Identity(n, n)).transpose();
    a.row(n).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs(n) = 1.0;
    return a.colPivHouseholderQr().solve(rhs);
}

inline double stationary_b0(const std::vector<std::vector<double>>& rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd t(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) t(i, j) = rows[i][j];
    return stationary(t)(0);
}

}  // namespace oracle

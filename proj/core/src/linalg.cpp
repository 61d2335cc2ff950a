#include "ratlas/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace ratlas {

std::vector<double> singular_values(const Eigen::MatrixXd& a) {
    // Orthogonalize the columns of the tall orientation; singular values are
    // the column norms after the sweeps converge.
    Eigen::MatrixXd b = a.rows() >= a.cols() ? a : Eigen::MatrixXd(a.transpose());
    const Eigen::Index n = b.cols();
    if (n == 0) return {};

    const double eps = 1e-14;
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double app = b.col(p).squaredNorm();
                const double aqq = b.col(q).squaredNorm();
                const double apq = b.col(p).dot(b.col(q));
                if (std::abs(apq) <= eps * std::sqrt(app * aqq)) continue;
                rotated = true;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (Eigen::Index i = 0; i < b.rows(); ++i) {
                    const double vp = b(i, p);
                    const double vq = b(i, q);
                    b(i, p) = c * vp - s * vq;
                    b(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sv(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) sv[static_cast<std::size_t>(j)] = b.col(j).norm();
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

int numeric_rank(const Eigen::MatrixXd& a, double rel_tol) {
    if (a.size() == 0) return 0;
    const auto sv = singular_values(a);
    const double smax = sv.empty() ? 0.0 : sv.front();
    if (smax <= 0.0) return 0;
    int rank = 0;
    for (double s : sv)
        if (s > rel_tol * smax) ++rank;
    return rank;
}

}  // namespace ratlas

#include "ratlas/simplex.hpp"

#include <cmath>
#include <sstream>

#include "ratlas/errors.hpp"

namespace ratlas {

namespace {
constexpr double kPivotEps = 1e-9;
}

FeasibilityResult max_slack(const std::vector<SignedConstraint>& constraints, int dim, double box,
                            int iteration_cap) {
    if (dim < 1) throw ValidationError("max_slack: dimension must be >= 1");
    if (box <= 0.0) throw ValidationError("max_slack: box must be positive");

    const int n_con = static_cast<int>(constraints.size());
    if (iteration_cap <= 0) iteration_cap = 10 * (dim + n_con) * (dim + n_con);

    // Unit-normalized copies; the t coefficient becomes exactly 1.
    std::vector<Eigen::VectorXd> nrm(constraints.size());
    std::vector<double> off(constraints.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < constraints.size(); ++k) {
        const auto& c = constraints[k];
        if (c.normal.size() != dim) throw ValidationError("max_slack: constraint dimension mismatch");
        const double len = c.normal.norm();
        if (!(len > 0.0)) throw ValidationError("max_slack: zero constraint normal");
        nrm[k] = (c.sign > 0 ? 1.0 : -1.0) * c.normal / len;
        off[k] = (c.sign > 0 ? 1.0 : -1.0) * c.offset / len;
        worst = std::max(worst, std::abs(off[k]) + box * nrm[k].lpNorm<1>());
    }
    const double t_lo = -(1.0 + worst);

    // Rows: n_con margin rows, 2*dim box rows, 1 cap row. Columns: x' (dim),
    // t', then one slack per row, then RHS.
    const int rows = n_con + 2 * dim + 1;
    const int structural = dim + 1;
    const int cols = structural + rows + 1;
    Eigen::MatrixXd t_tab = Eigen::MatrixXd::Zero(rows + 1, cols);
    std::vector<int> basis(static_cast<std::size_t>(rows));

    int r = 0;
    for (int k = 0; k < n_con; ++k, ++r) {
        for (int i = 0; i < dim; ++i) t_tab(r, i) = -nrm[static_cast<std::size_t>(k)](i);
        t_tab(r, dim) = 1.0;
        t_tab(r, cols - 1) = off[static_cast<std::size_t>(k)] - box * nrm[static_cast<std::size_t>(k)].sum() - t_lo;
    }
    for (int i = 0; i < dim; ++i, ++r) {  // x_i >= -B + t
        t_tab(r, i) = -1.0;
        t_tab(r, dim) = 1.0;
        t_tab(r, cols - 1) = -t_lo;
    }
    for (int i = 0; i < dim; ++i, ++r) {  // x_i <= B - t
        t_tab(r, i) = 1.0;
        t_tab(r, dim) = 1.0;
        t_tab(r, cols - 1) = 2.0 * box - t_lo;
    }
    t_tab(r, dim) = 1.0;  // t <= 1
    t_tab(r, cols - 1) = 1.0 - t_lo;

    for (int i = 0; i < rows; ++i) {
        t_tab(i, structural + i) = 1.0;
        basis[static_cast<std::size_t>(i)] = structural + i;
    }
    t_tab(rows, dim) = -1.0;  // maximize t'

    int iterations = 0;
    int degenerate_pivots = 0;
    bool blands_rule = false;
    while (true) {
        int enter = -1;
        if (blands_rule) {
            for (int j = 0; j < structural + rows; ++j)
                if (t_tab(rows, j) < -kPivotEps) {
                    enter = j;
                    break;
                }
        } else {
            double best = -kPivotEps;
            for (int j = 0; j < structural + rows; ++j)
                if (t_tab(rows, j) < best) {
                    best = t_tab(rows, j);
                    enter = j;
                }
        }
        if (enter < 0) break;  // optimal

        int leave = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < rows; ++i) {
            const double a = t_tab(i, enter);
            if (a <= kPivotEps) continue;
            const double ratio = t_tab(i, cols - 1) / a;
            if (leave < 0 || ratio < best_ratio - 1e-12 ||
                (std::abs(ratio - best_ratio) <= 1e-12 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave < 0) {
            // The cap and box rows bound every column, so this is numerical.
            throw SolverError("max_slack: unbounded pivot column " + std::to_string(enter));
        }
        if (best_ratio <= kPivotEps) {
            if (++degenerate_pivots > 2 * dim) blands_rule = true;
        }

        if (++iterations > iteration_cap) {
            std::ostringstream msg;
            msg << "max_slack: iteration cap " << iteration_cap << " exceeded; basis:";
            for (int b : basis) msg << ' ' << b;
            throw SolverError(msg.str());
        }

        const double pivot = t_tab(leave, enter);
        t_tab.row(leave) /= pivot;
        for (int i = 0; i <= rows; ++i) {
            if (i == leave) continue;
            const double f = t_tab(i, enter);
            if (f != 0.0) t_tab.row(i) -= f * t_tab.row(leave);
        }
        basis[static_cast<std::size_t>(leave)] = enter;
    }

    Eigen::VectorXd z = Eigen::VectorXd::Zero(structural);
    for (int i = 0; i < rows; ++i)
        if (basis[static_cast<std::size_t>(i)] < structural) z(basis[static_cast<std::size_t>(i)]) = t_tab(i, cols - 1);

    FeasibilityResult res;
    res.max_slack = z(dim) + t_lo;
    res.feasible = res.max_slack > kSlackThreshold;
    res.iterations = iterations;
    if (res.feasible) {
        Eigen::VectorXd x = z.head(dim);
        x.array() -= box;
        res.point = std::move(x);
    }
    return res;
}

}  // namespace ratlas

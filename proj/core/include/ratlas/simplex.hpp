#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace ratlas {

/// One strict half-space requirement sign * (normal . x + offset) > 0.
struct SignedConstraint {
    Eigen::VectorXd normal;
    double offset = 0.0;
    int sign = +1;
};

/// Normalized margins below this are boundary slivers, not regions.
inline constexpr double kSlackThreshold = 1e-7;

struct FeasibilityResult {
    bool feasible = false;
    double max_slack = 0.0;  // optimum t, capped at 1
    std::optional<Eigen::VectorXd> point;
    int iterations = 0;
};

/// Strict-feasibility oracle. Solves
///   maximize t
///   s.t. sign_k * (normal_k . x + offset_k) >= t * ||normal_k||_2  for all k
///        -B + t <= x_i <= B - t
///        t <= 1
/// with a dense primal simplex (Dantzig pricing, Bland fallback after 2*d
/// degenerate pivots). The shifted formulation keeps the all-slack basis
/// feasible, so no phase-1 is needed. The system is strictly feasible inside
/// the box iff the optimum exceeds kSlackThreshold.
///
/// iteration_cap <= 0 selects the default 10 * (d + #constraints)^2.
FeasibilityResult max_slack(const std::vector<SignedConstraint>& constraints, int dim, double box,
                            int iteration_cap = 0);

}  // namespace ratlas

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ratlas/bigint.hpp"
#include "ratlas/gcn.hpp"
#include "ratlas/graph.hpp"
#include "ratlas/simplex.hpp"

namespace ratlas {

inline constexpr double kDegenerateNormal = 1e-12;
inline constexpr double kDefaultBox = 1e4;
inline constexpr int kDefaultPlaneCap = 40;
inline constexpr int kDefaultNeuronCap = 24;

/// {x : normal . x + offset = 0} in the flattened D*N_0 input space.
struct Hyperplane {
    Eigen::VectorXd normal;  // ||.||_inf > kDegenerateNormal
    double offset = 0.0;
};

/// A feasible sign assignment plus an interior witness. The slack is the
/// smallest normalized margin of the witness over all constraints.
struct Region {
    std::vector<std::int8_t> signs;
    Eigen::VectorXd witness;
    double slack = 0.0;

    std::string to_json_line() const;  // {"signs": "+-...", "witness": [...], "slack": s}
};

struct ArrangementBuild {
    std::vector<Hyperplane> planes;
    int dropped_zero_normals = 0;
    std::string note;
};

/// Counter-side observations used for genericity judgement: LP optima that
/// land close to the accept/reject threshold indicate a near-degenerate draw.
struct CountDiagnostics {
    double min_accepted_slack = 1.0;
    double max_rejected_slack = 0.0;

    bool marginal() const {
        return min_accepted_slack < 10.0 * kSlackThreshold ||
               max_rejected_slack > 0.1 * kSlackThreshold;
    }
    void merge(const CountDiagnostics& other);
};

struct CountResult {
    BigInt count;
    std::vector<Region> regions;
    CountDiagnostics diagnostics;
};

/// One hyperplane per (node, output feature): the flattened rank-1 normal
/// a_i (x) w_j with the feature bias as offset. Zero normals (from zero
/// weight columns or zero adjacency rows) are dropped and noted.
ArrangementBuild build_one_layer_arrangement(const NormalizedAdjacency& adj, const Eigen::MatrixXd& w,
                                             const Eigen::MatrixXd& b);

/// Incremental insertion: each new plane splits exactly the regions whose
/// both sign extensions stay strictly feasible inside [-B, B]^d.
CountResult count_regions(const std::vector<Hyperplane>& planes, int dim, double box = kDefaultBox,
                          int plane_cap = kDefaultPlaneCap);

BigInt exact_count_one_layer(const NormalizedAdjacency& adj, const Eigen::MatrixXd& w,
                             const Eigen::MatrixXd& b, double box = kDefaultBox,
                             CountDiagnostics* diagnostics = nullptr);

struct MultiCountResult {
    BigInt count;
    std::vector<ActivationPattern> patterns;  // one per feasible leaf
    std::vector<Region> regions;              // signs cover all neurons
    CountDiagnostics diagnostics;
};

/// Depth-first subdivision over layers. Within a fixed sign assignment of the
/// earlier layers the next preactivations are affine in the flattened input;
/// the per-region affine map is carried down the recursion instead of being
/// recomputed at each leaf.
MultiCountResult exact_count_multi(const GcnSpec& spec, const NormalizedAdjacency& adj,
                                   const Parameters& params, double box = kDefaultBox,
                                   int neuron_cap = kDefaultNeuronCap);

/// Static and counter-side evidence that a parameter draw sits near the
/// measure-zero degenerate set where the almost-sure maximum can fail.
struct GenericityReport {
    bool parallel_normals = false;
    bool coincident_planes = false;
    bool kset_below_max = false;
    bool marginal_slack = false;

    bool any() const { return parallel_normals || coincident_planes || kset_below_max || marginal_slack; }
};

GenericityReport check_genericity(const NormalizedAdjacency& adj, const Eigen::MatrixXd& w,
                                  const Eigen::MatrixXd& b, const CountDiagnostics* diagnostics = nullptr);

}  // namespace ratlas

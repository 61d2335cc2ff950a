#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "ratlas/bigint.hpp"
#include "ratlas/gcn.hpp"
#include "ratlas/graph.hpp"

namespace ratlas {

BigInt binom(int n, int k);

/// Maximal region count of a one-layer fully connected net with n0 inputs
/// and n1 neurons: sum_{i=0..min(n0,n1)} C(n1, i).
BigInt binom_sum(int n0, int n1);

/// 2^n, the sign-word cap over n neurons.
BigInt naive_bound(int n);

/// (sum_{i=0..min(n_in,n_out)} C(n_out, i))^d_star. For n_in > n_out this
/// collapses to 2^(n_out*d_star).
BigInt one_layer_max(int d_star, int n_in, int n_out);

/// Number of linearly independent subsets (the empty one included) of the
/// rank-1 normals {a_i (x) w_j : i in [D*], j in [N']}. This equals the
/// structured-arrangement upper bound on one-layer region counts.
/// Throws CapExceeded when D* * N' > cap.
BigInt kset_count(const NormalizedAdjacency& adj, const Eigen::MatrixXd& w, int cap = 20);

/// Upper bound for an L-layer net:
/// one_layer_max(D*, N_0, N_1) * prod_{l=2..L} sum_{i=0..D*N_0} C(D*N_l, i).
BigInt multi_upper(const GcnSpec& spec, const NormalizedAdjacency& adj);

/// Lower bound via the folding construction:
/// one_layer_max(D*, N_0, N_L) * prod_{l=1..L-1} floor(N_l/N_0)^(N_0*rank_a).
/// The folding layers l in [1, L-1] must satisfy N_l >= N_0; the final width
/// is unconstrained (it only enters through the one-layer factor).
BigInt multi_lower(const GcnSpec& spec, const NormalizedAdjacency& adj, int rank_a);
BigInt multi_lower(const GcnSpec& spec, const NormalizedAdjacency& adj);

/// Fully connected composition bound: prod_l sum_{i=0..input_dim} C(width_l, i).
BigInt nn_upper(int input_dim, const std::vector<int>& widths);

/// Exact rational bound / parameter count.
BigRat per_param_ratio(const BigInt& region_bound, const GcnSpec& spec);

/// D* * N, the growth exponent of the one-layer maximum in N'.
int asymptotic_exponent(int d_star, int n_in);

/// All bounds for one (graph, spec) pair, with exact per-parameter ratios.
struct BoundReport {
    BigInt naive;
    std::optional<BigInt> one_layer;  // present only for L == 1
    std::optional<BigInt> lower;      // absent when a folding layer is narrower than N_0
    BigInt upper;
    BigInt params;
    std::optional<BigRat> ratio_lower;
    BigRat ratio_upper;
    std::string note;  // e.g. why the lower bound is absent

    std::string to_json() const;  // integers as decimal strings
};

BoundReport bound_report(const GcnSpec& spec, const NormalizedAdjacency& adj);

}  // namespace ratlas

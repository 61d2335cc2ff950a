#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ratlas/bigint.hpp"
#include "ratlas/gcn.hpp"
#include "ratlas/graph.hpp"

namespace ratlas {

/// Blueprint of the folding network: per-layer tooth counts, per-node box
/// scales r_a (the diagonal of the degree matrix of I+A, so that the
/// adjacency maps the box into itself), and the seed of the generic last
/// layer.
struct WitnessPlan {
    std::vector<int> p_per_layer;  // floor(N_l / N_0) for l = 1..L-1
    std::vector<double> r;         // r_a > 0, length D
    std::vector<int> widths;
    std::uint64_t final_seed = 0;

    std::string to_json() const;
};

/// The scalar folding map: relu(p*y) + sum_{m=2..p} (-1)^(m+1) * relu(2*(p*y - (m-1)*c)).
/// On [0, c] it has p linear teeth, each mapped onto [0, c] with alternating
/// orientation.
double sawtooth_fold(int p, double c, double y);

/// Builds the explicit lower-bound network: folding layers with block
/// weights in {p, 2p, 0} and node-resolved tooth biases -2(m-1)*sqrt(r_a);
/// the sign layer that alternates the teeth is folded into the next layer's
/// weight, so the result is a plain L-layer net. The last layer is generic
/// from final_seed with biases placed so each hyperplane crosses the folded
/// box. Surplus features (beyond p*N_0 per folding layer) get zero weights
/// and a negative bias, contributing no hyperplanes.
std::pair<Parameters, WitnessPlan> build_witness(const GcnSpec& spec, const NormalizedAdjacency& adj,
                                                 std::uint64_t final_seed);

struct FoldingCheck {
    bool pass = true;
    double worst_residual = 0.0;
    std::string detail;
};

/// Numerical verification of each step of the construction:
/// (a) the adjacency maps prod_a [0, sqrt(r_a)] into itself,
/// (b) each folding layer equals sawtooth_fold(p, sqrt(r_a), .) applied to
///     the aggregated input, to 1e-9,
/// (c) each 1-D tooth maps its cell onto [0, c] monotonically with
///     endpoints alternating between {0, c}.
struct FoldingReport {
    FoldingCheck box_invariance;
    FoldingCheck sawtooth_match;
    FoldingCheck cell_onto;

    bool all_pass() const { return box_invariance.pass && sawtooth_match.pass && cell_onto.pass; }
    std::string to_json() const;
};

FoldingReport verify_folding(const GcnSpec& spec, const NormalizedAdjacency& adj, const WitnessPlan& plan,
                             int probes = 256, std::uint64_t seed = 0);

struct WitnessRegionCheck {
    BigInt exact;
    BigInt lower;
    bool pass = false;
};

/// Counts the witness network's regions exactly and compares with the
/// closed-form lower bound.
WitnessRegionCheck witness_region_check(const GcnSpec& spec, const NormalizedAdjacency& adj,
                                        std::uint64_t final_seed, double box = 1e4);

}  // namespace ratlas

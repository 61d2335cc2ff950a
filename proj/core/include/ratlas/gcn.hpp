#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ratlas/bigint.hpp"
#include "ratlas/graph.hpp"

namespace ratlas {

/// Layer widths [N_0, N_1, ..., N_L]; the graph supplies the node dimension.
struct GcnSpec {
    std::vector<int> widths;

    static GcnSpec make(std::vector<int> widths);
    static GcnSpec from_json(const std::string& json_text);
    std::string to_json() const;

    int layer_count() const { return static_cast<int>(widths.size()) - 1; }
    int input_features() const { return widths.front(); }
    int output_features(int layer) const { return widths.at(static_cast<std::size_t>(layer)); }

    /// Total neuron count for a D-node graph: D * (N_1 + ... + N_L).
    int neuron_count(int node_count) const;
};

/// Per-layer weights W_l (N_{l-1} x N_l) and biases. A bias is normally one
/// row broadcast over nodes; a D x N_l matrix is accepted for constructions
/// that need node-resolved offsets.
struct Parameters {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::MatrixXd> biases;  // 1 x N_l (broadcast) or D x N_l

    static std::string shape_check(const GcnSpec& spec, const Parameters& p, int node_count);
    static Parameters from_json(const std::string& json_text);
    std::string to_json() const;

    /// Total stored entry count (weights plus one bias row per layer when
    /// broadcast, D rows when node-resolved).
    std::int64_t entry_count() const;
};

/// Sign word over all neurons in (layer, node, feature) lexicographic order.
/// Bit 1 encodes +1 (active), bit 0 encodes -1.
class ActivationPattern {
public:
    ActivationPattern() = default;
    explicit ActivationPattern(int bit_count);

    int size() const { return size_; }
    void set(int i, bool positive);
    int sign(int i) const;  // +1 or -1

    bool operator==(const ActivationPattern& other) const = default;
    std::uint64_t hash() const;
    std::string to_string() const;  // "+-+" rendering
    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    int size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct PatternHash {
    std::size_t operator()(const ActivationPattern& p) const { return static_cast<std::size_t>(p.hash()); }
};

struct ForwardResult {
    std::vector<Eigen::MatrixXd> preacts;  // D x N_l per layer
    std::vector<Eigen::MatrixXd> outputs;  // relu(preacts)
};

/// preacts[l] = A_hat * outputs[l-1] * W_l + bias; outputs[l] = max(0, .).
ForwardResult forward(const GcnSpec& spec, const NormalizedAdjacency& adj, const Parameters& params,
                      const Eigen::MatrixXd& x0);

/// Sign extraction with the tie rule: preactivations in [-tol, tol] count as
/// inactive (-1), matching the strict-inequality region definition.
ActivationPattern pattern(const std::vector<Eigen::MatrixXd>& preacts, double tol = 0.0);

/// Trainable parameter count: sum over layers of N_{l-1}*N_l + N_l.
BigInt param_count(const GcnSpec& spec);

/// Kaiming-style init, deterministic in the seed: W_l entries are
/// N(0, 2/N_{l-1}); biases are U(-1/sqrt(N_{l-1}), +1/sqrt(N_{l-1})) so the
/// parameter vector has a density.
Parameters init_kaiming(const GcnSpec& spec, std::uint64_t seed);

}  // namespace ratlas

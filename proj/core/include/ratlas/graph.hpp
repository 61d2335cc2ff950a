#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace ratlas {

/// Undirected simple graph on nodes [0, D). Self-loops are rejected: the
/// normalization adds the identity itself.
struct Graph {
    int node_count = 0;
    std::vector<std::pair<int, int>> edges;  // i < j, sorted, unique

    /// Validates and canonicalizes an edge list.
    static Graph make(int nodes, std::vector<std::pair<int, int>> edges);

    /// Parses {"nodes": D, "edges": [[i, j], ...]} with 0-based indices.
    static Graph from_json(const std::string& json_text);
    std::string to_json() const;

    int degree(int node) const;
};

/// The symmetric normalization of I+A together with its deduplicated form.
struct NormalizedAdjacency {
    Eigen::MatrixXd a_hat;    // D x D, symmetric, entrywise >= 0
    Eigen::VectorXd degrees;  // diagonal of M, the degree matrix of I+A
    Eigen::MatrixXd a_tilde;  // a_hat with duplicate rows removed, first kept
    int d_star = 0;           // rows of a_tilde

    // The deduplicated rows are expected to be linearly independent; this
    // records the numeric check so user graphs that break it are flagged
    // instead of silently trusted.
    bool rank_matches_d_star = true;

    int node_count() const { return static_cast<int>(a_hat.rows()); }
};

/// a_hat[i][j] = (I+A)[i][j] / sqrt(m_i * m_j) with m_i = 1 + degree(i).
NormalizedAdjacency normalize(const Graph& graph);

/// Removes duplicate rows (first occurrence kept). Rows are duplicates iff
/// their max absolute entry difference is <= tol.
std::pair<Eigen::MatrixXd, int> dedup_rows(const Eigen::MatrixXd& a_hat, double tol = 1e-9);

enum class FixtureName { path3, star3, fig2_graph4, triangle3, single1 };

/// The named graphs used throughout the test corpus.
Graph fixture(FixtureName name);

/// Looks up a fixture by its CLI spelling; unknown names raise a
/// ValidationError listing the available fixtures.
Graph fixture(const std::string& name);

const std::vector<std::string>& fixture_names();

}  // namespace ratlas

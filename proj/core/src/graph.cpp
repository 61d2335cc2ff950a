#include "ratlas/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ratlas/errors.hpp"
#include "ratlas/linalg.hpp"

namespace ratlas {

Graph Graph::make(int nodes, std::vector<std::pair<int, int>> edges) {
    if (nodes <= 0) throw ValidationError("graph: node count must be positive");
    std::set<std::pair<int, int>> seen;
    for (auto& [i, j] : edges) {
        if (i == j) throw ValidationError("graph: self-loop at node " + std::to_string(i));
        if (i < 0 || j < 0 || i >= nodes || j >= nodes)
            throw ValidationError("graph: edge (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") out of range for " + std::to_string(nodes) + " nodes");
        if (i > j) std::swap(i, j);
        if (!seen.insert({i, j}).second)
            throw ValidationError("graph: duplicate edge (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    Graph g;
    g.node_count = nodes;
    g.edges.assign(seen.begin(), seen.end());
    return g;
}

Graph Graph::from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("graph: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("nodes") || !j.contains("edges"))
        throw ValidationError("graph: expected {\"nodes\": D, \"edges\": [[i, j], ...]}");
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2)
            throw ValidationError("graph: each edge must be a pair [i, j]");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return make(j["nodes"].get<int>(), std::move(edges));
}

std::string Graph::to_json() const {
    nlohmann::json j;
    j["nodes"] = node_count;
    j["edges"] = nlohmann::json::array();
    for (const auto& [i, k] : edges) j["edges"].push_back({i, k});
    return j.dump();
}

int Graph::degree(int node) const {
    int d = 0;
    for (const auto& [i, j] : edges)
        if (i == node || j == node) ++d;
    return d;
}

NormalizedAdjacency normalize(const Graph& graph) {
    const int d = graph.node_count;
    Eigen::MatrixXd ia = Eigen::MatrixXd::Identity(d, d);
    for (const auto& [i, j] : graph.edges) {
        ia(i, j) = 1.0;
        ia(j, i) = 1.0;
    }
    Eigen::VectorXd m(d);
    for (int i = 0; i < d; ++i) m(i) = ia.row(i).sum();

    NormalizedAdjacency out;
    out.a_hat.resize(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out.a_hat(i, j) = ia(i, j) / std::sqrt(m(i) * m(j));
    out.degrees = m;
    std::tie(out.a_tilde, out.d_star) = dedup_rows(out.a_hat);
    out.rank_matches_d_star = numeric_rank(out.a_tilde) == out.d_star;
    return out;
}

std::pair<Eigen::MatrixXd, int> dedup_rows(const Eigen::MatrixXd& a_hat, double tol) {
    std::vector<int> keep;
    for (int r = 0; r < a_hat.rows(); ++r) {
        bool duplicate = false;
        for (int k : keep) {
            if ((a_hat.row(r) - a_hat.row(k)).cwiseAbs().maxCoeff() <= tol) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) keep.push_back(r);
    }
    Eigen::MatrixXd tilde(static_cast<Eigen::Index>(keep.size()), a_hat.cols());
    for (std::size_t r = 0; r < keep.size(); ++r) tilde.row(static_cast<Eigen::Index>(r)) = a_hat.row(keep[r]);
    return {tilde, static_cast<int>(keep.size())};
}

Graph fixture(FixtureName name) {
    switch (name) {
        case FixtureName::path3:
            return Graph::make(3, {{0, 1}, {1, 2}});
        case FixtureName::star3:
            return Graph::make(3, {{0, 1}, {0, 2}});
        case FixtureName::fig2_graph4:
            return Graph::make(4, {{0, 1}, {0, 2}, {1, 3}});
        case FixtureName::triangle3:
            return Graph::make(3, {{0, 1}, {1, 2}, {0, 2}});
        case FixtureName::single1:
            return Graph::make(1, {});
    }
    throw ValidationError("fixture: unreachable");
}

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {"path3", "star3", "fig2_graph4", "triangle3", "single1"};
    return names;
}

Graph fixture(const std::string& name) {
    if (name == "path3") return fixture(FixtureName::path3);
    if (name == "star3") return fixture(FixtureName::star3);
    if (name == "fig2_graph4") return fixture(FixtureName::fig2_graph4);
    if (name == "triangle3") return fixture(FixtureName::triangle3);
    if (name == "single1") return fixture(FixtureName::single1);
    std::ostringstream msg;
    msg << "unknown fixture '" << name << "'; available:";
    for (const auto& n : fixture_names()) msg << ' ' << n;
    throw ValidationError(msg.str());
}

}  // namespace ratlas

#include "ratlas/arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ratlas/bounds.hpp"
#include "ratlas/errors.hpp"
#include "ratlas/linalg.hpp"
#include "ratlas/parallel.hpp"

namespace ratlas {

void CountDiagnostics::merge(const CountDiagnostics& other) {
    min_accepted_slack = std::min(min_accepted_slack, other.min_accepted_slack);
    max_rejected_slack = std::max(max_rejected_slack, other.max_rejected_slack);
}

std::string Region::to_json_line() const {
    nlohmann::json j;
    std::string s(signs.size(), '-');
    for (std::size_t i = 0; i < signs.size(); ++i)
        if (signs[i] > 0) s[i] = '+';
    j["signs"] = s;
    j["witness"] = std::vector<double>(witness.data(), witness.data() + witness.size());
    j["slack"] = slack;
    return j.dump();
}

ArrangementBuild build_one_layer_arrangement(const NormalizedAdjacency& adj, const Eigen::MatrixXd& w,
                                             const Eigen::MatrixXd& b) {
    const int d = adj.node_count();
    const int n_in = static_cast<int>(w.rows());
    const int n_out = static_cast<int>(w.cols());
    if (b.cols() != n_out || (b.rows() != 1 && b.rows() != d))
        throw ValidationError("build_one_layer_arrangement: bias shape mismatch");

    ArrangementBuild out;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < n_out; ++j) {
            Eigen::VectorXd normal(static_cast<Eigen::Index>(d) * n_in);
            for (int u = 0; u < d; ++u)
                for (int v = 0; v < n_in; ++v)
                    normal(static_cast<Eigen::Index>(u) * n_in + v) = adj.a_hat(i, u) * w(v, j);
            if (normal.cwiseAbs().maxCoeff() <= kDegenerateNormal) {
                ++out.dropped_zero_normals;
                continue;
            }
            out.planes.push_back({std::move(normal), b(b.rows() == 1 ? 0 : i, j)});
        }
    }
    if (out.dropped_zero_normals > 0)
        out.note = "dropped " + std::to_string(out.dropped_zero_normals) + " hyperplane(s) with zero normal";
    return out;
}

namespace {

struct WorkRegion {
    std::vector<std::int8_t> signs;
    Eigen::VectorXd witness;
    double slack = 0.0;
};

std::vector<SignedConstraint> constraints_of(const std::vector<Hyperplane>& planes, const WorkRegion& r,
                                             int upto) {
    std::vector<SignedConstraint> cs;
    cs.reserve(static_cast<std::size_t>(upto) + 1);
    for (int j = 0; j < upto; ++j)
        cs.push_back({planes[static_cast<std::size_t>(j)].normal, planes[static_cast<std::size_t>(j)].offset,
                      r.signs[static_cast<std::size_t>(j)]});
    return cs;
}

// Splits one region against one plane. At least one side survives; both
// surviving sides mean a genuine split. A side whose witness already clears
// the plane with a comfortable normalized margin skips its LP.
void split_one(const std::vector<Hyperplane>& planes, int k, int dim, double box, const WorkRegion& r,
               std::vector<WorkRegion>& out, CountDiagnostics& diag) {
    const Hyperplane& h = planes[static_cast<std::size_t>(k)];
    const double norm = h.normal.norm();
    const double value = h.normal.dot(r.witness) + h.offset;
    const double margin = value / norm;
    const int witness_side = margin >= 0.0 ? +1 : -1;
    const double safe = 10.0 * kSlackThreshold;

    auto solve_side = [&](int sign) {
        auto cs = constraints_of(planes, r, k);
        cs.push_back({h.normal, h.offset, sign});
        return max_slack(cs, dim, box);
    };

    WorkRegion keep;
    bool have_keep = false;
    double keep_reject_slack = 0.0;
    if (std::abs(margin) >= safe && r.slack >= safe) {
        keep = r;
        keep.signs.push_back(static_cast<std::int8_t>(witness_side));
        keep.slack = std::min(r.slack, std::abs(margin));
        have_keep = true;
    } else {
        auto res = solve_side(witness_side);
        if (res.feasible) {
            keep.signs = r.signs;
            keep.signs.push_back(static_cast<std::int8_t>(witness_side));
            keep.witness = *res.point;
            keep.slack = res.max_slack;
            have_keep = true;
            diag.min_accepted_slack = std::min(diag.min_accepted_slack, res.max_slack);
        } else {
            keep_reject_slack = res.max_slack;
            diag.max_rejected_slack = std::max(diag.max_rejected_slack, res.max_slack);
        }
    }

    auto other = solve_side(-witness_side);
    WorkRegion split;
    bool have_split = false;
    if (other.feasible) {
        split.signs = r.signs;
        split.signs.push_back(static_cast<std::int8_t>(-witness_side));
        split.witness = *other.point;
        split.slack = other.max_slack;
        have_split = true;
        diag.min_accepted_slack = std::min(diag.min_accepted_slack, other.max_slack);
    } else {
        diag.max_rejected_slack = std::max(diag.max_rejected_slack, other.max_slack);
    }

    if (!have_keep && !have_split) {
        // Sliver squeezed below the threshold on both sides; keep the less
        // bad side so no region is ever lost.
        const int sign = keep_reject_slack >= other.max_slack ? witness_side : -witness_side;
        keep = r;
        keep.signs.push_back(static_cast<std::int8_t>(sign));
        out.push_back(std::move(keep));
        return;
    }
    // Emit in fixed (-1, +1) order so results never depend on scheduling.
    if (have_keep && have_split && witness_side > 0) std::swap(keep, split);
    if (have_keep) out.push_back(std::move(keep));
    if (have_split) out.push_back(std::move(split));
}

std::vector<WorkRegion> insert_plane(const std::vector<Hyperplane>& planes, int k, int dim, double box,
                                     std::vector<WorkRegion>& regions, CountDiagnostics& diag) {
    std::vector<std::vector<WorkRegion>> buckets(regions.size());
    std::vector<CountDiagnostics> diags(std::max<std::size_t>(regions.size(), 1));
    parallel_for(regions.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            split_one(planes, k, dim, box, regions[i], buckets[i], diags[i]);
    });
    std::vector<WorkRegion> next;
    next.reserve(regions.size() + regions.size() / 2);
    for (std::size_t i = 0; i < buckets.size(); ++i) {
        diag.merge(diags[i]);
        for (auto& r : buckets[i]) next.push_back(std::move(r));
    }
    return next;
}

}  // namespace

CountResult count_regions(const std::vector<Hyperplane>& planes, int dim, double box, int plane_cap) {
    if (static_cast<int>(planes.size()) > plane_cap)
        throw CapExceeded("count_regions: " + std::to_string(planes.size()) + " planes exceed cap " +
                          std::to_string(plane_cap) + "; use the sampler estimate instead");
    for (const auto& h : planes) {
        if (h.normal.size() != dim) throw ValidationError("count_regions: plane dimension mismatch");
        if (h.normal.cwiseAbs().maxCoeff() <= kDegenerateNormal)
            throw ValidationError("count_regions: degenerate plane normal");
    }

    CountResult res;
    auto root = max_slack({}, dim, box);
    std::vector<WorkRegion> regions{{{}, *root.point, root.max_slack}};
    for (int k = 0; k < static_cast<int>(planes.size()); ++k)
        regions = insert_plane(planes, k, dim, box, regions, res.diagnostics);

    res.count = static_cast<long>(regions.size());
    res.regions.reserve(regions.size());
    for (auto& r : regions) res.regions.push_back({std::move(r.signs), std::move(r.witness), r.slack});
    return res;
}

BigInt exact_count_one_layer(const NormalizedAdjacency& adj, const Eigen::MatrixXd& w,
                             const Eigen::MatrixXd& b, double box, CountDiagnostics* diagnostics) {
    auto build = build_one_layer_arrangement(adj, w, b);
    auto res = count_regions(build.planes, adj.node_count() * static_cast<int>(w.rows()), box);
    if (diagnostics) diagnostics->merge(res.diagnostics);
    return res.count;
}

namespace {

struct MultiNode {
    std::vector<Hyperplane> planes;       // non-degenerate constraints so far
    std::vector<std::int8_t> plane_sign;  // matching signs
    std::vector<std::int8_t> bits;        // all neuron signs so far
    Eigen::MatrixXd map;                  // vec(X^(l)) = map * vec(x0) + off
    Eigen::VectorXd off;
    Eigen::VectorXd witness;
    double slack = 0.0;
};

// Layer preactivations as an affine function of the flattened input.
void layer_affine(const NormalizedAdjacency& adj, const Eigen::MatrixXd& w, const Eigen::MatrixXd& b,
                  const Eigen::MatrixXd& in_map, const Eigen::VectorXd& in_off, Eigen::MatrixXd& pre_map,
                  Eigen::VectorXd& pre_off) {
    const int d = adj.node_count();
    const int n_in = static_cast<int>(w.rows());
    const int n_out = static_cast<int>(w.cols());
    Eigen::MatrixXd lift(static_cast<Eigen::Index>(d) * n_out, static_cast<Eigen::Index>(d) * n_in);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < n_out; ++j)
            for (int u = 0; u < d; ++u)
                for (int v = 0; v < n_in; ++v)
                    lift(static_cast<Eigen::Index>(i) * n_out + j, static_cast<Eigen::Index>(u) * n_in + v) =
                        adj.a_hat(i, u) * w(v, j);
    pre_map = lift * in_map;
    pre_off = lift * in_off;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < n_out; ++j)
            pre_off(static_cast<Eigen::Index>(i) * n_out + j) += b(b.rows() == 1 ? 0 : i, j);
}

void split_multi(const MultiNode& node, const Eigen::VectorXd& normal, double offset, int dim, double box,
                 std::vector<MultiNode>& out, CountDiagnostics& diag) {
    const double norm = normal.norm();
    const double margin = (normal.dot(node.witness) + offset) / norm;
    const int witness_side = margin >= 0.0 ? +1 : -1;
    const double safe = 10.0 * kSlackThreshold;

    auto solve_side = [&](int sign) {
        std::vector<SignedConstraint> cs;
        cs.reserve(node.planes.size() + 1);
        for (std::size_t i = 0; i < node.planes.size(); ++i)
            cs.push_back({node.planes[i].normal, node.planes[i].offset, node.plane_sign[i]});
        cs.push_back({normal, offset, sign});
        return max_slack(cs, dim, box);
    };
    auto make_child = [&](int sign, const Eigen::VectorXd& witness, double slack) {
        MultiNode child = node;
        child.planes.push_back({normal, offset});
        child.plane_sign.push_back(static_cast<std::int8_t>(sign));
        child.bits.push_back(static_cast<std::int8_t>(sign));
        child.witness = witness;
        child.slack = slack;
        return child;
    };

    bool have_keep = false;
    MultiNode keep;
    double keep_reject_slack = 0.0;
    if (std::abs(margin) >= safe && node.slack >= safe) {
        keep = make_child(witness_side, node.witness, std::min(node.slack, std::abs(margin)));
        have_keep = true;
    } else {
        auto res = solve_side(witness_side);
        if (res.feasible) {
            keep = make_child(witness_side, *res.point, res.max_slack);
            have_keep = true;
            diag.min_accepted_slack = std::min(diag.min_accepted_slack, res.max_slack);
        } else {
            keep_reject_slack = res.max_slack;
            diag.max_rejected_slack = std::max(diag.max_rejected_slack, res.max_slack);
        }
    }

    auto other = solve_side(-witness_side);
    bool have_split = false;
    MultiNode split;
    if (other.feasible) {
        split = make_child(-witness_side, *other.point, other.max_slack);
        have_split = true;
        diag.min_accepted_slack = std::min(diag.min_accepted_slack, other.max_slack);
    } else {
        diag.max_rejected_slack = std::max(diag.max_rejected_slack, other.max_slack);
    }

    if (!have_keep && !have_split) {
        const int sign = keep_reject_slack >= other.max_slack ? witness_side : -witness_side;
        out.push_back(make_child(sign, node.witness, node.slack));
        return;
    }
    if (have_keep && have_split && witness_side > 0) std::swap(keep, split);
    if (have_keep) out.push_back(std::move(keep));
    if (have_split) out.push_back(std::move(split));
}

}  // namespace

MultiCountResult exact_count_multi(const GcnSpec& spec, const NormalizedAdjacency& adj,
                                   const Parameters& params, double box, int neuron_cap) {
    const int d = adj.node_count();
    if (const auto err = Parameters::shape_check(spec, params, d); !err.empty())
        throw ValidationError("exact_count_multi: " + err);
    const int neurons = spec.neuron_count(d);
    if (neurons > neuron_cap)
        throw CapExceeded("exact_count_multi: " + std::to_string(neurons) + " neurons exceed cap " +
                          std::to_string(neuron_cap) + "; use the sampler estimate instead");

    const int dim = d * spec.input_features();
    MultiCountResult res;

    auto root_lp = max_slack({}, dim, box);
    MultiNode root;
    root.map = Eigen::MatrixXd::Identity(dim, dim);
    root.off = Eigen::VectorXd::Zero(dim);
    root.witness = *root_lp.point;
    root.slack = root_lp.max_slack;

    std::vector<MultiNode> frontier{std::move(root)};
    for (int l = 0; l < spec.layer_count(); ++l) {
        const auto& w = params.weights[static_cast<std::size_t>(l)];
        const auto& b = params.biases[static_cast<std::size_t>(l)];
        const int n_out = static_cast<int>(w.cols());

        // Group nodes by identical earlier-layer signs? Each node already has
        // its own affine map, so the preactivation map is per node.
        std::vector<MultiNode> expanded;
        for (auto& node : frontier) {
            Eigen::MatrixXd pre_map;
            Eigen::VectorXd pre_off;
            layer_affine(adj, w, b, node.map, node.off, pre_map, pre_off);

            std::vector<MultiNode> locals{std::move(node)};
            for (int idx = 0; idx < d * n_out; ++idx) {
                const Eigen::VectorXd normal = pre_map.row(idx).transpose();
                const double offset = pre_off(idx);
                if (normal.cwiseAbs().maxCoeff() <= kDegenerateNormal) {
                    // Constant preactivation over the whole region; the tie
                    // rule maps an exactly-zero preactivation to inactive.
                    const std::int8_t bit = offset > kDegenerateNormal ? 1 : -1;
                    for (auto& n : locals) n.bits.push_back(bit);
                    continue;
                }
                std::vector<std::vector<MultiNode>> buckets(locals.size());
                std::vector<CountDiagnostics> diags(locals.size());
                parallel_for(locals.size(), [&](std::size_t begin, std::size_t end) {
                    for (std::size_t i = begin; i < end; ++i)
                        split_multi(locals[i], normal, offset, dim, box, buckets[i], diags[i]);
                });
                std::vector<MultiNode> next;
                next.reserve(locals.size() * 2);
                for (std::size_t i = 0; i < buckets.size(); ++i) {
                    res.diagnostics.merge(diags[i]);
                    for (auto& child : buckets[i]) next.push_back(std::move(child));
                }
                locals = std::move(next);
            }
            // ReLU masking: inactive neurons zero out their affine rows.
            for (auto& n : locals) {
                Eigen::MatrixXd out_map = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d) * n_out, dim);
                Eigen::VectorXd out_off = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d) * n_out);
                const std::size_t base = n.bits.size() - static_cast<std::size_t>(d) * n_out;
                for (int idx = 0; idx < d * n_out; ++idx) {
                    if (n.bits[base + static_cast<std::size_t>(idx)] > 0) {
                        out_map.row(idx) = pre_map.row(idx);
                        out_off(idx) = pre_off(idx);
                    }
                }
                n.map = std::move(out_map);
                n.off = std::move(out_off);
                expanded.push_back(std::move(n));
            }
        }
        frontier = std::move(expanded);
    }

    res.count = static_cast<long>(frontier.size());
    res.patterns.reserve(frontier.size());
    res.regions.reserve(frontier.size());
    for (auto& node : frontier) {
        ActivationPattern p(neurons);
        for (int i = 0; i < neurons; ++i) p.set(i, node.bits[static_cast<std::size_t>(i)] > 0);
        res.patterns.push_back(std::move(p));
        res.regions.push_back({std::move(node.bits), std::move(node.witness), node.slack});
    }
    return res;
}

GenericityReport check_genericity(const NormalizedAdjacency& adj, const Eigen::MatrixXd& w,
                                  const Eigen::MatrixXd& b, const CountDiagnostics* diagnostics) {
    GenericityReport rep;
    const int n_in = static_cast<int>(w.rows());
    const int n_out = static_cast<int>(w.cols());

    // Work on the deduplicated rows: repeated adjacency rows produce
    // coincident hyperplanes structurally, and the closed forms already
    // account for them through D*.
    struct Plane {
        Eigen::VectorXd normal;
        double offset;
        int row;
    };
    std::vector<Plane> planes;
    for (int i = 0; i < adj.d_star; ++i) {
        for (int j = 0; j < n_out; ++j) {
            Eigen::VectorXd normal(static_cast<Eigen::Index>(adj.node_count()) * n_in);
            for (int u = 0; u < adj.node_count(); ++u)
                for (int v = 0; v < n_in; ++v)
                    normal(static_cast<Eigen::Index>(u) * n_in + v) = adj.a_tilde(i, u) * w(v, j);
            if (normal.cwiseAbs().maxCoeff() <= kDegenerateNormal) continue;
            planes.push_back({std::move(normal), b(b.rows() == 1 ? 0 : i, j), i});
        }
    }
    for (std::size_t p = 0; p < planes.size(); ++p) {
        const double np = planes[p].normal.norm();
        for (std::size_t q = p + 1; q < planes.size(); ++q) {
            const double nq = planes[q].normal.norm();
            const double cosv = planes[p].normal.dot(planes[q].normal) / (np * nq);
            const double sinv = std::sqrt(std::max(0.0, 1.0 - std::min(1.0, cosv * cosv)));
            if (sinv > 1e-6) continue;
            // Same-row parallels are the structured pencil the formulas
            // expect (parallel weight columns collapse the K-set instead);
            // parallels across independent rows mean the row structure broke.
            if (planes[p].row != planes[q].row) rep.parallel_normals = true;
            const double dist = planes[p].offset / np - (cosv >= 0 ? 1.0 : -1.0) * planes[q].offset / nq;
            if (std::abs(dist) <= 1e-9) rep.coincident_planes = true;
        }
    }
    if (adj.d_star * n_out <= 20)
        rep.kset_below_max = kset_count(adj, w) < one_layer_max(adj.d_star, n_in, n_out);
    if (diagnostics) rep.marginal_slack = diagnostics->marginal();
    return rep;
}

}  // namespace ratlas

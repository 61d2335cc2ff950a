#include "ratlas/witness.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "ratlas/arrangement.hpp"
#include "ratlas/bounds.hpp"
#include "ratlas/errors.hpp"
#include "ratlas/rng.hpp"

namespace ratlas {

double sawtooth_fold(int p, double c, double y) {
    if (p < 1) throw ValidationError("sawtooth_fold: p must be >= 1");
    if (!(c > 0.0)) throw ValidationError("sawtooth_fold: c must be positive");
    double v = std::max(0.0, static_cast<double>(p) * y);
    for (int m = 2; m <= p; ++m) {
        const double tooth = std::max(0.0, 2.0 * (p * y - (m - 1) * c));
        v += (m % 2 == 1) ? tooth : -tooth;
    }
    return v;
}

namespace {

constexpr std::uint64_t kFinalWeightStream = 0x77690001;
constexpr std::uint64_t kFinalBiasStream = 0x77690002;

// Raw block weight of one folding layer: feature block k gets one tooth of
// slope p and p-1 teeth of slope 2p; surplus columns stay zero.
Eigen::MatrixXd raw_fold_weight(int n_in, int n_out, int p) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n_in, n_out);
    for (int k = 0; k < n_in; ++k)
        for (int m = 1; m <= p; ++m) w(k, p * k + (m - 1)) = m == 1 ? p : 2 * p;
    return w;
}

// Node-resolved tooth offsets; surplus features get a flat negative bias so
// they stay inactive everywhere.
Eigen::MatrixXd raw_fold_bias(int d, int n_in, int n_out, int p, const std::vector<double>& r) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Constant(d, n_out, -1.0);
    for (int a = 0; a < d; ++a) {
        const double scale = std::sqrt(r[static_cast<std::size_t>(a)]);
        for (int k = 0; k < n_in; ++k)
            for (int m = 1; m <= p; ++m) b(a, p * k + (m - 1)) = -2.0 * (m - 1) * scale;
    }
    return b;
}

// Alternating tooth signs; collapsing this sign layer into the next weight
// keeps the witness a plain network.
Eigen::MatrixXd fold_sign_matrix(int n_in, int n_out, int p) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n_out, n_in);
    for (int k = 0; k < n_in; ++k)
        for (int m = 1; m <= p; ++m) s(p * k + (m - 1), k) = (m % 2 == 1) ? 1.0 : -1.0;
    return s;
}

}  // namespace

std::pair<Parameters, WitnessPlan> build_witness(const GcnSpec& spec, const NormalizedAdjacency& adj,
                                                 std::uint64_t final_seed) {
    const int layers = spec.layer_count();
    const int n0 = spec.input_features();
    if (layers < 2) throw ValidationError("build_witness: need at least two layers");
    for (int l = 1; l < layers; ++l)
        if (spec.widths[static_cast<std::size_t>(l)] < n0)
            throw ValidationError("build_witness: folding layer " + std::to_string(l) + " has width " +
                                  std::to_string(spec.widths[static_cast<std::size_t>(l)]) +
                                  " < N_0 = " + std::to_string(n0) +
                                  "; the construction assumes N_l >= N_0");

    const int d = adj.node_count();
    WitnessPlan plan;
    plan.widths = spec.widths;
    plan.final_seed = final_seed;
    plan.r.resize(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) plan.r[static_cast<std::size_t>(a)] = adj.degrees(a);
    for (int l = 1; l < layers; ++l)
        plan.p_per_layer.push_back(spec.widths[static_cast<std::size_t>(l)] / n0);

    double c_min = std::sqrt(plan.r[0]);
    for (double ra : plan.r) c_min = std::min(c_min, std::sqrt(ra));

    Parameters params;
    Eigen::MatrixXd carry = Eigen::MatrixXd::Identity(n0, n0);  // pending sign layer
    for (int l = 1; l < layers; ++l) {
        const int n_out = spec.widths[static_cast<std::size_t>(l)];
        const int p = plan.p_per_layer[static_cast<std::size_t>(l - 1)];
        params.weights.push_back(carry * raw_fold_weight(n0, n_out, p));
        params.biases.push_back(raw_fold_bias(d, n0, n_out, p, plan.r));
        carry = fold_sign_matrix(n0, n_out, p);
    }

    // Generic last layer; each hyperplane is placed to cross the interior of
    // the folded box along its main diagonal.
    const int n_last = spec.widths.back();
    const CounterRng rng(final_seed);
    Eigen::MatrixXd w_gen(n0, n_last);
    for (int k = 0; k < n0; ++k)
        for (int j = 0; j < n_last; ++j)
            w_gen(k, j) = rng.normal(kFinalWeightStream, static_cast<std::uint64_t>(k) * n_last + j);
    Eigen::MatrixXd b_last(1, n_last);
    for (int j = 0; j < n_last; ++j) {
        const double t = 0.30 + 0.25 * rng.u01(kFinalBiasStream, static_cast<std::uint64_t>(j));
        b_last(0, j) = -t * c_min * w_gen.col(j).sum();
    }
    params.weights.push_back(carry * w_gen);
    params.biases.push_back(b_last);
    return {std::move(params), std::move(plan)};
}

FoldingReport verify_folding(const GcnSpec& spec, const NormalizedAdjacency& adj, const WitnessPlan& plan,
                             int probes, std::uint64_t seed) {
    const int d = adj.node_count();
    const int n0 = spec.input_features();
    const CounterRng rng(seed);
    const double tol = 1e-9;
    FoldingReport rep;

    std::vector<double> c(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) c[static_cast<std::size_t>(a)] = std::sqrt(plan.r[static_cast<std::size_t>(a)]);

    auto random_box_point = [&](std::uint64_t stream, int probe) {
        Eigen::MatrixXd x(d, n0);
        for (int a = 0; a < d; ++a)
            for (int k = 0; k < n0; ++k)
                x(a, k) = c[static_cast<std::size_t>(a)] *
                          rng.u01(stream, static_cast<std::uint64_t>(probe) * static_cast<std::uint64_t>(d * n0) +
                                              static_cast<std::uint64_t>(a) * n0 + static_cast<std::uint64_t>(k));
        return x;
    };

    // (a) the aggregation step keeps the box invariant
    for (int probe = 0; probe < probes; ++probe) {
        const Eigen::MatrixXd x = random_box_point(1, probe);
        const Eigen::MatrixXd y = adj.a_hat * x;
        for (int a = 0; a < d; ++a) {
            for (int k = 0; k < n0; ++k) {
                const double violation =
                    std::max(-y(a, k), y(a, k) - c[static_cast<std::size_t>(a)]);
                rep.box_invariance.worst_residual = std::max(rep.box_invariance.worst_residual, violation);
                if (violation > tol) {
                    rep.box_invariance.pass = false;
                    rep.box_invariance.detail = "probe " + std::to_string(probe) + " node " + std::to_string(a) +
                                                " leaves the box by " + std::to_string(violation);
                }
            }
        }
    }

    // (b) folding layer == sawtooth of the aggregated input, coordinatewise
    for (std::size_t lp = 0; lp < plan.p_per_layer.size(); ++lp) {
        const int p = plan.p_per_layer[lp];
        const int n_out = plan.widths[lp + 1];
        const Eigen::MatrixXd w = raw_fold_weight(n0, n_out, p);
        const Eigen::MatrixXd b = raw_fold_bias(d, n0, n_out, p, plan.r);
        const Eigen::MatrixXd s = fold_sign_matrix(n0, n_out, p);
        for (int probe = 0; probe < probes; ++probe) {
            const Eigen::MatrixXd x = random_box_point(2 + lp, probe);
            const Eigen::MatrixXd y = adj.a_hat * x;
            const Eigen::MatrixXd z = (y * w + b).cwiseMax(0.0);
            const Eigen::MatrixXd u = z * s;
            for (int a = 0; a < d; ++a) {
                for (int k = 0; k < n0; ++k) {
                    const double want = sawtooth_fold(p, c[static_cast<std::size_t>(a)], y(a, k));
                    const double residual = std::abs(u(a, k) - want);
                    rep.sawtooth_match.worst_residual = std::max(rep.sawtooth_match.worst_residual, residual);
                    if (residual > tol) {
                        rep.sawtooth_match.pass = false;
                        rep.sawtooth_match.detail = "layer " + std::to_string(lp + 1) + " probe " +
                                                    std::to_string(probe) + " node " + std::to_string(a) +
                                                    " residual " + std::to_string(residual);
                    }
                }
            }
        }
    }

    // (c) each tooth maps its cell onto [0, c], monotonically, endpoints
    // alternating between {0, c}
    const int interior_samples = 33;
    for (std::size_t lp = 0; lp < plan.p_per_layer.size(); ++lp) {
        const int p = plan.p_per_layer[lp];
        for (int a = 0; a < d; ++a) {
            const double ca = c[static_cast<std::size_t>(a)];
            for (int cell = 0; cell < p; ++cell) {
                const double y0 = cell * ca / p;
                const double y1 = (cell + 1) * ca / p;
                const double f0 = sawtooth_fold(p, ca, y0);
                const double f1 = sawtooth_fold(p, ca, y1);
                const bool rising = cell % 2 == 0;
                const double want0 = rising ? 0.0 : ca;
                const double want1 = rising ? ca : 0.0;
                const double endpoint_err = std::max(std::abs(f0 - want0), std::abs(f1 - want1));
                rep.cell_onto.worst_residual = std::max(rep.cell_onto.worst_residual, endpoint_err);
                if (endpoint_err > tol) {
                    rep.cell_onto.pass = false;
                    rep.cell_onto.detail = "cell " + std::to_string(cell) + " endpoints off by " +
                                           std::to_string(endpoint_err);
                }
                double prev = f0;
                for (int i = 1; i <= interior_samples; ++i) {
                    const double y = y0 + (y1 - y0) * i / (interior_samples + 1.0);
                    const double f = sawtooth_fold(p, ca, y);
                    const bool interior_ok = f > tol && f < ca - tol;
                    const bool monotone_ok = rising ? f > prev : f < prev;
                    if (!interior_ok || !monotone_ok) {
                        rep.cell_onto.pass = false;
                        rep.cell_onto.detail = "cell " + std::to_string(cell) + " at y=" + std::to_string(y) +
                                               (interior_ok ? " breaks monotonicity" : " image not interior");
                    }
                    prev = f;
                }
            }
        }
    }
    return rep;
}

WitnessRegionCheck witness_region_check(const GcnSpec& spec, const NormalizedAdjacency& adj,
                                        std::uint64_t final_seed, double box) {
    const auto [params, plan] = build_witness(spec, adj, final_seed);
    WitnessRegionCheck check;
    check.exact = exact_count_multi(spec, adj, params, box).count;
    check.lower = multi_lower(spec, adj);
    check.pass = check.exact >= check.lower;
    return check;
}

std::string WitnessPlan::to_json() const {
    nlohmann::json j;
    j["p_per_layer"] = p_per_layer;
    j["r"] = r;
    j["widths"] = widths;
    j["final_seed"] = final_seed;
    return j.dump();
}

std::string FoldingReport::to_json() const {
    auto check_json = [](const FoldingCheck& c) {
        nlohmann::json j;
        j["pass"] = c.pass;
        j["worst_residual"] = c.worst_residual;
        if (!c.detail.empty()) j["detail"] = c.detail;
        return j;
    };
    nlohmann::json j;
    j["box_invariance"] = check_json(box_invariance);
    j["sawtooth_match"] = check_json(sawtooth_match);
    j["cell_onto"] = check_json(cell_onto);
    j["all_pass"] = all_pass();
    return j.dump(2);
}

}  // namespace ratlas

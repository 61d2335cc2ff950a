#include "ratlas/bounds.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "ratlas/errors.hpp"
#include "ratlas/linalg.hpp"

namespace ratlas {

BigInt binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt res = 1;
    for (int i = 0; i < k; ++i) {
        res *= n - i;
        res /= i + 1;
    }
    return res;
}

BigInt binom_sum(int n0, int n1) {
    if (n0 < 0 || n1 < 0) throw ValidationError("binom_sum: arguments must be >= 0");
    BigInt total = 0;
    for (int i = 0; i <= std::min(n0, n1); ++i) total += binom(n1, i);
    return total;
}

BigInt naive_bound(int n) {
    if (n < 0) throw ValidationError("naive_bound: n must be >= 0");
    return BigInt(1) << n;
}

BigInt one_layer_max(int d_star, int n_in, int n_out) {
    if (d_star < 1 || n_in < 1 || n_out < 1)
        throw ValidationError("one_layer_max: arguments must be >= 1");
    BigInt base = binom_sum(n_in, n_out);
    BigInt result = 1;
    for (int i = 0; i < d_star; ++i) result *= base;
    return result;
}

namespace {

// DFS over vectors in index order, keeping an orthonormal basis of the
// current subset. Every node of the tree is one independent subset.
struct KsetEnumerator {
    const std::vector<Eigen::VectorXd>& vecs;
    std::vector<Eigen::VectorXd> basis;
    BigInt count = 0;

    void run(std::size_t from) {
        ++count;  // the subset accumulated so far
        for (std::size_t i = from; i < vecs.size(); ++i) {
            Eigen::VectorXd residual = vecs[i];
            for (const auto& b : basis) residual -= b.dot(residual) * b;
            // repeat once for numerical stability (modified Gram-Schmidt pass)
            for (const auto& b : basis) residual -= b.dot(residual) * b;
            const double norm = residual.norm();
            if (norm <= kTol * vecs[i].norm()) continue;  // dependent, prune
            basis.push_back(residual / norm);
            run(i + 1);
            basis.pop_back();
        }
    }
};

}  // namespace

BigInt kset_count(const NormalizedAdjacency& adj, const Eigen::MatrixXd& w, int cap) {
    const int d_star = adj.d_star;
    const int n_in = static_cast<int>(w.rows());
    const int n_out = static_cast<int>(w.cols());
    if (d_star * n_out > cap)
        throw CapExceeded("kset_count: D* x N' = " + std::to_string(d_star * n_out) + " exceeds cap " +
                          std::to_string(cap) + "; use the closed-form one_layer_max instead");

    std::vector<Eigen::VectorXd> vecs;
    vecs.reserve(static_cast<std::size_t>(d_star) * n_out);
    for (int i = 0; i < d_star; ++i) {
        for (int j = 0; j < n_out; ++j) {
            Eigen::VectorXd v(static_cast<Eigen::Index>(adj.node_count()) * n_in);
            for (int u = 0; u < adj.node_count(); ++u)
                for (int f = 0; f < n_in; ++f) v(static_cast<Eigen::Index>(u) * n_in + f) = adj.a_tilde(i, u) * w(f, j);
            if (v.norm() <= kTol) v.setZero();  // exact zero vector never extends a subset
            vecs.push_back(std::move(v));
        }
    }

    KsetEnumerator e{vecs, {}, 0};
    e.basis.reserve(vecs.size());
    e.run(0);
    return e.count;
}

BigInt multi_upper(const GcnSpec& spec, const NormalizedAdjacency& adj) {
    const int d = adj.node_count();
    const int n0 = spec.input_features();
    BigInt result = one_layer_max(adj.d_star, n0, spec.widths[1]);
    for (int l = 2; l <= spec.layer_count(); ++l)
        result *= binom_sum(d * n0, d * spec.widths[static_cast<std::size_t>(l)]);
    return result;
}

BigInt multi_lower(const GcnSpec& spec, const NormalizedAdjacency& adj, int rank_a) {
    const int n0 = spec.input_features();
    const int layers = spec.layer_count();
    for (int l = 1; l < layers; ++l)
        if (spec.widths[static_cast<std::size_t>(l)] < n0)
            throw ValidationError("multi_lower: folding layer " + std::to_string(l) + " has width " +
                                  std::to_string(spec.widths[static_cast<std::size_t>(l)]) +
                                  " < N_0 = " + std::to_string(n0) +
                                  "; the construction assumes N_l >= N_0");
    BigInt result = one_layer_max(adj.d_star, n0, spec.widths.back());
    for (int l = 1; l < layers; ++l) {
        const BigInt p = spec.widths[static_cast<std::size_t>(l)] / n0;
        for (int e = 0; e < n0 * rank_a; ++e) result *= p;
    }
    return result;
}

BigInt multi_lower(const GcnSpec& spec, const NormalizedAdjacency& adj) {
    return multi_lower(spec, adj, numeric_rank(adj.a_hat));
}

BigInt nn_upper(int input_dim, const std::vector<int>& widths) {
    if (widths.empty()) throw ValidationError("nn_upper: widths must be nonempty");
    BigInt result = 1;
    for (int w : widths) result *= binom_sum(input_dim, w);
    return result;
}

BigRat per_param_ratio(const BigInt& region_bound, const GcnSpec& spec) {
    const BigInt params = param_count(spec);
    if (params <= 0) throw ValidationError("per_param_ratio: parameter count must be positive");
    return BigRat(region_bound, params);
}

int asymptotic_exponent(int d_star, int n_in) {
    if (d_star < 1 || n_in < 1) throw ValidationError("asymptotic_exponent: arguments must be >= 1");
    return d_star * n_in;
}

namespace {
std::string rat_str(const BigRat& r) {
    return r.str();  // "p/q" (or "p" when q == 1)
}
}  // namespace

std::string BoundReport::to_json() const {
    nlohmann::json j;
    j["naive"] = naive.str();
    if (one_layer) j["one_layer_max"] = one_layer->str();
    if (lower) j["multi_lower"] = lower->str();
    j["multi_upper"] = upper.str();
    j["params"] = params.str();
    if (ratio_lower) j["ratio_lower"] = rat_str(*ratio_lower);
    j["ratio_upper"] = rat_str(ratio_upper);
    if (!note.empty()) j["note"] = note;
    return j.dump(2);
}

BoundReport bound_report(const GcnSpec& spec, const NormalizedAdjacency& adj) {
    BoundReport r;
    r.naive = naive_bound(spec.neuron_count(adj.node_count()));
    if (spec.layer_count() == 1)
        r.one_layer = one_layer_max(adj.d_star, spec.input_features(), spec.widths[1]);
    r.upper = multi_upper(spec, adj);
    try {
        r.lower = multi_lower(spec, adj);
    } catch (const ValidationError& e) {
        r.note = e.what();
    }
    r.params = param_count(spec);
    if (r.lower) r.ratio_lower = per_param_ratio(*r.lower, spec);
    r.ratio_upper = per_param_ratio(r.upper, spec);
    return r;
}

}  // namespace ratlas

#include <cmath>

#include "doctest.h"
#include "ratlas/errors.hpp"
#include "ratlas/gcn.hpp"
#include "ratlas/graph.hpp"

using namespace ratlas;

namespace {
Parameters constant_params(const GcnSpec& spec, double w_value, double b_value) {
    Parameters p;
    for (int l = 0; l < spec.layer_count(); ++l) {
        p.weights.push_back(Eigen::MatrixXd::Constant(spec.widths[static_cast<std::size_t>(l)],
                                                      spec.widths[static_cast<std::size_t>(l) + 1], w_value));
        p.biases.push_back(Eigen::MatrixXd::Constant(1, spec.widths[static_cast<std::size_t>(l) + 1], b_value));
    }
    return p;
}
}  // namespace

TEST_CASE("forward: zero parameters give zero everywhere") {
    const auto adj = normalize(fixture(FixtureName::path3));
    const auto spec = GcnSpec::make({2, 3, 2});
    const auto params = constant_params(spec, 0.0, 0.0);
    const auto r = forward(spec, adj, params, Eigen::MatrixXd::Random(3, 2));
    for (const auto& z : r.preacts) CHECK(z.cwiseAbs().maxCoeff() == 0.0);
    for (const auto& x : r.outputs) CHECK(x.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("forward: single-node scalar arithmetic") {
    const auto adj = normalize(fixture(FixtureName::single1));
    const auto spec = GcnSpec::make({1, 1});
    Parameters p;
    p.weights.push_back(Eigen::MatrixXd::Constant(1, 1, 2.0));
    p.biases.push_back(Eigen::MatrixXd::Constant(1, 1, -1.0));
    const auto r = forward(spec, adj, p, Eigen::MatrixXd::Constant(1, 1, 3.0));
    CHECK(r.preacts[0](0, 0) == doctest::Approx(5.0));
    CHECK(r.outputs[0](0, 0) == doctest::Approx(5.0));
}

TEST_CASE("forward: path graph indicator input reads off an adjacency column") {
    const auto adj = normalize(fixture(FixtureName::path3));
    const auto spec = GcnSpec::make({1, 1});
    Parameters p;
    p.weights.push_back(Eigen::MatrixXd::Constant(1, 1, 1.0));
    p.biases.push_back(Eigen::MatrixXd::Zero(1, 1));
    Eigen::MatrixXd x0(3, 1);
    x0 << 1.0, 0.0, 0.0;
    const auto r = forward(spec, adj, p, x0);
    CHECK(r.preacts[0](0, 0) == doctest::Approx(0.5));
    CHECK(r.preacts[0](1, 0) == doctest::Approx(1.0 / std::sqrt(6.0)));
    CHECK(r.preacts[0](2, 0) == doctest::Approx(0.0));
}

TEST_CASE("forward: shape mismatch names the offending layer") {
    const auto adj = normalize(fixture(FixtureName::path3));
    const auto spec = GcnSpec::make({1, 2, 1});
    auto params = constant_params(spec, 1.0, 0.0);
    params.weights[1].resize(3, 1);  // wrong fan-in
    CHECK_THROWS_WITH_AS(forward(spec, adj, params, Eigen::MatrixXd::Zero(3, 1)), doctest::Contains("layer 2"),
                         ValidationError);
    CHECK_THROWS_AS(forward(spec, adj, constant_params(spec, 1, 0), Eigen::MatrixXd::Zero(2, 1)),
                    ValidationError);
}

TEST_CASE("pattern: signs, tie rule, bit count, stable ordering") {
    std::vector<Eigen::MatrixXd> preacts;
    Eigen::MatrixXd z(2, 2);
    z << 1.0, -2.0, 0.0, 3.0;
    preacts.push_back(z);
    const auto p = pattern(preacts);
    CHECK(p.size() == 4);
    CHECK(p.sign(0) == 1);
    CHECK(p.sign(1) == -1);
    CHECK(p.sign(2) == -1);  // exact zero counts as inactive
    CHECK(p.sign(3) == 1);
    CHECK(p.to_string() == "+--+");

    SUBCASE("all positive") {
        preacts[0] = Eigen::MatrixXd::Constant(2, 2, 0.5);
        const auto q = pattern(preacts);
        CHECK(q.to_string() == "++++");
    }
    SUBCASE("tolerance band maps to inactive") {
        preacts[0](0, 0) = 1e-12;
        const auto q = pattern(preacts, 1e-9);
        CHECK(q.sign(0) == -1);
    }
}

TEST_CASE("param_count matches the closed form") {
    CHECK(param_count(GcnSpec::make({1, 1})) == 2);
    CHECK(param_count(GcnSpec::make({1, 2, 3})) == 13);
    CHECK(param_count(GcnSpec::make({2, 2, 5})) == 21);
}

TEST_CASE("init_kaiming: deterministic, seed-sensitive, right moments") {
    const auto spec = GcnSpec::make({4, 8, 2});
    const auto a = init_kaiming(spec, 42);
    const auto b = init_kaiming(spec, 42);
    const auto c = init_kaiming(spec, 43);
    for (std::size_t l = 0; l < a.weights.size(); ++l) {
        CHECK((a.weights[l] - b.weights[l]).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.biases[l] - b.biases[l]).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK((a.weights[0] - c.weights[0]).cwiseAbs().maxCoeff() > 0.0);

    SUBCASE("sample variance of first-layer weights within 5% of 2/N_0") {
        const auto wide = GcnSpec::make({4, 25000});
        const auto params = init_kaiming(wide, 7);
        const auto& w = params.weights[0];  // 4 x 25000 = 1e5 draws
        const double mean = w.mean();
        const double var = (w.array() - mean).square().sum() / (static_cast<double>(w.size()) - 1);
        CHECK(var == doctest::Approx(2.0 / 4.0).epsilon(0.05));
    }

    SUBCASE("bias entries stay inside the uniform support") {
        const double half = 1.0 / std::sqrt(4.0);
        CHECK(a.biases[0].cwiseAbs().maxCoeff() <= half);
    }

    SUBCASE("parameter count equals generated entry count") {
        CHECK(param_count(spec) == BigInt(a.entry_count()));
    }
}

TEST_CASE("forward is positively homogeneous for zero-bias nets") {
    const auto adj = normalize(fixture(FixtureName::star3));
    const auto spec = GcnSpec::make({2, 3, 2});
    auto params = init_kaiming(spec, 5);
    for (auto& b : params.biases) b.setZero();
    const Eigen::MatrixXd x0 = Eigen::MatrixXd::Random(3, 2);
    const double scale = 3.7;
    const auto base = forward(spec, adj, params, x0);
    const auto scaled = forward(spec, adj, params, scale * x0);
    for (std::size_t l = 0; l < base.outputs.size(); ++l)
        CHECK((scaled.outputs[l] - scale * base.outputs[l]).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("finite-difference Jacobian is constant within a region") {
    const auto adj = normalize(fixture(FixtureName::path3));
    const auto spec = GcnSpec::make({1, 2, 2});
    const auto params = init_kaiming(spec, 11);

    // Two nearby points sharing a pattern see the same affine map.
    auto jacobian_and_pattern = [&](const Eigen::MatrixXd& x0) {
        const double eps = 1e-6;
        const auto base = forward(spec, adj, params, x0);
        Eigen::MatrixXd jac(base.outputs.back().size(), x0.size());
        for (int i = 0; i < x0.size(); ++i) {
            Eigen::MatrixXd xp = x0;
            xp(i / x0.cols(), i % x0.cols()) += eps;
            const auto bumped = forward(spec, adj, params, xp);
            const Eigen::MatrixXd diff = (bumped.outputs.back() - base.outputs.back()) / eps;
            for (int j = 0; j < diff.size(); ++j) jac(j, i) = diff(j / diff.cols(), j % diff.cols());
        }
        return std::make_pair(jac, pattern(base.preacts));
    };

    Eigen::MatrixXd x0 = Eigen::MatrixXd::Constant(3, 1, 0.9);
    int compared = 0;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd x1 = x0 + 1e-3 * Eigen::MatrixXd::Random(3, 1);
        auto [j0, p0] = jacobian_and_pattern(x0);
        auto [j1, p1] = jacobian_and_pattern(x1);
        if (!(p0 == p1)) continue;
        ++compared;
        const double denom = std::max(1.0, j0.cwiseAbs().maxCoeff());
        CHECK((j0 - j1).cwiseAbs().maxCoeff() / denom < 1e-6);
    }
    CHECK(compared > 0);
}

TEST_CASE("spec and parameters JSON round trips") {
    const auto spec = GcnSpec::make({2, 3, 1});
    CHECK(GcnSpec::from_json(spec.to_json()).widths == spec.widths);

    const auto params = init_kaiming(spec, 3);
    const auto back = Parameters::from_json(params.to_json());
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        CHECK((params.weights[l] - back.weights[l]).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((params.biases[l] - back.biases[l]).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("node-resolved bias keeps its shape") {
        Parameters p = params;
        p.biases[0] = Eigen::MatrixXd::Random(3, 3);
        const auto rt = Parameters::from_json(p.to_json());
        CHECK(rt.biases[0].rows() == 3);
        CHECK((rt.biases[0] - p.biases[0]).cwiseAbs().maxCoeff() < 1e-12);
    }
}

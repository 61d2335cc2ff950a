#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "ratlas/errors.hpp"
#include "ratlas/graph.hpp"
#include "ratlas/linalg.hpp"

using namespace ratlas;

namespace {
const double kInvSqrt6 = 1.0 / std::sqrt(6.0);

std::vector<FixtureName> all_fixtures() {
    return {FixtureName::path3, FixtureName::star3, FixtureName::fig2_graph4, FixtureName::triangle3,
            FixtureName::single1};
}
}  // namespace

TEST_CASE("normalize: 3-node path matches the printed matrix") {
    const auto adj = normalize(fixture(FixtureName::path3));
    Eigen::MatrixXd want(3, 3);
    want << 0.5, kInvSqrt6, 0.0, kInvSqrt6, 1.0 / 3.0, kInvSqrt6, 0.0, kInvSqrt6, 0.5;
    CHECK((adj.a_hat - want).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(adj.degrees(0) == doctest::Approx(2));
    CHECK(adj.degrees(1) == doctest::Approx(3));
    CHECK(adj.degrees(2) == doctest::Approx(2));
}

TEST_CASE("normalize: single node is the identity case") {
    const auto adj = normalize(fixture(FixtureName::single1));
    CHECK(adj.a_hat.rows() == 1);
    CHECK(adj.a_hat(0, 0) == doctest::Approx(1.0));
    CHECK(adj.degrees(0) == doctest::Approx(1.0));
    CHECK(adj.d_star == 1);
}

TEST_CASE("normalize: 3-node star matches the printed matrix") {
    const auto adj = normalize(fixture(FixtureName::star3));
    Eigen::MatrixXd want(3, 3);
    want << 1.0 / 3.0, kInvSqrt6, kInvSqrt6, kInvSqrt6, 0.5, 0.0, kInvSqrt6, 0.0, 0.5;
    CHECK((adj.a_hat - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("normalize: 4-node figure graph matches the printed matrix") {
    const auto g = fixture(FixtureName::fig2_graph4);
    CHECK(g.node_count == 4);
    CHECK(g.edges.size() == 3);
    const auto adj = normalize(g);
    Eigen::MatrixXd want(4, 4);
    want << 1.0 / 3.0, 1.0 / 3.0, kInvSqrt6, 0.0,
            1.0 / 3.0, 1.0 / 3.0, 0.0, kInvSqrt6,
            kInvSqrt6, 0.0, 0.5, 0.0,
            0.0, kInvSqrt6, 0.0, 0.5;
    CHECK((adj.a_hat - want).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(adj.d_star == 4);
    CHECK(numeric_rank(adj.a_hat) == 4);
}

TEST_CASE("dedup_rows: distinct rows survive, duplicate rows collapse") {
    const auto path = normalize(fixture(FixtureName::path3));
    CHECK(path.d_star == 3);

    const auto tri = normalize(fixture(FixtureName::triangle3));
    CHECK(tri.d_star == 1);
    // oracle: the all-1/3 matrix has numeric rank 1
    CHECK(numeric_rank(tri.a_hat) == 1);
    CHECK(tri.a_tilde.rows() == 1);

    SUBCASE("idempotent on the deduplicated matrix") {
        for (auto name : all_fixtures()) {
            const auto adj = normalize(fixture(name));
            auto [again, d2] = dedup_rows(adj.a_tilde);
            CHECK(d2 == adj.d_star);
            CHECK((again - adj.a_tilde).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("fixtures: unknown name lists the available ones") {
    CHECK_THROWS_WITH_AS(fixture("hexagon"), doctest::Contains("path3"), ValidationError);
    CHECK(fixture("star3").edges.size() == 2);
    CHECK(fixture("single1").node_count == 1);
}

TEST_CASE("graph validation rejects bad inputs") {
    CHECK_THROWS_AS(Graph::make(3, {{0, 0}}), ValidationError);
    CHECK_THROWS_AS(Graph::make(3, {{0, 3}}), ValidationError);
    CHECK_THROWS_AS(Graph::make(3, {{0, 1}, {1, 0}}), ValidationError);
    CHECK_THROWS_AS(Graph::make(0, {}), ValidationError);
}

TEST_CASE("graph JSON round trip") {
    const auto g = fixture(FixtureName::fig2_graph4);
    const auto back = Graph::from_json(g.to_json());
    CHECK(back.node_count == g.node_count);
    CHECK(back.edges == g.edges);
    CHECK_THROWS_AS(Graph::from_json("{\"nodes\": 2}"), ValidationError);
    CHECK_THROWS_AS(Graph::from_json("not json"), ValidationError);
}

TEST_CASE("every fixture: symmetry, nonnegativity, eigen relation, rank lemma") {
    for (auto name : all_fixtures()) {
        const auto adj = normalize(fixture(name));
        CHECK((adj.a_hat - adj.a_hat.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(adj.a_hat.minCoeff() >= 0.0);

        const Eigen::VectorXd v = adj.degrees.cwiseSqrt();
        CHECK((adj.a_hat * v - v).cwiseAbs().maxCoeff() <= 1e-9);

        CHECK(numeric_rank(adj.a_tilde) == adj.d_star);
        CHECK(adj.rank_matches_d_star);
    }
}

TEST_CASE("numeric_rank agrees with a dense SVD oracle on random matrices") {
    std::mt19937_64 gen(7);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 20; ++trial) {
        const int rows = 2 + static_cast<int>(gen() % 5);
        const int cols = 2 + static_cast<int>(gen() % 5);
        const int inner = 1 + static_cast<int>(gen() % static_cast<unsigned>(std::min(rows, cols)));
        Eigen::MatrixXd left(rows, inner), right(inner, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < inner; ++j) left(i, j) = dist(gen);
        for (int i = 0; i < inner; ++i)
            for (int j = 0; j < cols; ++j) right(i, j) = dist(gen);
        const Eigen::MatrixXd m = left * right;  // rank == inner almost surely

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        const auto& oracle = svd.singularValues();
        int oracle_rank = 0;
        for (Eigen::Index i = 0; i < oracle.size(); ++i)
            if (oracle(i) > 1e-9 * oracle(0)) ++oracle_rank;

        CHECK(numeric_rank(m) == oracle_rank);
        CHECK(numeric_rank(m) == inner);

        const auto mine = singular_values(m);
        for (std::size_t i = 0; i < mine.size(); ++i)
            CHECK(mine[i] == doctest::Approx(oracle(static_cast<Eigen::Index>(i))).epsilon(1e-9));
    }
    CHECK(numeric_rank(Eigen::MatrixXd::Zero(3, 3)) == 0);
}

#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "ratlas/arrangement.hpp"
#include "ratlas/bounds.hpp"
#include "ratlas/errors.hpp"
#include "ratlas/graph.hpp"
#include "ratlas/render.hpp"

using namespace ratlas;

namespace {

std::vector<std::string> row_of(const Table& t, const std::string& label) {
    for (const auto& row : t.rows)
        if (!row.empty() && row[0] == label) return row;
    return {};
}

// 4-connected flood fill over equal-colored pixels.
int color_components(const SliceImage& img) {
    const int g = img.width;
    auto at = [&](int x, int y) {
        const std::size_t i = 3 * (static_cast<std::size_t>(y) * g + x);
        return (static_cast<int>(img.pixels[i]) << 16) | (static_cast<int>(img.pixels[i + 1]) << 8) |
               img.pixels[i + 2];
    };
    std::vector<char> seen(static_cast<std::size_t>(g) * g, 0);
    int components = 0;
    for (int y = 0; y < g; ++y) {
        for (int x = 0; x < g; ++x) {
            if (seen[static_cast<std::size_t>(y) * g + x]) continue;
            ++components;
            const int color = at(x, y);
            std::vector<std::pair<int, int>> stack{{x, y}};
            seen[static_cast<std::size_t>(y) * g + x] = 1;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                const int dx[] = {1, -1, 0, 0};
                const int dy[] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    const int nx = cx + dx[k], ny = cy + dy[k];
                    if (nx < 0 || ny < 0 || nx >= g || ny >= g) continue;
                    if (seen[static_cast<std::size_t>(ny) * g + nx]) continue;
                    if (at(nx, ny) != color) continue;
                    seen[static_cast<std::size_t>(ny) * g + nx] = 1;
                    stack.emplace_back(nx, ny);
                }
            }
        }
    }
    return components;
}

}  // namespace

TEST_CASE("emit_table1 reproduces all fifteen tabulated values") {
    const auto t = emit_table1({1, 2, 3, 4, 5});
    CHECK(row_of(t, "one_layer_optimal") ==
          std::vector<std::string>{"one_layer_optimal", "8", "27", "64", "125", "216"});
    CHECK(row_of(t, "fully_connected_bound") ==
          std::vector<std::string>{"fully_connected_bound", "8", "42", "130", "299", "576"});
    CHECK(row_of(t, "naive_bound") ==
          std::vector<std::string>{"naive_bound", "8", "64", "512", "4096", "32768"});

    SUBCASE("emitters are pure: byte-identical CSV across calls") {
        CHECK(emit_table1({1, 2, 3, 4, 5}).to_csv() == t.to_csv());
        CHECK(!t.to_text().empty());
    }
}

TEST_CASE("emit_table2 bounds rows are exact; estimates respect them") {
    const auto t = emit_table2({1, 2, 3, 4, 5}, 19, 20'000);
    CHECK(row_of(t, "lower_bound") == std::vector<std::string>{"lower_bound", "8", "64", "343", "1331", "4096"});
    CHECK(row_of(t, "upper_bound") ==
          std::vector<std::string>{"upper_bound", "512", "4096", "29824", "160640", "636736"});
    const auto est = row_of(t, "simulated_estimate");
    REQUIRE(est.size() == 6);
    const auto upper = row_of(t, "upper_bound");
    // At CI-scale sample counts the estimate can sit below the lower bound
    // (it estimates one random draw, not the maximum); it can never exceed
    // the upper bound.
    for (std::size_t i = 1; i < est.size(); ++i) {
        CHECK(BigInt(est[i]) >= 1);
        CHECK(BigInt(est[i]) <= BigInt(upper[i]));
    }
}

TEST_CASE("figure curves: four-node graph") {
    const auto t = emit_figure_curves(FigureKind::fig2);
    REQUIRE(t.rows.size() == 19);

    SUBCASE("one-layer columns ordered, all equal 16 at N1 = 1") {
        for (const auto& row : t.rows) {
            const BigInt optimal(row[1]), fc(row[2]), naive(row[3]);
            CHECK(optimal <= fc);
            CHECK(fc <= naive);
        }
        CHECK(t.rows[0][1] == "16");
        CHECK(t.rows[0][2] == "16");
        CHECK(t.rows[0][3] == "16");
    }
    SUBCASE("printed and derived two-layer lower bounds disagree as flagged") {
        const auto& row = t.rows[1];  // N1 = 2
        CHECK(row[4] == "10000");  // 625 * 2^4
        CHECK(row[5] == "4096");   // 256 * 2^4
        CHECK(row.back().find("625") != std::string::npos);
    }
    SUBCASE("derived sandwich holds everywhere") {
        for (const auto& row : t.rows) CHECK(BigInt(row[5]) <= BigInt(row[7]));
    }
}

TEST_CASE("figure curves: star graph with two input features") {
    const auto t = emit_figure_curves(FigureKind::fig3);
    REQUIRE(t.rows.front()[0] == "2");

    SUBCASE("one-layer optimal matches the quadratic-cube formula") {
        for (const auto& row : t.rows) {
            const long n1 = std::stol(row[0]);
            const BigInt want = pow(BigInt(n1 * (n1 + 1) / 2 + 1), 3);
            CHECK(BigInt(row[1]) == want);
        }
    }
    SUBCASE("exponent discrepancy: printed cube vs derived sixth power") {
        for (const auto& row : t.rows) {
            const long n1 = std::stol(row[0]);
            const BigInt f = n1 / 2;
            CHECK(BigInt(row[4]) == 343 * pow(f, 3));
            CHECK(BigInt(row[5]) == 343 * pow(f, 6));
        }
        CHECK(t.rows[0].back().find("exponent") != std::string::npos);
    }
}

TEST_CASE("rasterize_slice: constant nets give one color") {
    const auto adj = normalize(fixture(FixtureName::path3));
    const auto spec = GcnSpec::make({1, 2});
    Parameters params;
    params.weights.push_back(Eigen::MatrixXd::Zero(1, 2));
    params.biases.push_back(Eigen::MatrixXd::Ones(1, 2));
    auto sspec = SliceSpec::random(3, 4, 40);
    const auto img = rasterize_slice(spec, adj, params, sspec);
    CHECK(img.distinct_patterns == 1);
    std::set<std::vector<std::uint8_t>> colors;
    for (std::size_t i = 0; i < img.pixels.size(); i += 3)
        colors.insert({img.pixels[i], img.pixels[i + 1], img.pixels[i + 2]});
    CHECK(colors.size() == 1);
}

TEST_CASE("rasterize_slice: a slice never sees more patterns than exist") {
    const auto adj = normalize(fixture(FixtureName::path3));
    const auto spec = GcnSpec::make({1, 1});
    const auto params = init_kaiming(spec, 6);
    const BigInt exact = exact_count_one_layer(adj, params.weights[0], params.biases[0]);
    auto sspec = SliceSpec::random(3, 9, 80);
    const auto img = rasterize_slice(spec, adj, params, sspec);
    CHECK(BigInt(img.distinct_patterns) <= exact);
    CHECK(img.distinct_patterns >= 1);

    SUBCASE("distinct colors equal distinct patterns (injective palette)") {
        std::set<std::vector<std::uint8_t>> colors;
        for (std::size_t i = 0; i < img.pixels.size(); i += 3)
            colors.insert({img.pixels[i], img.pixels[i + 1], img.pixels[i + 2]});
        CHECK(static_cast<int>(colors.size()) == img.distinct_patterns);
    }
    SUBCASE("one-layer regions are convex, so color classes are connected") {
        CHECK(color_components(img) == img.distinct_patterns);
    }
    SUBCASE("deterministic pixels across calls") {
        const auto again = rasterize_slice(spec, adj, params, sspec);
        CHECK(again.pixels == img.pixels);
    }
}

TEST_CASE("deeper nets show nondecreasing median slice pattern counts") {
    const auto adj = normalize(fixture(FixtureName::path3));
    std::vector<double> medians;
    for (int layers = 1; layers <= 3; ++layers) {
        std::vector<int> widths{1};
        for (int l = 0; l < layers; ++l) widths.push_back(3);
        const auto spec = GcnSpec::make(widths);
        std::vector<int> counts;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto params = init_kaiming(spec, 1000 + seed);
            const auto sspec = SliceSpec::random(3, seed, 48);
            counts.push_back(rasterize_slice(spec, adj, params, sspec).distinct_patterns);
        }
        std::sort(counts.begin(), counts.end());
        medians.push_back(0.5 * (counts[9] + counts[10]));
    }
    CHECK(medians[1] >= medians[0]);
    CHECK(medians[2] >= medians[1]);
}

TEST_CASE("rasterize_slice rejects degenerate anchors") {
    const auto adj = normalize(fixture(FixtureName::path3));
    const auto spec = GcnSpec::make({1, 1});
    const auto params = init_kaiming(spec, 6);
    SliceSpec s;
    s.a0 = Eigen::VectorXd::Zero(3);
    s.a1 = Eigen::VectorXd::Ones(3);
    s.a2 = 2.0 * s.a1;  // collinear
    s.grid = 16;
    CHECK_THROWS_AS(rasterize_slice(spec, adj, params, s), ValidationError);
}

TEST_CASE("ppm output is binary P6 with the right size") {
    const auto adj = normalize(fixture(FixtureName::single1));
    const auto spec = GcnSpec::make({1, 1});
    const auto params = init_kaiming(spec, 2);
    auto sspec = SliceSpec::random(1, 3, 20);
    // one input dimension cannot span a 2-D slice
    CHECK_THROWS_AS(rasterize_slice(spec, adj, params, sspec), ValidationError);

    const auto path = normalize(fixture(FixtureName::path3));
    auto s3 = SliceSpec::random(3, 3, 20);
    const auto img = rasterize_slice(spec, path, params, s3);
    const auto ppm = img.to_ppm();
    CHECK(ppm.substr(0, 3) == "P6\n");
    CHECK(ppm.find("20 20\n255\n") != std::string::npos);
    CHECK(ppm.size() > 20 * 20 * 3);
}

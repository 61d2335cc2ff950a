#include "ratlas/render.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ratlas/bounds.hpp"
#include "ratlas/errors.hpp"
#include "ratlas/linalg.hpp"
#include "ratlas/parallel.hpp"
#include "ratlas/rng.hpp"

namespace ratlas {

SliceSpec SliceSpec::random(int dim, std::uint64_t seed, int grid, double range) {
    const CounterRng rng(seed);
    SliceSpec s;
    s.grid = grid;
    s.range = range;
    s.seed = seed;
    s.a0.resize(dim);
    s.a1.resize(dim);
    s.a2.resize(dim);
    for (int i = 0; i < dim; ++i) {
        s.a0(i) = rng.normal(0xa0, static_cast<std::uint64_t>(i));
        s.a1(i) = rng.normal(0xa1, static_cast<std::uint64_t>(i));
        s.a2(i) = rng.normal(0xa2, static_cast<std::uint64_t>(i));
    }
    return s;
}

std::string SliceImage::to_ppm() const {
    std::ostringstream out;
    out << "P6\n" << width << ' ' << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    return out.str();
}

SliceImage rasterize_slice(const GcnSpec& spec, const NormalizedAdjacency& adj, const Parameters& params,
                           const SliceSpec& slice) {
    const int d = adj.node_count();
    const int n0 = spec.input_features();
    const int dim = d * n0;
    if (slice.a0.size() != dim || slice.a1.size() != dim || slice.a2.size() != dim)
        throw ValidationError("rasterize_slice: anchors must live in the flattened input space (dim " +
                              std::to_string(dim) + ")");
    Eigen::MatrixXd basis(dim, 2);
    basis.col(0) = slice.a1 - slice.a0;
    basis.col(1) = slice.a2 - slice.a0;
    if (numeric_rank(basis) < 2)
        throw ValidationError("rasterize_slice: anchors are affinely dependent; the slice is degenerate");
    if (const auto err = Parameters::shape_check(spec, params, d); !err.empty())
        throw ValidationError("rasterize_slice: " + err);

    const int g = slice.grid;
    std::vector<ActivationPattern> grid_patterns(static_cast<std::size_t>(g) * static_cast<std::size_t>(g));
    parallel_for(static_cast<std::size_t>(g), [&](std::size_t row_begin, std::size_t row_end) {
        for (std::size_t py = row_begin; py < row_end; ++py) {
            const double t = -slice.range + 2.0 * slice.range * static_cast<double>(py) / (g - 1);
            for (int px = 0; px < g; ++px) {
                const double s = -slice.range + 2.0 * slice.range * px / (g - 1);
                const Eigen::VectorXd flat =
                    slice.a0 + (s / slice.range) * basis.col(0) + (t / slice.range) * basis.col(1);
                Eigen::MatrixXd x0(d, n0);
                for (int u = 0; u < d; ++u)
                    for (int v = 0; v < n0; ++v) x0(u, v) = flat(static_cast<Eigen::Index>(u) * n0 + v);
                const auto fwd = forward(spec, adj, params, x0);
                grid_patterns[py * static_cast<std::size_t>(g) + static_cast<std::size_t>(px)] =
                    pattern(fwd.preacts);
            }
        }
    });

    // Deterministic colors: first-occurrence scan order, hash of the sign
    // word re-salted on collision so the palette stays injective.
    std::unordered_map<ActivationPattern, std::array<std::uint8_t, 3>, PatternHash> palette;
    std::unordered_set<std::uint32_t> used;
    for (const auto& p : grid_patterns) {
        if (palette.count(p)) continue;
        std::uint64_t h = p.hash();
        for (std::uint64_t salt = 0;; ++salt) {
            const std::uint32_t rgb = static_cast<std::uint32_t>(mix64(h ^ salt) & 0xffffffu);
            if (used.insert(rgb).second) {
                palette[p] = {static_cast<std::uint8_t>(rgb >> 16), static_cast<std::uint8_t>((rgb >> 8) & 0xff),
                              static_cast<std::uint8_t>(rgb & 0xff)};
                break;
            }
        }
    }

    SliceImage img;
    img.width = g;
    img.height = g;
    img.distinct_patterns = static_cast<int>(palette.size());
    img.pixels.resize(static_cast<std::size_t>(g) * static_cast<std::size_t>(g) * 3);
    for (std::size_t i = 0; i < grid_patterns.size(); ++i) {
        const auto& rgb = palette[grid_patterns[i]];
        img.pixels[3 * i] = rgb[0];
        img.pixels[3 * i + 1] = rgb[1];
        img.pixels[3 * i + 2] = rgb[2];
    }
    return img;
}

std::string Table::to_csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
    return out.str();
}

std::string Table::to_text() const {
    std::vector<std::size_t> width(header.size(), 0);
    auto widen = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size() && i < width.size(); ++i)
            width[i] = std::max(width[i], row[i].size());
    };
    widen(header);
    for (const auto& row : rows) widen(row);
    std::ostringstream out;
    auto print = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "  " : "");
            out << row[i] << std::string(width[i] - row[i].size(), ' ');
        }
        out << '\n';
    };
    print(header);
    for (const auto& row : rows) print(row);
    return out.str();
}

Table emit_table1(const std::vector<int>& n1_range) {
    Table t;
    t.header.push_back("quantity");
    for (int n1 : n1_range) t.header.push_back("N1=" + std::to_string(n1));
    std::vector<std::string> optimal{"one_layer_optimal"}, prop{"fully_connected_bound"}, naive{"naive_bound"};
    for (int n1 : n1_range) {
        optimal.push_back(one_layer_max(3, 1, n1).str());
        prop.push_back(binom_sum(3, 3 * n1).str());
        naive.push_back(naive_bound(3 * n1).str());
    }
    t.rows = {optimal, prop, naive};
    return t;
}

Table emit_table2(const std::vector<int>& n2_range, std::uint64_t seed, std::int64_t samples) {
    const auto adj = normalize(fixture(FixtureName::path3));
    Table t;
    t.header.push_back("quantity");
    for (int n2 : n2_range) t.header.push_back("N2=" + std::to_string(n2));
    std::vector<std::string> lower{"lower_bound"}, estimate{"simulated_estimate"}, upper{"upper_bound"};
    for (int n2 : n2_range) {
        const auto spec = GcnSpec::make({2, 2, n2});
        lower.push_back(multi_lower(spec, adj).str());
        upper.push_back(multi_upper(spec, adj).str());
        const auto params = init_kaiming(spec, seed + static_cast<std::uint64_t>(n2));
        estimate.push_back(full_sweep(spec, adj, params, seed, samples).max_over_configs.str());
    }
    t.rows = {lower, estimate, upper};
    return t;
}

Table emit_figure_curves(FigureKind kind, int n1_lo, int n1_hi) {
    const bool fig2 = kind == FigureKind::fig2;
    if (n1_lo == 0) n1_lo = fig2 ? 1 : 2;
    if (n1_hi == 0) n1_hi = fig2 ? 19 : 20;
    const auto adj = normalize(fixture(fig2 ? FixtureName::fig2_graph4 : FixtureName::star3));
    const int n0 = fig2 ? 1 : 2;
    const int n_last = 3;
    const int d = adj.node_count();
    const int rank_a = numeric_rank(adj.a_hat);

    Table t;
    t.header = {"N1",
                "one_layer_optimal",
                "one_layer_fc_bound",
                "one_layer_naive",
                "two_layer_lower_paper_printed",
                "two_layer_lower_formula_derived",
                "two_layer_upper_paper_printed",
                "two_layer_upper_formula_derived",
                "flags"};
    const std::string flags =
        fig2 ? "lower_coeff:paper_625_vs_derived_256;upper_sum_limit:paper_4N1_vs_derived_DN0"
             : "lower_exponent:paper_3_vs_derived_6;upper_sum_limit:paper_3N1_vs_derived_DN0";

    for (int n1 = n1_lo; n1 <= n1_hi; ++n1) {
        const BigInt optimal = one_layer_max(adj.d_star, n0, n1);
        const BigInt fc = binom_sum(d * n0, d * n1);
        const BigInt naive = naive_bound(d * n1);

        BigInt lower_paper;
        if (fig2) {
            lower_paper = BigInt(625) * BigInt(n1) * n1 * n1 * n1;
        } else {
            const BigInt f = n1 / 2;
            lower_paper = BigInt(343) * f * f * f;
        }
        BigInt lower_derived;
        {
            const auto spec = GcnSpec::make({n0, n1, n_last});
            lower_derived = n1 >= n0 ? multi_lower(spec, adj, rank_a) : BigInt(0);
        }
        const BigInt upper_paper = optimal * binom_sum(d * n1, d * n1);  // full 2^(D*N1) sum
        const BigInt upper_derived = optimal * binom_sum(d * n0, d * n_last);

        t.rows.push_back({std::to_string(n1), optimal.str(), fc.str(), naive.str(), lower_paper.str(),
                          lower_derived.str(), upper_paper.str(), upper_derived.str(), flags});
    }
    return t;
}

}  // namespace ratlas

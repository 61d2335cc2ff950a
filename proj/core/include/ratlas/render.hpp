#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ratlas/bigint.hpp"
#include "ratlas/gcn.hpp"
#include "ratlas/graph.hpp"
#include "ratlas/sampler.hpp"

namespace ratlas {

/// A 2-D slice through the flattened input space, spanned by three anchors.
/// Slice coordinates (s, t) in [-range, range]^2 map to
/// a0 + (s/range)(a1-a0) + (t/range)(a2-a0), so the anchors sit on the edge.
struct SliceSpec {
    Eigen::VectorXd a0, a1, a2;
    int grid = 300;
    double range = 10.0;
    std::uint64_t seed = 0;

    static SliceSpec random(int dim, std::uint64_t seed, int grid = 300, double range = 10.0);
};

struct SliceImage {
    int width = 0, height = 0;
    std::vector<std::uint8_t> pixels;  // RGB, row-major
    int distinct_patterns = 0;

    std::string to_ppm() const;  // binary P6
};

/// One activation pattern per pixel, one stable color per pattern (hash of
/// the packed sign word, re-salted until injective over the image).
SliceImage rasterize_slice(const GcnSpec& spec, const NormalizedAdjacency& adj, const Parameters& params,
                           const SliceSpec& slice);

/// Small table with CSV and aligned-text renderings; emitters are pure
/// functions of their numeric inputs.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
    std::string to_text() const;
};

/// Rows (one-layer optimal, fully-connected bound, naive bound) for the
/// 3-node path with one input feature, N_1 output features per column.
Table emit_table1(const std::vector<int>& n1_range);

/// Rows (lower bound, sampled estimate, upper bound) for the 3-node path
/// with widths [2, 2, N_2] per column. The estimate runs the eight-config
/// sampling sweep at `samples` draws per configuration.
Table emit_table2(const std::vector<int>& n2_range, std::uint64_t seed, std::int64_t samples = 2'000'000);

enum class FigureKind { fig2, fig3 };

/// Per-N_1 bound curves for the figure graphs. Where the printed figure
/// formula disagrees with the theorem formula both columns are emitted,
/// labeled paper_printed / formula_derived, with a flags column naming the
/// discrepancy instead of silently resolving it.
Table emit_figure_curves(FigureKind kind, int n1_lo = 0, int n1_hi = 0);

}  // namespace ratlas

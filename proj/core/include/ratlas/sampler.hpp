#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ratlas/bigint.hpp"
#include "ratlas/gcn.hpp"
#include "ratlas/graph.hpp"

namespace ratlas {

/// Input sampling distribution, entrywise i.i.d. over the D x N_0 input.
struct Distribution {
    enum class Kind { normal, uniform } kind = Kind::normal;
    double param = 1.0;  // sigma for normal, half-width u for uniform

    static Distribution normal(double sigma);
    static Distribution uniform(double u);
    /// Parses "normal:SIGMA" or "uniform:U".
    static Distribution parse(const std::string& text);
    std::string to_string() const;
};

struct SamplingConfig {
    Distribution dist;
    std::int64_t samples = 2'000'000;
    std::uint64_t seed = 0;
    std::int64_t batch = 65'536;
};

struct EstimateReport {
    BigInt distinct_patterns;
    std::int64_t samples_used = 0;
    std::vector<std::pair<SamplingConfig, BigInt>> per_config;
    BigInt max_over_configs;
    std::uint64_t seed = 0;

    std::string to_json() const;
};

/// Draws inputs, extracts activation patterns, deduplicates on the packed
/// sign word. Every variate is keyed by its sample index, so the result is
/// identical for any batch partition or thread count.
EstimateReport estimate_regions(const GcnSpec& spec, const NormalizedAdjacency& adj, const Parameters& params,
                                const SamplingConfig& cfg);

/// The eight-configuration protocol: normal with sigma^2 in {1,3,5,7,9} and
/// uniform with u in {1,5,10}, each at `samples` draws; reports every count
/// and their maximum.
EstimateReport full_sweep(const GcnSpec& spec, const NormalizedAdjacency& adj, const Parameters& params,
                           std::uint64_t seed, std::int64_t samples = 2'000'000);

/// Distinct-pattern counts at nested prefixes of one sample stream.
std::vector<std::pair<std::int64_t, BigInt>> saturation_curve(const GcnSpec& spec,
                                                              const NormalizedAdjacency& adj,
                                                              const Parameters& params,
                                                              const SamplingConfig& cfg,
                                                              const std::vector<std::int64_t>& checkpoints);

}  // namespace ratlas

#include "ratlas/sampler.hpp"

#include <algorithm>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "ratlas/errors.hpp"
#include "ratlas/parallel.hpp"
#include "ratlas/rng.hpp"

namespace ratlas {

Distribution Distribution::normal(double sigma) {
    if (!(sigma > 0.0)) throw ValidationError("distribution: sigma must be positive");
    return {Kind::normal, sigma};
}

Distribution Distribution::uniform(double u) {
    if (!(u > 0.0)) throw ValidationError("distribution: u must be positive");
    return {Kind::uniform, u};
}

Distribution Distribution::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ValidationError("distribution: expected normal:SIGMA or uniform:U, got '" + text + "'");
    const std::string kind = text.substr(0, colon);
    double value = 0.0;
    try {
        value = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw ValidationError("distribution: bad parameter in '" + text + "'");
    }
    if (kind == "normal") return normal(value);
    if (kind == "uniform") return uniform(value);
    throw ValidationError("distribution: unknown kind '" + kind + "'");
}

std::string Distribution::to_string() const {
    const char* name = kind == Kind::normal ? "normal" : "uniform";
    std::string v = std::to_string(param);
    v.erase(v.find_last_not_of('0') + 1);
    if (!v.empty() && v.back() == '.') v.pop_back();
    return std::string(name) + ":" + v;
}

namespace {

// Stream ids for the counter RNG; one lane per input entry per sample.
constexpr std::uint64_t kInputStream = 0x7a3f9e11;

Eigen::MatrixXd draw_input(const CounterRng& rng, const Distribution& dist, std::int64_t sample, int d,
                           int n0) {
    Eigen::MatrixXd x(d, n0);
    const auto base = static_cast<std::uint64_t>(sample) * static_cast<std::uint64_t>(d * n0);
    for (int u = 0; u < d; ++u) {
        for (int v = 0; v < n0; ++v) {
            const std::uint64_t idx = base + static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n0) +
                                      static_cast<std::uint64_t>(v);
            x(u, v) = dist.kind == Distribution::Kind::normal
                          ? dist.param * rng.normal(kInputStream, idx)
                          : rng.uniform(-dist.param, dist.param, kInputStream, idx);
        }
    }
    return x;
}

struct WordHash {
    std::size_t operator()(const std::vector<std::uint64_t>& w) const {
        std::uint64_t h = mix64(w.size());
        for (auto v : w) h = mix64(h ^ v);
        return static_cast<std::size_t>(h);
    }
};

using PatternSet = std::unordered_set<std::vector<std::uint64_t>, WordHash>;

PatternSet collect_range(const GcnSpec& spec, const NormalizedAdjacency& adj, const Parameters& params,
                         const SamplingConfig& cfg, std::int64_t begin, std::int64_t end) {
    const CounterRng rng(cfg.seed);
    const int d = adj.node_count();
    const int n0 = spec.input_features();
    PatternSet set;
    for (std::int64_t s = begin; s < end; ++s) {
        const auto x0 = draw_input(rng, cfg.dist, s, d, n0);
        const auto fwd = forward(spec, adj, params, x0);
        set.insert(pattern(fwd.preacts).words());
    }
    return set;
}

}  // namespace

EstimateReport estimate_regions(const GcnSpec& spec, const NormalizedAdjacency& adj, const Parameters& params,
                                const SamplingConfig& cfg) {
    if (cfg.samples < 1) throw ValidationError("estimate_regions: need at least one sample");
    if (cfg.batch < 1) throw ValidationError("estimate_regions: batch must be positive");
    if (const auto err = Parameters::shape_check(spec, params, adj.node_count()); !err.empty())
        throw ValidationError("estimate_regions: " + err);

    const std::int64_t batches = (cfg.samples + cfg.batch - 1) / cfg.batch;
    std::vector<PatternSet> partial(static_cast<std::size_t>(batches));
    parallel_for(static_cast<std::size_t>(batches), [&](std::size_t begin, std::size_t end) {
        for (std::size_t b = begin; b < end; ++b) {
            const std::int64_t lo = static_cast<std::int64_t>(b) * cfg.batch;
            const std::int64_t hi = std::min(cfg.samples, lo + cfg.batch);
            partial[b] = collect_range(spec, adj, params, cfg, lo, hi);
        }
    });

    PatternSet all;
    for (auto& p : partial) all.merge(p);

    EstimateReport rep;
    rep.distinct_patterns = static_cast<long>(all.size());
    rep.samples_used = cfg.samples;
    rep.per_config.emplace_back(cfg, rep.distinct_patterns);
    rep.max_over_configs = rep.distinct_patterns;
    rep.seed = cfg.seed;
    return rep;
}

EstimateReport full_sweep(const GcnSpec& spec, const NormalizedAdjacency& adj, const Parameters& params,
                           std::uint64_t seed, std::int64_t samples) {
    std::vector<Distribution> dists;
    for (double var : {1.0, 3.0, 5.0, 7.0, 9.0}) dists.push_back(Distribution::normal(std::sqrt(var)));
    for (double u : {1.0, 5.0, 10.0}) dists.push_back(Distribution::uniform(u));

    EstimateReport rep;
    rep.samples_used = samples;
    rep.seed = seed;
    rep.max_over_configs = 0;
    for (const auto& dist : dists) {
        SamplingConfig cfg{dist, samples, seed, 65'536};
        const auto one = estimate_regions(spec, adj, params, cfg);
        rep.per_config.emplace_back(cfg, one.distinct_patterns);
        rep.max_over_configs = std::max(rep.max_over_configs, one.distinct_patterns);
    }
    rep.distinct_patterns = rep.max_over_configs;
    return rep;
}

std::vector<std::pair<std::int64_t, BigInt>> saturation_curve(const GcnSpec& spec,
                                                              const NormalizedAdjacency& adj,
                                                              const Parameters& params,
                                                              const SamplingConfig& cfg,
                                                              const std::vector<std::int64_t>& checkpoints) {
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1])
            throw ValidationError("saturation_curve: checkpoints must be ascending");
    if (!checkpoints.empty() && checkpoints.front() < 1)
        throw ValidationError("saturation_curve: checkpoints must be >= 1");

    std::vector<std::pair<std::int64_t, BigInt>> curve;
    PatternSet set;
    const CounterRng rng(cfg.seed);
    const int d = adj.node_count();
    const int n0 = spec.input_features();
    std::int64_t done = 0;
    for (std::int64_t cp : checkpoints) {
        for (; done < cp; ++done) {
            const auto x0 = draw_input(rng, cfg.dist, done, d, n0);
            const auto fwd = forward(spec, adj, params, x0);
            set.insert(pattern(fwd.preacts).words());
        }
        curve.emplace_back(cp, static_cast<long>(set.size()));
    }
    return curve;
}

namespace {
nlohmann::json config_json(const SamplingConfig& cfg) {
    nlohmann::json j;
    j["dist"] = cfg.dist.to_string();
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    j["batch"] = cfg.batch;
    return j;
}
}  // namespace

std::string EstimateReport::to_json() const {
    nlohmann::json j;
    j["distinct_patterns"] = distinct_patterns.str();
    j["samples_used"] = samples_used;
    j["max_over_configs"] = max_over_configs.str();
    j["seed"] = seed;
    j["per_config"] = nlohmann::json::array();
    for (const auto& [cfg, count] : per_config) {
        nlohmann::json e;
        e["config"] = config_json(cfg);
        e["count"] = count.str();
        j["per_config"].push_back(std::move(e));
    }
    return j.dump(2);
}

}  // namespace ratlas

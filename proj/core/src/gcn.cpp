#include "ratlas/gcn.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ratlas/errors.hpp"
#include "ratlas/rng.hpp"

namespace ratlas {

GcnSpec GcnSpec::make(std::vector<int> widths) {
    if (widths.size() < 2) throw ValidationError("spec: need at least [N_0, N_1]");
    for (int w : widths)
        if (w < 1) throw ValidationError("spec: widths must be >= 1");
    GcnSpec s;
    s.widths = std::move(widths);
    return s;
}

GcnSpec GcnSpec::from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("spec: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("widths")) throw ValidationError("spec: expected {\"widths\": [...]}");
    return make(j["widths"].get<std::vector<int>>());
}

std::string GcnSpec::to_json() const {
    nlohmann::json j;
    j["widths"] = widths;
    return j.dump();
}

int GcnSpec::neuron_count(int node_count) const {
    int total = 0;
    for (std::size_t l = 1; l < widths.size(); ++l) total += node_count * widths[l];
    return total;
}

std::string Parameters::shape_check(const GcnSpec& spec, const Parameters& p, int node_count) {
    const int layers = spec.layer_count();
    if (static_cast<int>(p.weights.size()) != layers || static_cast<int>(p.biases.size()) != layers)
        return "parameters hold " + std::to_string(p.weights.size()) + " layers, spec expects " +
               std::to_string(layers);
    for (int l = 0; l < layers; ++l) {
        const auto& w = p.weights[static_cast<std::size_t>(l)];
        if (w.rows() != spec.widths[static_cast<std::size_t>(l)] ||
            w.cols() != spec.widths[static_cast<std::size_t>(l) + 1])
            return "layer " + std::to_string(l + 1) + ": weight is " + std::to_string(w.rows()) + "x" +
                   std::to_string(w.cols()) + ", expected " + std::to_string(spec.widths[static_cast<std::size_t>(l)]) +
                   "x" + std::to_string(spec.widths[static_cast<std::size_t>(l) + 1]);
        const auto& b = p.biases[static_cast<std::size_t>(l)];
        if (b.cols() != spec.widths[static_cast<std::size_t>(l) + 1] || (b.rows() != 1 && b.rows() != node_count))
            return "layer " + std::to_string(l + 1) + ": bias is " + std::to_string(b.rows()) + "x" +
                   std::to_string(b.cols()) + ", expected 1x" +
                   std::to_string(spec.widths[static_cast<std::size_t>(l) + 1]) + " or " + std::to_string(node_count) +
                   "x" + std::to_string(spec.widths[static_cast<std::size_t>(l) + 1]);
    }
    return {};
}

Parameters Parameters::from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("parameters: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("weights") || !j.contains("biases"))
        throw ValidationError("parameters: expected {\"weights\": [...], \"biases\": [...]}");
    Parameters p;
    for (const auto& wj : j["weights"]) {
        const auto rows = wj.size();
        if (rows == 0) throw ValidationError("parameters: empty weight matrix");
        const auto cols = wj[0].size();
        Eigen::MatrixXd w(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (std::size_t r = 0; r < rows; ++r) {
            if (wj[r].size() != cols) throw ValidationError("parameters: ragged weight matrix");
            for (std::size_t c = 0; c < cols; ++c) w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = wj[r][c].get<double>();
        }
        p.weights.push_back(std::move(w));
    }
    for (const auto& bj : j["biases"]) {
        if (bj.empty()) throw ValidationError("parameters: empty bias");
        Eigen::MatrixXd b;
        if (bj[0].is_array()) {  // node-resolved bias
            const auto rows = bj.size();
            const auto cols = bj[0].size();
            b.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
            for (std::size_t r = 0; r < rows; ++r) {
                if (bj[r].size() != cols) throw ValidationError("parameters: ragged bias matrix");
                for (std::size_t c = 0; c < cols; ++c) b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = bj[r][c].get<double>();
            }
        } else {
            b.resize(1, static_cast<Eigen::Index>(bj.size()));
            for (std::size_t c = 0; c < bj.size(); ++c) b(0, static_cast<Eigen::Index>(c)) = bj[c].get<double>();
        }
        p.biases.push_back(std::move(b));
    }
    return p;
}

std::string Parameters::to_json() const {
    nlohmann::json j;
    j["weights"] = nlohmann::json::array();
    for (const auto& w : weights) {
        nlohmann::json wj = nlohmann::json::array();
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < w.cols(); ++c) row.push_back(w(r, c));
            wj.push_back(std::move(row));
        }
        j["weights"].push_back(std::move(wj));
    }
    j["biases"] = nlohmann::json::array();
    for (const auto& b : biases) {
        if (b.rows() == 1) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < b.cols(); ++c) row.push_back(b(0, c));
            j["biases"].push_back(std::move(row));
        } else {
            nlohmann::json bj = nlohmann::json::array();
            for (Eigen::Index r = 0; r < b.rows(); ++r) {
                nlohmann::json row = nlohmann::json::array();
                for (Eigen::Index c = 0; c < b.cols(); ++c) row.push_back(b(r, c));
                bj.push_back(std::move(row));
            }
            j["biases"].push_back(std::move(bj));
        }
    }
    return j.dump();
}

std::int64_t Parameters::entry_count() const {
    std::int64_t n = 0;
    for (const auto& w : weights) n += static_cast<std::int64_t>(w.size());
    for (const auto& b : biases) n += static_cast<std::int64_t>(b.size());
    return n;
}

ActivationPattern::ActivationPattern(int bit_count)
    : size_(bit_count), words_(static_cast<std::size_t>((bit_count + 63) / 64), 0) {}

void ActivationPattern::set(int i, bool positive) {
    const auto word = static_cast<std::size_t>(i) >> 6;
    const std::uint64_t mask = 1ULL << (static_cast<unsigned>(i) & 63u);
    if (positive)
        words_[word] |= mask;
    else
        words_[word] &= ~mask;
}

int ActivationPattern::sign(int i) const {
    const auto word = static_cast<std::size_t>(i) >> 6;
    return (words_[word] >> (static_cast<unsigned>(i) & 63u)) & 1u ? 1 : -1;
}

std::uint64_t ActivationPattern::hash() const {
    std::uint64_t h = mix64(static_cast<std::uint64_t>(size_));
    for (std::uint64_t w : words_) h = mix64(h ^ w);
    return h;
}

std::string ActivationPattern::to_string() const {
    std::string s(static_cast<std::size_t>(size_), '-');
    for (int i = 0; i < size_; ++i)
        if (sign(i) > 0) s[static_cast<std::size_t>(i)] = '+';
    return s;
}

ForwardResult forward(const GcnSpec& spec, const NormalizedAdjacency& adj, const Parameters& params,
                      const Eigen::MatrixXd& x0) {
    const int d = adj.node_count();
    if (x0.rows() != d || x0.cols() != spec.input_features())
        throw ValidationError("forward: input is " + std::to_string(x0.rows()) + "x" + std::to_string(x0.cols()) +
                              ", expected " + std::to_string(d) + "x" + std::to_string(spec.input_features()));
    if (const auto err = Parameters::shape_check(spec, params, d); !err.empty())
        throw ValidationError("forward: " + err);

    ForwardResult r;
    Eigen::MatrixXd x = x0;
    for (int l = 0; l < spec.layer_count(); ++l) {
        const auto& w = params.weights[static_cast<std::size_t>(l)];
        const auto& b = params.biases[static_cast<std::size_t>(l)];
        Eigen::MatrixXd z = adj.a_hat * x * w;
        if (b.rows() == 1)
            z.rowwise() += b.row(0);
        else
            z += b;
        r.preacts.push_back(z);
        x = z.cwiseMax(0.0);
        r.outputs.push_back(x);
    }
    return r;
}

ActivationPattern pattern(const std::vector<Eigen::MatrixXd>& preacts, double tol) {
    int total = 0;
    for (const auto& z : preacts) total += static_cast<int>(z.size());
    ActivationPattern p(total);
    int idx = 0;
    for (const auto& z : preacts)
        for (Eigen::Index node = 0; node < z.rows(); ++node)
            for (Eigen::Index f = 0; f < z.cols(); ++f) p.set(idx++, z(node, f) > tol);
    return p;
}

BigInt param_count(const GcnSpec& spec) {
    BigInt total = 0;
    for (std::size_t l = 1; l < spec.widths.size(); ++l)
        total += BigInt(spec.widths[l - 1]) * spec.widths[l] + spec.widths[l];
    return total;
}

Parameters init_kaiming(const GcnSpec& spec, std::uint64_t seed) {
    const CounterRng rng(seed);
    Parameters p;
    for (int l = 0; l < spec.layer_count(); ++l) {
        const int fan_in = spec.widths[static_cast<std::size_t>(l)];
        const int fan_out = spec.widths[static_cast<std::size_t>(l) + 1];
        const double w_sigma = std::sqrt(2.0 / fan_in);
        const double b_half = 1.0 / std::sqrt(static_cast<double>(fan_in));
        Eigen::MatrixXd w(fan_in, fan_out);
        for (int r = 0; r < fan_in; ++r)
            for (int c = 0; c < fan_out; ++c)
                w(r, c) = w_sigma * rng.normal(2 * static_cast<std::uint64_t>(l),
                                               static_cast<std::uint64_t>(r) * fan_out + c);
        Eigen::MatrixXd b(1, fan_out);
        for (int c = 0; c < fan_out; ++c)
            b(0, c) = rng.uniform(-b_half, b_half, 2 * static_cast<std::uint64_t>(l) + 1, static_cast<std::uint64_t>(c));
        p.weights.push_back(std::move(w));
        p.biases.push_back(std::move(b));
    }
    return p;
}

}  // namespace ratlas

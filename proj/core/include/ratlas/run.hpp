#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ratlas {

/// Resolved invocation of one toolkit command. A JSON config file can supply
/// any field; command-line flags win over the file.
struct RunConfig {
    std::string command;            // bounds | count | estimate | witness | slice | reproduce
    std::string graph = "path3";    // fixture name or path to a graph JSON file
    std::vector<int> widths = {1, 3};
    std::uint64_t seed = 0;
    double box = 1e4;
    std::int64_t samples = 2'000'000;
    std::string dist;               // "normal:SIGMA" or "uniform:U"; empty = full sweep
    std::string output = ".";
    int threads = 0;                // 0 = env/hardware default
    bool fast = false;              // drop sampling to 1e5 draws per config

    static RunConfig from_json(const std::string& json_text);
    std::string to_json() const;
};

/// Every violated precondition, without running anything.
std::vector<std::string> validate(const RunConfig& config);

/// Executes the command, writing artifacts plus a run_config.json sidecar
/// under config.output. Returns 0 on success, 2 on validation errors, 3 when
/// a cap or the solver gives up.
int run(const RunConfig& config);

}  // namespace ratlas

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ratlas/parallel.hpp"
#include "ratlas/run.hpp"

using namespace ratlas;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("ratlas_test_" + std::to_string(std::random_device{}()) +
                                                  "_" + std::to_string(counter++))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static inline int counter = 0;
};

}  // namespace

TEST_CASE("validate: witness width hypothesis") {
    RunConfig cfg;
    cfg.command = "witness";
    cfg.widths = {2, 1, 2};
    const auto v = validate(cfg);
    REQUIRE(!v.empty());
    bool found = false;
    for (const auto& msg : v) found |= msg.find("N_l >= N_0") != std::string::npos;
    CHECK(found);
}

TEST_CASE("validate: exact-counter cap advises the sampler") {
    RunConfig cfg;
    cfg.command = "count";
    cfg.widths = {1, 10, 10};  // 60 neurons on path3
    const auto v = validate(cfg);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("estimate") != std::string::npos);
}

TEST_CASE("validate: clean config has no violations") {
    RunConfig cfg;
    cfg.command = "bounds";
    cfg.widths = {2, 2, 3};
    CHECK(validate(cfg).empty());
}

TEST_CASE("validate: unknown command and bad inputs") {
    RunConfig cfg;
    cfg.command = "train";
    CHECK(!validate(cfg).empty());

    cfg.command = "estimate";
    cfg.graph = "no_such_fixture";
    cfg.dist = "laplace:1";
    cfg.samples = 0;
    const auto v = validate(cfg);
    CHECK(v.size() >= 3);
}

TEST_CASE("run: bounds writes the report and the config sidecar") {
    TempDir tmp;
    RunConfig cfg;
    cfg.command = "bounds";
    cfg.widths = {2, 2, 3};
    cfg.output = tmp.path.string();
    CHECK(run(cfg) == 0);
    const auto json = slurp(tmp.path / "bounds.json");
    CHECK(json.find("\"343\"") != std::string::npos);
    CHECK(json.find("\"29824\"") != std::string::npos);
    CHECK(json.find("\"config\"") != std::string::npos);
    CHECK(fs::exists(tmp.path / "run_config.json"));
}

TEST_CASE("run: count on the single-node graph finds two regions") {
    TempDir tmp;
    RunConfig cfg;
    cfg.command = "count";
    cfg.graph = "single1";
    cfg.widths = {1, 1};
    cfg.seed = 7;
    cfg.output = tmp.path.string();
    CHECK(run(cfg) == 0);
    const auto json = slurp(tmp.path / "count.json");
    CHECK(json.find("\"count\": \"2\"") != std::string::npos);
    const auto lines = slurp(tmp.path / "regions.jsonl");
    CHECK(std::count(lines.begin(), lines.end(), '\n') == 2);
}

TEST_CASE("run: estimate with one explicit distribution") {
    TempDir tmp;
    RunConfig cfg;
    cfg.command = "estimate";
    cfg.graph = "single1";
    cfg.widths = {1, 2};
    cfg.samples = 2'000;
    cfg.dist = "uniform:10";
    cfg.output = tmp.path.string();
    CHECK(run(cfg) == 0);
    const auto json = slurp(tmp.path / "estimate.json");
    CHECK(json.find("uniform:10") != std::string::npos);
}

TEST_CASE("run: exit codes distinguish validation from cap errors") {
    TempDir tmp;
    RunConfig cfg;
    cfg.output = tmp.path.string();
    cfg.command = "bounds";
    cfg.widths = {2};  // malformed
    CHECK(run(cfg) == 2);

    cfg.command = "count";
    cfg.widths = {1, 10, 10};
    CHECK(run(cfg) == 3);
}

TEST_CASE("run config JSON round trip") {
    RunConfig cfg;
    cfg.command = "slice";
    cfg.graph = "star3";
    cfg.widths = {1, 4, 2};
    cfg.seed = 123;
    cfg.fast = true;
    const auto back = RunConfig::from_json(cfg.to_json());
    CHECK(back.command == cfg.command);
    CHECK(back.graph == cfg.graph);
    CHECK(back.widths == cfg.widths);
    CHECK(back.seed == cfg.seed);
    CHECK(back.fast == cfg.fast);
}

TEST_CASE("run: witness command emits params, verification and region check") {
    TempDir tmp;
    RunConfig cfg;
    cfg.command = "witness";
    cfg.graph = "single1";
    cfg.widths = {1, 2, 1};
    cfg.seed = 5;
    cfg.output = tmp.path.string();
    CHECK(run(cfg) == 0);
    const auto json = slurp(tmp.path / "witness.json");
    CHECK(json.find("\"region_check\"") != std::string::npos);
    CHECK(json.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("worker count: explicit cap, then environment, then hardware") {
    ratlas::set_worker_count(3);
    CHECK(ratlas::worker_count() == 3);
    ratlas::set_worker_count(0);
    setenv("REGION_ATLAS_THREADS", "5", 1);
    CHECK(ratlas::worker_count() == 5);
    unsetenv("REGION_ATLAS_THREADS");
    CHECK(ratlas::worker_count() >= 1);
}

TEST_CASE("run: slice command writes image plus pattern count") {
    TempDir tmp;
    RunConfig cfg;
    cfg.command = "slice";
    cfg.graph = "path3";
    cfg.widths = {1, 2};
    cfg.output = tmp.path.string();
    CHECK(run(cfg) == 0);
    CHECK(fs::exists(tmp.path / "slice.ppm"));
    CHECK(slurp(tmp.path / "slice.json").find("distinct_patterns") != std::string::npos);
}

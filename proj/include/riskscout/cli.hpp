#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riskscout/harness.hpp"

namespace riskscout {

// Exit codes shared by every verb.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

// Resolves a builtin name or a JSON file path.
FeatureSchema resolve_schema(const std::string& name_or_path);
LandscapeProfile resolve_profile(const std::string& name_or_path);
// Empty stats path falls back to the uniform reference for the schema.
OracleContext make_context(const std::string& schema, const std::string& profile,
                           const std::string& stats_path = "");

// Global thread cap: RISKSCOUT_THREADS when set, otherwise unlimited.
int thread_cap();

struct RunArgs {
    std::string schema = "single_page_24";
    std::string profile = "idp-sim-v1";
    std::string stats;
    std::string solver = "random";
    int64_t budget = 1000;
    std::vector<uint64_t> seeds = {0};
    int batch = 50;
    int n_init = 100;
    std::vector<std::string> params; // key=value, applied to the solver
    int parallelism = 1;
    bool no_cache = false;
    std::string out = "out";
};
int cmd_run(const RunArgs& args);

struct SuiteArgs {
    std::string schema = "single_page_24";
    std::string profile = "idp-sim-v1";
    std::string stats;
    std::string solvers = "all"; // or comma-separated names
    int64_t budget = 1000;
    std::vector<uint64_t> seeds = {0, 1, 2};
    int batch = 50;
    int n_init = 100;
    std::vector<std::string> params; // key=value, applied where the key exists
    int parallelism = 1;
    bool no_cache = false;
    std::string out = "out";
};
int cmd_suite(const SuiteArgs& args);

struct AnalyzeArgs {
    std::string kind = "modes"; // exclusivity | overlap | modes | signatures
    std::string archives;       // directory of *.jsonl files
    std::string profile = "idp-sim-v1";
    std::string fix;     // overlap: fixed solver (empty = all)
    std::string against; // overlap: sweeping solver (empty = all)
    int64_t step = 50;
    std::string out = "out";
};
int cmd_analyze(const AnalyzeArgs& args);

struct PredictArgs {
    std::string archives;
    std::string mode = "all"; // all | per_method | portfolio_early | portfolio_random | full
    int n_trees = 200;
    uint64_t seed = 0;
    std::string out = "out";
};
int cmd_predict(const PredictArgs& args);

struct EnumerateArgs {
    std::string schema = "mini_8";
    std::string profile = "idp-sim-v1";
    std::string stats;
    std::string out = "out";
};
int cmd_enumerate(const EnumerateArgs& args);

struct ValidateArgs {
    std::string schema = "single_page_24";
    std::string profile = "idp-sim-v1";
    std::string stats;
};
int cmd_validate(const ValidateArgs& args);

} // namespace riskscout

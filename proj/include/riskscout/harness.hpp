#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "riskscout/landscape.hpp"
#include "riskscout/oracle.hpp"
#include "riskscout/schema.hpp"
#include "riskscout/solvers.hpp"

namespace riskscout {

// Everything the oracle needs, owned by value so runs can share it across
// threads without lifetime questions.
struct OracleContext {
    FeatureSchema schema;
    LandscapeProfile profile;
    ReferenceStats stats;
};

// Per-run memo of first evaluations, keyed by the raw bit word. A hit
// returns the stored record verbatim (same render outcome).
class EvalCache {
public:
    const Evaluation* find(uint64_t word) const {
        auto it = map_.find(word);
        return it == map_.end() ? nullptr : &it->second;
    }
    bool insert(uint64_t word, const Evaluation& e) { return map_.emplace(word, e).second; }
    size_t size() const { return map_.size(); }

private:
    std::unordered_map<uint64_t, Evaluation> map_;
};

// Uncached entries are computed (in parallel when parallelism > 1) and the
// results reassembled in proposal order; output is independent of the thread
// count. Pass cache = nullptr to disable memoization entirely.
std::vector<Evaluation> evaluate_batch(const std::vector<BitVector>& batch,
                                       const std::vector<uint64_t>& render_seeds, EvalCache* cache,
                                       const OracleContext& ctx, int parallelism);

struct RunOptions {
    int64_t budget = 1000;
    int parallelism = 1;
    bool cache_enabled = true;
};

struct RunArchive {
    nlohmann::ordered_json manifest;
    std::vector<Evaluation> records;
};

// Deterministic per-(schema, profile, solver, seed) master stream.
uint64_t run_master_seed(const OracleContext& ctx, const std::string& solver, uint64_t seed);

// One full budgeted propose/evaluate/observe loop for one seed.
RunArchive run_one(const SolverSpec& spec, const OracleContext& ctx, uint64_t seed,
                   const RunOptions& opts);

struct SuiteResult {
    std::vector<RunArchive> archives; // successful cells, solver-major order
    std::vector<std::string> errors;  // "<solver> seed <s>: message"
};

// Cross product of solvers x seeds; failed cells are reported and skipped.
SuiteResult run_suite(const std::vector<SolverSpec>& solvers, const OracleContext& ctx,
                      const std::vector<uint64_t>& seeds, const RunOptions& opts);

// Exhaustive scan of the whole bit space with render noise disabled.
// Guarded to schemas of at most 16 bits.
RunArchive enumerate_archive(const OracleContext& ctx);

nlohmann::ordered_json evaluation_to_json(const Evaluation& e);
Evaluation evaluation_from_json(const nlohmann::json& j);

// Manifest first, then the JSONL records; returns the two paths written.
std::pair<std::filesystem::path, std::filesystem::path> write_run(
    const RunArchive& archive, const std::filesystem::path& dir);

std::vector<Evaluation> load_archive(const std::filesystem::path& jsonl_path);

} // namespace riskscout

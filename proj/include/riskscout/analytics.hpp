#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "riskscout/landscape.hpp"
#include "riskscout/oracle.hpp"
#include "riskscout/schema.hpp"

namespace riskscout {

// Archives for one solver, one entry per seed.
struct SolverArchives {
    std::string solver;
    std::vector<uint64_t> seeds;
    std::vector<std::vector<Evaluation>> by_seed;
};

// Groups loaded archives by (solver, seed). Solver order follows first
// appearance in the input; seeds sort ascending within a solver.
std::vector<SolverArchives> group_archives(std::vector<std::vector<Evaluation>> archives);

struct SummaryRow {
    double max_risk = 0.0;
    double mean_risk = 0.0;
    double std_risk = 0.0;
    double rare = 0.0;
    double t10_mu = 0.0;
    double t10_sd = 0.0;
    double unique_layouts = 0.0;
    double auc = 0.0;
    double hamming = 0.0;
    double entropy = 0.0;
};

// All ten summary columns for one archive. AUC is the budget-normalized
// cumulative-max curve divided by its own final max; hamming is the mean
// pairwise normalized distance over all records (repeats included), computed
// from per-bit counts; entropy is the mean per-feature Shannon entropy in
// nats of the decoded values (feature names come from the records).
SummaryRow summary_stats(const std::vector<Evaluation>& archive);

// Per-seed rows averaged into one row per solver.
SummaryRow summarize_solver(const SolverArchives& solver);

// |A \ O| / |A u O| over distinct configuration words.
double exclusivity(const std::set<uint64_t>& a, const std::set<uint64_t>& others);

struct ExclusivityPoint {
    int64_t t = 0;
    double excl = 0.0;       // averaged across matching seeds
    double t10_self = 0.0;   // target's top-decile mean over its first t records
    double t10_others = 0.0; // pooled others' top-decile mean at budget t
};

// Matched-budget exclusivity of `target` against the union of all `others`,
// evaluated every `step` records per seed and averaged across seeds.
std::vector<ExclusivityPoint> exclusivity_curve(const SolverArchives& target,
                                                const std::vector<SolverArchives>& others,
                                                int64_t step = 50);

struct OverlapCell {
    int64_t snapshot = 0;
    int64_t t = 0;
    int64_t exclusive_a = 0;
    int64_t common = 0;
    int64_t exclusive_b = 0;
};

// A frozen at each snapshot s versus B sweeping the budget grid:
// |Z_A(s)\Z_B(t)|, |Z_A(s) n Z_B(t)|, |Z_B(t)\Z_A(s)|.
std::vector<OverlapCell> cross_temporal_overlap(const std::vector<Evaluation>& a,
                                                const std::vector<Evaluation>& b,
                                                const std::vector<int64_t>& snapshots = {100, 500,
                                                                                         1000},
                                                int64_t grid_step = 100);

// Distinct core risk modes of one solver, union over its seeds.
std::set<CoreRiskMode> solver_mode_set(const SolverArchives& solver);

struct ModePairCell {
    std::string row_solver;
    std::string col_solver;
    int64_t shared = 0;
    int64_t row_exclusive = 0;
    int64_t col_exclusive = 0;
};

ModePairCell mode_pair_cell(const std::string& row_name, const std::set<CoreRiskMode>& row_set,
                            const std::string& col_name, const std::set<CoreRiskMode>& col_set);

struct ModeMatrix {
    std::vector<std::string> solvers;
    std::vector<std::set<CoreRiskMode>> mode_sets;
    std::vector<ModePairCell> pairs;  // ordered pairs, row-major, i != j
    std::vector<double> win_rate;     // per solver: share of opponents beaten
};

ModeMatrix core_mode_matrix(const std::vector<SolverArchives>& grouped);

struct ModeCensusRow {
    CoreRiskMode mode;
    int64_t count = 0;        // evaluations landing in the mode, all archives
    int n_solvers = 0;        // solvers that discovered it at least once
    double solver_fraction = 0.0;
};

std::vector<ModeCensusRow> mode_census(const std::vector<SolverArchives>& grouped);

struct SignatureCensusRow {
    std::string solver;
    std::vector<int64_t> counts; // per component, summed over seeds
};

std::vector<SignatureCensusRow> signature_census(const std::vector<SolverArchives>& grouped);

// ---- CSV / markdown emitters (deterministic bytes) ----

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<SolverArchives>& grouped);
void write_exclusivity_csv(const std::filesystem::path& path,
                           const std::vector<SolverArchives>& grouped, int64_t step = 50);
void write_overlap_csv(const std::filesystem::path& path, const std::vector<SolverArchives>& grouped,
                       const std::string& fix = "", const std::string& against = "");
void write_modes_matrix_csv(const std::filesystem::path& path,
                            const std::vector<SolverArchives>& grouped);
void write_modes_census_csv(const std::filesystem::path& path,
                            const std::vector<SolverArchives>& grouped);
void write_signature_census_csv(const std::filesystem::path& path,
                                const std::vector<SolverArchives>& grouped,
                                const LandscapeProfile& profile);
void write_report_md(const std::filesystem::path& path, const std::vector<SolverArchives>& grouped,
                     const LandscapeProfile& profile);

} // namespace riskscout

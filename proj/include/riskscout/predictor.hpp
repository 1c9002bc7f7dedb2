#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riskscout/analytics.hpp"
#include "riskscout/bitvector.hpp"
#include "riskscout/errors.hpp"

namespace riskscout {

struct Dataset {
    struct Provenance {
        std::string solver;
        uint64_t seed = 0;
        int64_t iter = 0;
    };
    std::vector<BitVector> x;
    std::vector<double> y;
    std::vector<Provenance> provenance;

    size_t size() const { return x.size(); }
    void append(const Evaluation& e);
};

enum class SplitMode { PerMethod, PortfolioEarly, PortfolioRandom, Full };

SplitMode split_mode_from_name(const std::string& name); // UnknownKind
const char* split_mode_name(SplitMode mode);

struct SplitResult {
    Dataset train;
    Dataset holdout;
    int64_t holdout_dropped = 0; // holdout rows whose bits appeared in train
};

// One archive per solver (the lowest seed); the first 70% of records form
// the training pool and the last 30% the holdout pool. per_method trains on
// one solver's pool, portfolio_early on matched-iteration slices [100, 300)
// of every solver subsampled to the per-method size, portfolio_random on a
// uniform subsample of the union, full on the whole union. The pooled
// holdout drops rows whose configuration also appears in training.
SplitResult build_training_splits(const std::vector<SolverArchives>& grouped, SplitMode mode,
                                  const std::string& per_method_solver = "",
                                  uint64_t subsample_seed = 0);

struct ForestParams {
    int n_trees = 200;
    int max_depth = -1; // < 0: unlimited
    int min_leaf = 2;
    int features_per_split = 0; // <= 0 resolves to ceil(sqrt(N))
    bool bootstrap = true;
    uint64_t seed = 0;
};

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    int left = -1;    // child for bit = 0
    int right = -1;   // child for bit = 1
    double value = 0.0;
};

struct Tree {
    std::vector<TreeNode> nodes;
    double predict(const BitVector& z) const;
};

struct Forest {
    ForestParams params;
    std::vector<Tree> trees;

    double predict(const BitVector& z) const;
    std::vector<double> predict(const std::vector<BitVector>& xs) const;
};

// CART regression trees on bootstrap resamples; variance-reduction splits
// over random feature subsets; splits require strictly positive gain and
// min_leaf rows on both sides. Deterministic given params.seed.
Forest fit_forest(const Dataset& train, ForestParams params);

struct Metrics {
    double r2 = 0.0;
    double mae = 0.0;
    double rmse = 0.0;
};

Metrics regression_metrics(const std::vector<double>& predicted,
                           const std::vector<double>& truth);

} // namespace riskscout

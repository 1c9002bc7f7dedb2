#include "riskscout/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "riskscout/rng.hpp"

namespace riskscout {

void Dataset::append(const Evaluation& e) {
    x.push_back(e.z);
    y.push_back(e.risk);
    provenance.push_back({e.solver, e.seed, e.iteration});
}

SplitMode split_mode_from_name(const std::string& name) {
    if (name == "per_method") return SplitMode::PerMethod;
    if (name == "portfolio_early") return SplitMode::PortfolioEarly;
    if (name == "portfolio_random") return SplitMode::PortfolioRandom;
    if (name == "full") return SplitMode::Full;
    fail(Errc::UnknownKind, "unknown split mode '" + name + "'");
}

const char* split_mode_name(SplitMode mode) {
    switch (mode) {
        case SplitMode::PerMethod: return "per_method";
        case SplitMode::PortfolioEarly: return "portfolio_early";
        case SplitMode::PortfolioRandom: return "portfolio_random";
        case SplitMode::Full: return "full";
    }
    fail(Errc::UnknownKind, "unmapped split mode");
}

namespace {

// Uniform subsample of `target` rows without replacement, stable order.
Dataset subsample(const Dataset& pool, size_t target, uint64_t seed) {
    if (pool.size() <= target) return pool;
    std::vector<size_t> idx(pool.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    Rng rng(derive_stream(seed, hash_str("subsample"), Stream::Split));
    for (size_t i = 0; i < target; ++i) {
        size_t j = i + static_cast<size_t>(rng.uniform_int(idx.size() - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(target);
    std::sort(idx.begin(), idx.end());
    Dataset out;
    for (size_t i : idx) {
        out.x.push_back(pool.x[i]);
        out.y.push_back(pool.y[i]);
        out.provenance.push_back(pool.provenance[i]);
    }
    return out;
}

} // namespace

SplitResult build_training_splits(const std::vector<SolverArchives>& grouped, SplitMode mode,
                                  const std::string& per_method_solver, uint64_t subsample_seed) {
    if (grouped.empty()) fail(Errc::InsufficientData, "no archives to split");

    // lowest-seed archive per solver
    std::vector<const std::vector<Evaluation>*> primary;
    std::vector<std::string> names;
    for (const SolverArchives& s : grouped) {
        if (s.by_seed.empty()) fail(Errc::InsufficientData, s.solver + " has no archives");
        primary.push_back(&s.by_seed.front()); // seeds sort ascending in grouping
        names.push_back(s.solver);
    }

    const size_t budget = primary.front()->size();
    for (const auto* a : primary)
        if (a->size() != budget) fail(Errc::InsufficientData, "archives have unequal budgets");
    const size_t train_n = budget * 7 / 10;
    if (train_n < 2 || train_n >= budget)
        fail(Errc::InsufficientData, "archives too small for a 70/30 split");

    SplitResult out;
    switch (mode) {
        case SplitMode::PerMethod: {
            auto it = std::find(names.begin(), names.end(), per_method_solver);
            if (it == names.end())
                fail(Errc::InsufficientData, "no archive for solver '" + per_method_solver + "'");
            const auto& records = *primary[static_cast<size_t>(it - names.begin())];
            for (size_t i = 0; i < train_n; ++i) out.train.append(records[i]);
            break;
        }
        case SplitMode::PortfolioEarly: {
            if (budget < 300)
                fail(Errc::InsufficientData, "the early window needs at least 300 records");
            Dataset pool;
            for (const auto* a : primary)
                for (size_t i = 100; i < 300; ++i) pool.append((*a)[i]);
            out.train = subsample(pool, train_n, subsample_seed);
            break;
        }
        case SplitMode::PortfolioRandom: {
            Dataset pool;
            for (const auto* a : primary)
                for (size_t i = 0; i < train_n; ++i) pool.append((*a)[i]);
            out.train = subsample(pool, train_n, subsample_seed);
            break;
        }
        case SplitMode::Full: {
            for (const auto* a : primary)
                for (size_t i = 0; i < train_n; ++i) out.train.append((*a)[i]);
            break;
        }
    }
    if (out.train.size() < 2) fail(Errc::InsufficientData, "training set too small");

    std::set<uint64_t> train_words;
    for (const BitVector& z : out.train.x) train_words.insert(z.word());
    for (const auto* a : primary)
        for (size_t i = train_n; i < budget; ++i) {
            if (train_words.count((*a)[i].z.word())) {
                ++out.holdout_dropped;
                continue;
            }
            out.holdout.append((*a)[i]);
        }
    if (out.holdout.size() < 2)
        fail(Errc::InsufficientData, "holdout collapsed after dropping training duplicates");
    return out;
}

double Tree::predict(const BitVector& z) const {
    int node = 0;
    while (nodes[static_cast<size_t>(node)].feature >= 0) {
        const TreeNode& n = nodes[static_cast<size_t>(node)];
        node = z.get(n.feature) ? n.right : n.left;
    }
    return nodes[static_cast<size_t>(node)].value;
}

double Forest::predict(const BitVector& z) const {
    double sum = 0.0;
    for (const Tree& t : trees) sum += t.predict(z);
    return sum / static_cast<double>(trees.size());
}

std::vector<double> Forest::predict(const std::vector<BitVector>& xs) const {
    std::vector<double> out;
    out.reserve(xs.size());
    for (const BitVector& z : xs) out.push_back(predict(z));
    return out;
}

namespace {

struct TreeBuilder {
    const Dataset& data;
    const ForestParams& params;
    int width;
    Rng& rng;
    Tree tree;

    int build(std::vector<size_t>& idx, size_t lo, size_t hi, int depth) {
        const size_t n = hi - lo;
        double sum = 0.0, sumsq = 0.0;
        for (size_t k = lo; k < hi; ++k) {
            sum += data.y[idx[k]];
            sumsq += data.y[idx[k]] * data.y[idx[k]];
        }
        const double mean = sum / static_cast<double>(n);
        const double sse = sumsq - sum * sum / static_cast<double>(n);

        int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({-1, -1, -1, mean});

        bool depth_ok = params.max_depth < 0 || depth < params.max_depth;
        if (!depth_ok || n < 2 * static_cast<size_t>(params.min_leaf) || sse <= 1e-12)
            return node_id;

        // random feature order, without replacement
        int k_feat = params.features_per_split;
        if (k_feat <= 0) k_feat = static_cast<int>(std::ceil(std::sqrt(double(width))));
        k_feat = std::min(k_feat, width);
        std::vector<int> feats(static_cast<size_t>(width));
        std::iota(feats.begin(), feats.end(), 0);
        for (int i = 0; i < width; ++i) {
            size_t j = static_cast<size_t>(i) +
                       static_cast<size_t>(rng.uniform_int(static_cast<uint64_t>(width - i)));
            std::swap(feats[static_cast<size_t>(i)], feats[j]);
        }

        int best_feature = -1;
        double best_gain = 0.0;
        for (int fi = 0; fi < width; ++fi) {
            // Examine features_per_split candidates, but keep scanning past the
            // quota until some valid partition exists; a node only becomes a
            // leaf when no feature separates it at all.
            if (fi >= k_feat && best_feature >= 0) break;
            int f = feats[static_cast<size_t>(fi)];
            double sum1 = 0.0, sumsq1 = 0.0;
            size_t n1 = 0;
            for (size_t k = lo; k < hi; ++k) {
                if (!data.x[idx[k]].get(f)) continue;
                sum1 += data.y[idx[k]];
                sumsq1 += data.y[idx[k]] * data.y[idx[k]];
                ++n1;
            }
            size_t n0 = n - n1;
            if (n0 < static_cast<size_t>(params.min_leaf) ||
                n1 < static_cast<size_t>(params.min_leaf))
                continue;
            double sum0 = sum - sum1, sumsq0 = sumsq - sumsq1;
            double sse0 = sumsq0 - sum0 * sum0 / static_cast<double>(n0);
            double sse1 = sumsq1 - sum1 * sum1 / static_cast<double>(n1);
            double gain = sse - sse0 - sse1;
            if (gain > best_gain + 1e-12) {
                best_gain = gain;
                best_feature = f;
            }
        }
        if (best_feature < 0) return node_id;

        // partition: bit = 0 rows first
        size_t mid = lo;
        for (size_t k = lo; k < hi; ++k)
            if (!data.x[idx[k]].get(best_feature)) std::swap(idx[k], idx[mid++]);

        tree.nodes[static_cast<size_t>(node_id)].feature = best_feature;
        int left = build(idx, lo, mid, depth + 1);
        tree.nodes[static_cast<size_t>(node_id)].left = left;
        int right = build(idx, mid, hi, depth + 1);
        tree.nodes[static_cast<size_t>(node_id)].right = right;
        return node_id;
    }
};

} // namespace

Forest fit_forest(const Dataset& train, ForestParams params) {
    if (train.size() < 2) fail(Errc::InsufficientData, "need at least two training rows");
    if (params.n_trees < 1) fail(Errc::BadParam, "n_trees must be >= 1");
    if (params.min_leaf < 1) fail(Errc::BadParam, "min_leaf must be >= 1");

    Forest forest;
    forest.params = params;
    const int width = train.x.front().size();
    const size_t n = train.size();

    for (int t = 0; t < params.n_trees; ++t) {
        Rng rng(derive_stream(params.seed, static_cast<uint64_t>(t), Stream::Tree));
        std::vector<size_t> idx(n);
        if (params.bootstrap) {
            for (size_t i = 0; i < n; ++i) idx[i] = static_cast<size_t>(rng.uniform_int(n));
        } else {
            std::iota(idx.begin(), idx.end(), size_t{0});
        }
        TreeBuilder builder{train, params, width, rng, {}};
        builder.build(idx, 0, n, 0);
        forest.trees.push_back(std::move(builder.tree));
    }
    return forest;
}

Metrics regression_metrics(const std::vector<double>& predicted,
                           const std::vector<double>& truth) {
    if (predicted.size() != truth.size())
        fail(Errc::LengthMismatch, "prediction/target length mismatch");
    if (truth.size() < 2) fail(Errc::InsufficientData, "need at least two points");

    const double n = static_cast<double>(truth.size());
    double mean = std::accumulate(truth.begin(), truth.end(), 0.0) / n;
    double sst = 0.0, sse = 0.0, abs_sum = 0.0;
    for (size_t i = 0; i < truth.size(); ++i) {
        double err = predicted[i] - truth[i];
        sse += err * err;
        abs_sum += std::abs(err);
        sst += (truth[i] - mean) * (truth[i] - mean);
    }
    if (sst == 0.0) fail(Errc::ZeroVariance, "targets have zero variance");
    Metrics m;
    m.r2 = 1.0 - sse / sst;
    m.mae = abs_sum / n;
    m.rmse = std::sqrt(sse / n);
    return m;
}

} // namespace riskscout

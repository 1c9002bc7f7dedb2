#include "riskscout/fm.hpp"

#include <numeric>

namespace riskscout {

double FmModel::predict(const BitVector& x) const {
    double out = w0;
    const int rank_k = rank();
    std::vector<double> s(static_cast<size_t>(rank_k), 0.0);
    double sq = 0.0;
    for (int i = 0; i < n(); ++i) {
        if (!x.get(i)) continue;
        out += w[static_cast<size_t>(i)];
        for (int f = 0; f < rank_k; ++f) {
            double vif = v[static_cast<size_t>(i)][static_cast<size_t>(f)];
            s[static_cast<size_t>(f)] += vif;
            sq += vif * vif;
        }
    }
    double pair = 0.0;
    for (int f = 0; f < rank_k; ++f) pair += s[static_cast<size_t>(f)] * s[static_cast<size_t>(f)];
    out += 0.5 * (pair - sq);
    return out;
}

double FmModel::pair_weight(int i, int j) const {
    double dot = 0.0;
    for (int f = 0; f < rank(); ++f)
        dot += v[static_cast<size_t>(i)][static_cast<size_t>(f)] *
               v[static_cast<size_t>(j)][static_cast<size_t>(f)];
    return dot;
}

FmModel fit_fm(const std::vector<BitVector>& x, const std::vector<double>& y,
               const FmParams& params, Rng& rng) {
    if (x.empty()) fail(Errc::EmptyHistory, "fm fit needs observations");
    if (x.size() != y.size()) fail(Errc::LengthMismatch, "fm inputs and targets differ in size");
    const int n = x[0].size();
    const int rank_k = params.rank;

    FmModel fm;
    fm.w.assign(static_cast<size_t>(n), 0.0);
    fm.v.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(rank_k)));
    for (auto& row : fm.v)
        for (auto& vv : row) vv = rng.normal(0.0, params.init_sd);
    fm.w0 = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());

    std::vector<size_t> order(x.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::vector<double> s(static_cast<size_t>(rank_k));

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        for (size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.uniform_int(i)]);
        for (size_t idx : order) {
            const BitVector& xi = x[idx];
            // forward pass caching the factor sums
            std::fill(s.begin(), s.end(), 0.0);
            double pred = fm.w0, sq = 0.0;
            for (int i = 0; i < n; ++i) {
                if (!xi.get(i)) continue;
                pred += fm.w[static_cast<size_t>(i)];
                for (int f = 0; f < rank_k; ++f) {
                    double vif = fm.v[static_cast<size_t>(i)][static_cast<size_t>(f)];
                    s[static_cast<size_t>(f)] += vif;
                    sq += vif * vif;
                }
            }
            for (int f = 0; f < rank_k; ++f)
                pred += 0.5 * (s[static_cast<size_t>(f)] * s[static_cast<size_t>(f)]);
            pred -= 0.5 * sq;

            double err = pred - y[idx];
            fm.w0 -= params.lr * err;
            for (int i = 0; i < n; ++i) {
                if (!xi.get(i)) continue;
                fm.w[static_cast<size_t>(i)] -= params.lr * err;
                for (int f = 0; f < rank_k; ++f) {
                    double& vif = fm.v[static_cast<size_t>(i)][static_cast<size_t>(f)];
                    vif -= params.lr * err * (s[static_cast<size_t>(f)] - vif);
                }
            }
        }
    }
    return fm;
}

} // namespace riskscout

#pragma once

#include <vector>

#include "riskscout/bitvector.hpp"
#include "riskscout/errors.hpp"
#include "riskscout/rng.hpp"

namespace riskscout {

// Second-order factorization machine over bit inputs:
// y(x) = w0 + sum_i w_i x_i + sum_{i<j} <V_i, V_j> x_i x_j.
struct FmModel {
    double w0 = 0.0;
    std::vector<double> w;
    std::vector<std::vector<double>> v; // n x rank

    int n() const { return static_cast<int>(w.size()); }
    int rank() const { return v.empty() ? 0 : static_cast<int>(v[0].size()); }
    double predict(const BitVector& x) const;
    double pair_weight(int i, int j) const; // <V_i, V_j>
};

struct FmParams {
    int rank = 8;
    int epochs = 30;
    double lr = 0.01;
    double init_sd = 0.01;
};

// Squared-error SGD with per-epoch reshuffling; deterministic given rng.
FmModel fit_fm(const std::vector<BitVector>& x, const std::vector<double>& y,
               const FmParams& params, Rng& rng);

} // namespace riskscout

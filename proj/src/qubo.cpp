#include "riskscout/qubo.hpp"

#include <algorithm>

namespace riskscout {

QuboMatrix::QuboMatrix(int n) : n_(n) {
    if (n < 1) fail(Errc::BadParam, "qubo size must be >= 1");
    q_.assign(static_cast<size_t>(n) * n, 0.0);
}

double& QuboMatrix::at(int i, int j) {
    if (i > j) std::swap(i, j);
    return q_[static_cast<size_t>(i) * n_ + j];
}

double QuboMatrix::at(int i, int j) const {
    if (i > j) std::swap(i, j);
    return q_[static_cast<size_t>(i) * n_ + j];
}

double QuboMatrix::energy(uint64_t x) const {
    double e = 0.0;
    for (int i = 0; i < n_; ++i) {
        if (!((x >> i) & 1)) continue;
        for (int j = i; j < n_; ++j)
            if ((x >> j) & 1) e += q_[static_cast<size_t>(i) * n_ + j];
    }
    return e;
}

QuboMatrix fm_to_qubo(const FmModel& fm) {
    QuboMatrix q(fm.n());
    for (int i = 0; i < fm.n(); ++i) {
        q.at(i, i) = -fm.w[static_cast<size_t>(i)];
        for (int j = i + 1; j < fm.n(); ++j) q.at(i, j) = -fm.pair_weight(i, j);
    }
    q.offset = -fm.w0;
    return q;
}

double IsingModel::energy(uint64_t basis_state) const {
    auto spin = [&](int i) { return ((basis_state >> i) & 1) ? -1.0 : 1.0; };
    double e = 0.0;
    for (int i = 0; i < n(); ++i) e += h[static_cast<size_t>(i)] * spin(i);
    for (const auto& [pair, val] : j) e += val * spin(pair.first) * spin(pair.second);
    return e;
}

IsingModel qubo_to_ising(const QuboMatrix& q) {
    const int n = q.n();
    IsingModel ising;
    ising.h.assign(static_cast<size_t>(n), 0.0);
    ising.offset = q.offset;
    for (int i = 0; i < n; ++i) {
        double qii = q.at(i, i);
        ising.h[static_cast<size_t>(i)] -= qii / 2.0;
        ising.offset += qii / 2.0;
        for (int jj = i + 1; jj < n; ++jj) {
            double qij = q.at(i, jj);
            if (qij == 0.0) continue;
            ising.j[{i, jj}] = qij / 4.0;
            ising.h[static_cast<size_t>(i)] -= qij / 4.0;
            ising.h[static_cast<size_t>(jj)] -= qij / 4.0;
            ising.offset += qij / 4.0;
        }
    }
    return ising;
}

QuboMatrix restrict_qubo(const QuboMatrix& q, const std::vector<int>& active,
                         const BitVector& frozen) {
    if (active.empty()) fail(Errc::BadParam, "restriction needs at least one active variable");
    std::vector<bool> is_active(static_cast<size_t>(q.n()), false);
    for (int a : active) {
        if (a < 0 || a >= q.n()) fail(Errc::ValueOutOfRange, "active index outside qubo");
        is_active[static_cast<size_t>(a)] = true;
    }

    QuboMatrix out(static_cast<int>(active.size()));
    out.offset = q.offset;

    auto frozen_bit = [&](int i) { return frozen.get(i) ? 1.0 : 0.0; };

    for (size_t ai = 0; ai < active.size(); ++ai) {
        int i = active[ai];
        out.at(static_cast<int>(ai), static_cast<int>(ai)) = q.at(i, i);
        for (size_t aj = ai + 1; aj < active.size(); ++aj)
            out.at(static_cast<int>(ai), static_cast<int>(aj)) = q.at(i, active[aj]);
        // couplings between this active variable and every frozen one
        for (int f = 0; f < q.n(); ++f) {
            if (is_active[static_cast<size_t>(f)] || f == i) continue;
            out.at(static_cast<int>(ai), static_cast<int>(ai)) += q.at(i, f) * frozen_bit(f);
        }
    }
    for (int f = 0; f < q.n(); ++f) {
        if (is_active[static_cast<size_t>(f)]) continue;
        out.offset += q.at(f, f) * frozen_bit(f);
        for (int g = f + 1; g < q.n(); ++g)
            if (!is_active[static_cast<size_t>(g)])
                out.offset += q.at(f, g) * frozen_bit(f) * frozen_bit(g);
    }
    return out;
}

} // namespace riskscout

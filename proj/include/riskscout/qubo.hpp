#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "riskscout/bitvector.hpp"
#include "riskscout/errors.hpp"
#include "riskscout/fm.hpp"

namespace riskscout {

// Upper-triangular QUBO; diagonal holds linear terms. energy() is the pure
// quadratic form, the constant part lives in `offset`.
class QuboMatrix {
public:
    explicit QuboMatrix(int n);

    int n() const { return n_; }
    double& at(int i, int j);
    double at(int i, int j) const;

    double energy(uint64_t x) const;
    double energy(const BitVector& x) const { return energy(x.word()); }

    double offset = 0.0;

private:
    int n_;
    std::vector<double> q_;
};

// Compiled minimization objective for a risk-maximizing surrogate:
// Q_ii = -w_i, Q_ij = -<V_i,V_j>, offset = -w0, so that
// energy(x) + offset = -y(x) exactly.
QuboMatrix fm_to_qubo(const FmModel& fm);

struct IsingModel {
    std::vector<double> h;
    std::map<std::pair<int, int>, double> j; // i < j
    double offset = 0.0;

    int n() const { return static_cast<int>(h.size()); }
    // Spin energy sum h_i z_i + sum J_ij z_i z_j with z_i = 1 - 2*bit_i;
    // offset excluded (it is a classical constant).
    double energy(uint64_t basis_state) const;
};

// Change of variables x = (1-z)/2; energy(z) + ising.offset = qubo.energy(x)
// + qubo.offset for every state.
IsingModel qubo_to_ising(const QuboMatrix& q);

// Reduce to the active variables, folding frozen bits (taken from `frozen`)
// into diagonal and offset. Active indices must be sorted ascending.
QuboMatrix restrict_qubo(const QuboMatrix& q, const std::vector<int>& active,
                         const BitVector& frozen);

} // namespace riskscout

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "riskscout/fm.hpp"
#include "riskscout/qubo.hpp"
#include "riskscout/rng.hpp"

namespace riskscout {

enum class MixerKind { Standard, Correlated };

struct QaoaCircuitSpec {
    int depth = 2;
    MixerKind mixer = MixerKind::Standard;
    std::vector<std::pair<int, int>> correlated_pairs;
    std::vector<double> angles; // gamma_1..gamma_p, beta_1..beta_p
    int shots = 5000;
};

using Amplitudes = std::vector<std::complex<double>>;

// |psi> = prod_l U_mixer(beta_l) U_cost(gamma_l) |+>^m. The cost layer is the
// diagonal phase exp(-i*gamma*E(z)); the standard mixer applies RX on every
// qubit, the correlated mixer adds XX rotations on correlated_pairs.
Amplitudes qaoa_statevector(const IsingModel& ising, const QaoaCircuitSpec& spec);

double qaoa_expectation(const IsingModel& ising, const QaoaCircuitSpec& spec);

// Derivative-free minimization of the expectation over the 2p angles,
// bounded to [-pi, pi], starting from spec.angles (or 0.1 everywhere when
// unset). Returns the best angles and stores them back into spec.
std::vector<double> optimize_angles(const IsingModel& ising, QaoaCircuitSpec& spec,
                                    int budget_evals = 60);

std::vector<uint64_t> sample_states(const Amplitudes& amps, int shots, Rng& rng);

// Top `count` couplings by |J|, deterministic tie-breaking.
std::vector<std::pair<int, int>> strongest_coupling_pairs(const IsingModel& ising, int count);

// The m bits with the largest influence |w_i| + sum_j |<V_i,V_j>|, returned
// sorted ascending.
std::vector<int> select_subproblem(const FmModel& fm, int m);

std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                                std::vector<double> x0, double init_step, int max_evals,
                                double lo, double hi);

} // namespace riskscout

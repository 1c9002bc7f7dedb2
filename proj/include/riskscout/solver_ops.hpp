#pragma once

#include <utility>
#include <vector>

#include "riskscout/bitvector.hpp"
#include "riskscout/errors.hpp"
#include "riskscout/rng.hpp"

namespace riskscout {

// ---- simulated annealing ----

// T_t = T0 * (T_end/T0)^(t/(total-1)); t is the global budget index.
double geometric_temperature(double t0, double t_end, int64_t t, int64_t total);
bool anneal_accept(double delta_risk, double temperature, Rng& rng);

// ---- genetic algorithm ----

struct GaParams {
    double p_c = 0.9;
    double p_m = 0.1;
    int tournament = 2;
};

// Tournament selection, two-point crossover, per-bit mutation, elitism of 1
// (best parent survives in slot 0).
std::vector<BitVector> ga_step(const std::vector<BitVector>& population,
                               const std::vector<double>& fitness, const GaParams& params,
                               Rng& rng);

// ---- binary PSO ----

struct PsoParams {
    double inertia = 0.7;
    double c1 = 1.5;
    double c2 = 1.5;
};

double sigmoid(double x);

// v' = w*v + c1*u1*(pbest-x) + c2*u2*(gbest-x); bit resampled from
// sigmoid(v') (binary transfer rule). Mutates position and velocity.
void pso_update(BitVector& position, std::vector<double>& velocity, const BitVector& pbest,
                const BitVector& gbest, const PsoParams& params, Rng& rng);

// ---- MAP-Elites ----

struct Elite {
    bool occupied = false;
    double risk = 0.0;
    std::vector<double> genome; // relaxed [0,1]^N representation
    BitVector bits;
};

class EliteGrid {
public:
    explicit EliteGrid(int resolution);

    int resolution() const { return res_; }
    static int cell_coord(double d, int resolution); // floor(d*res) clamped

    // Insert if the cell is empty or risk strictly exceeds the incumbent.
    bool insert(double d1, double d2, double risk, std::vector<double> genome,
                const BitVector& bits);

    const Elite& cell(int i, int j) const { return cells_[static_cast<size_t>(i) * res_ + j]; }
    size_t occupied_count() const { return occupied_.size(); }
    // Flat cell indices in first-occupation order (deterministic).
    const std::vector<int>& occupied_cells() const { return occupied_; }
    const Elite& elite_at(int flat_index) const { return cells_[static_cast<size_t>(flat_index)]; }

private:
    int res_;
    std::vector<Elite> cells_;
    std::vector<int> occupied_;
};

// ---- TPE ----

struct TpeDensities {
    std::vector<double> l; // P(bit=1 | good)
    std::vector<double> g; // P(bit=1 | rest)
};

// Split at the gamma-quantile of risk (good = top gamma fraction, at least
// one); per-bit Bernoulli densities with Laplace smoothing alpha.
TpeDensities tpe_fit(const std::vector<BitVector>& bits, const std::vector<double>& risk,
                     double gamma, double alpha);
double tpe_score(const BitVector& z, const TpeDensities& d);
BitVector tpe_sample(const TpeDensities& d, int width, Rng& rng);

// ---- Bernoulli policy gradients ----

enum class PolicyKind { Reinforce, PpoRisk, PpoDiv };

struct PolicyParams {
    double alpha = 0.05; // REINFORCE step size
    double baseline_decay = 0.9;
    double step = 0.02; // PPO step size
    double clip_eps = 0.2;
    double entropy_coef = 0.03;
    double logit_clamp = 10.0;
    PolicyKind kind = PolicyKind::Reinforce;
};

struct PolicyState {
    std::vector<double> logits;
    double baseline = 0.0;
    bool baseline_set = false;
};

void policy_update(PolicyState& state, const std::vector<BitVector>& batch,
                   const std::vector<double>& rewards, const PolicyParams& params);

double bernoulli_entropy(double p);

// Clipped surrogate objective (mean over batch), for verifying the clipping
// region behaviour; the per-batch update itself takes a single step from the
// old policy where the ratio is exactly 1.
double ppo_objective(const std::vector<double>& old_logits, const std::vector<double>& new_logits,
                     const std::vector<BitVector>& batch, const std::vector<double>& advantages,
                     double clip_eps);

} // namespace riskscout

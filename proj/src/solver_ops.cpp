#include "riskscout/solver_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace riskscout {

double geometric_temperature(double t0, double t_end, int64_t t, int64_t total) {
    if (total <= 1) return t_end;
    double frac = static_cast<double>(t) / static_cast<double>(total - 1);
    return t0 * std::pow(t_end / t0, frac);
}

bool anneal_accept(double delta_risk, double temperature, Rng& rng) {
    if (delta_risk >= 0.0) return true;
    return rng.uniform() < std::exp(delta_risk / temperature);
}

namespace {

size_t tournament_pick(const std::vector<double>& fitness, int k, Rng& rng) {
    size_t best = rng.uniform_int(fitness.size());
    for (int i = 1; i < k; ++i) {
        size_t c = rng.uniform_int(fitness.size());
        if (fitness[c] > fitness[best]) best = c;
    }
    return best;
}

} // namespace

std::vector<BitVector> ga_step(const std::vector<BitVector>& population,
                               const std::vector<double>& fitness, const GaParams& params,
                               Rng& rng) {
    if (population.empty() || population.size() != fitness.size())
        fail(Errc::LengthMismatch, "population and fitness sizes differ");
    const int width = population[0].size();
    const size_t n = population.size();

    std::vector<BitVector> next;
    next.reserve(n);

    size_t best = 0;
    for (size_t i = 1; i < n; ++i)
        if (fitness[i] > fitness[best]) best = i;
    next.push_back(population[best]); // elitism of 1

    while (next.size() < n) {
        BitVector child = population[tournament_pick(fitness, params.tournament, rng)];
        if (rng.bernoulli(params.p_c)) {
            const BitVector& other = population[tournament_pick(fitness, params.tournament, rng)];
            int c1 = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(width) + 1));
            int c2 = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(width) + 1));
            if (c1 > c2) std::swap(c1, c2);
            for (int b = c1; b < c2; ++b) child.set(b, other.get(b));
        }
        for (int b = 0; b < width; ++b)
            if (rng.bernoulli(params.p_m)) child.flip(b);
        next.push_back(child);
    }
    return next;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void pso_update(BitVector& position, std::vector<double>& velocity, const BitVector& pbest,
                const BitVector& gbest, const PsoParams& params, Rng& rng) {
    const int width = position.size();
    if (static_cast<int>(velocity.size()) != width)
        fail(Errc::LengthMismatch, "velocity length != position width");
    for (int i = 0; i < width; ++i) {
        double x = position.get(i) ? 1.0 : 0.0;
        double pb = pbest.get(i) ? 1.0 : 0.0;
        double gb = gbest.get(i) ? 1.0 : 0.0;
        double v = params.inertia * velocity[i] + params.c1 * rng.uniform() * (pb - x) +
                   params.c2 * rng.uniform() * (gb - x);
        velocity[i] = v;
        position.set(i, rng.uniform() < sigmoid(v));
    }
}

EliteGrid::EliteGrid(int resolution) : res_(resolution) {
    if (resolution < 1) fail(Errc::BadParam, "grid resolution must be >= 1");
    cells_.resize(static_cast<size_t>(res_) * res_);
}

int EliteGrid::cell_coord(double d, int resolution) {
    int c = static_cast<int>(std::floor(d * resolution));
    return std::clamp(c, 0, resolution - 1);
}

bool EliteGrid::insert(double d1, double d2, double risk, std::vector<double> genome,
                       const BitVector& bits) {
    int i = cell_coord(d1, res_);
    int j = cell_coord(d2, res_);
    Elite& e = cells_[static_cast<size_t>(i) * res_ + j];
    if (e.occupied && risk <= e.risk) return false;
    if (!e.occupied) occupied_.push_back(i * res_ + j);
    e.occupied = true;
    e.risk = risk;
    e.genome = std::move(genome);
    e.bits = bits;
    return true;
}

TpeDensities tpe_fit(const std::vector<BitVector>& bits, const std::vector<double>& risk,
                     double gamma, double alpha) {
    if (bits.empty()) fail(Errc::EmptyHistory, "tpe_fit needs observations");
    if (bits.size() != risk.size()) fail(Errc::LengthMismatch, "bits and risk sizes differ");
    const size_t n = bits.size();
    const int width = bits[0].size();

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return risk[a] > risk[b]; });
    size_t n_good = std::max<size_t>(1, static_cast<size_t>(std::ceil(gamma * static_cast<double>(n))));
    n_good = std::min(n_good, n);

    std::vector<int64_t> ones_good(static_cast<size_t>(width), 0);
    std::vector<int64_t> ones_rest(static_cast<size_t>(width), 0);
    for (size_t idx = 0; idx < n; ++idx) {
        const BitVector& z = bits[order[idx]];
        auto& ones = idx < n_good ? ones_good : ones_rest;
        for (int b = 0; b < width; ++b)
            if (z.get(b)) ++ones[static_cast<size_t>(b)];
    }
    const double n_rest = static_cast<double>(n - n_good);

    TpeDensities d;
    d.l.resize(static_cast<size_t>(width));
    d.g.resize(static_cast<size_t>(width));
    for (int b = 0; b < width; ++b) {
        d.l[b] = (static_cast<double>(ones_good[b]) + alpha) /
                 (static_cast<double>(n_good) + 2.0 * alpha);
        d.g[b] = (static_cast<double>(ones_rest[b]) + alpha) / (n_rest + 2.0 * alpha);
    }
    return d;
}

double tpe_score(const BitVector& z, const TpeDensities& d) {
    double s = 0.0;
    for (int b = 0; b < z.size(); ++b) {
        if (z.get(b))
            s += std::log(d.l[b] / d.g[b]);
        else
            s += std::log((1.0 - d.l[b]) / (1.0 - d.g[b]));
    }
    return s;
}

BitVector tpe_sample(const TpeDensities& d, int width, Rng& rng) {
    BitVector z = BitVector::zeros(width);
    for (int b = 0; b < width; ++b)
        if (rng.bernoulli(d.l[b])) z.set(b, true);
    return z;
}

double bernoulli_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

void policy_update(PolicyState& state, const std::vector<BitVector>& batch,
                   const std::vector<double>& rewards, const PolicyParams& params) {
    if (batch.empty() || batch.size() != rewards.size())
        fail(Errc::BatchMismatch, "batch and rewards sizes differ");
    const size_t width = state.logits.size();
    double batch_mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) /
                        static_cast<double>(rewards.size());

    double baseline;
    if (params.kind == PolicyKind::Reinforce) {
        if (!state.baseline_set) {
            state.baseline = batch_mean;
            state.baseline_set = true;
        }
        baseline = state.baseline;
    } else {
        baseline = batch_mean; // PPO kinds use the batch-mean baseline
    }

    std::vector<double> grad(width, 0.0);
    for (size_t j = 0; j < batch.size(); ++j) {
        double adv = rewards[j] - baseline;
        for (size_t i = 0; i < width; ++i) {
            double x = batch[j].get(static_cast<int>(i)) ? 1.0 : 0.0;
            grad[i] += adv * (x - sigmoid(state.logits[i]));
        }
    }

    double step = params.kind == PolicyKind::Reinforce ? params.alpha : params.step;
    for (size_t i = 0; i < width; ++i) {
        double g = grad[i];
        if (params.kind == PolicyKind::PpoDiv) {
            double p = sigmoid(state.logits[i]);
            // dH/dtheta = p(1-p) * log((1-p)/p)
            g += params.entropy_coef * p * (1.0 - p) * std::log((1.0 - p) / p) *
                 static_cast<double>(batch.size());
        }
        state.logits[i] = std::clamp(state.logits[i] + step * g, -params.logit_clamp,
                                     params.logit_clamp);
    }

    if (params.kind == PolicyKind::Reinforce)
        state.baseline = params.baseline_decay * state.baseline +
                         (1.0 - params.baseline_decay) * batch_mean;
}

double ppo_objective(const std::vector<double>& old_logits, const std::vector<double>& new_logits,
                     const std::vector<BitVector>& batch, const std::vector<double>& advantages,
                     double clip_eps) {
    if (batch.size() != advantages.size())
        fail(Errc::BatchMismatch, "batch and advantages sizes differ");
    double total = 0.0;
    for (size_t j = 0; j < batch.size(); ++j) {
        double log_ratio = 0.0;
        for (size_t i = 0; i < old_logits.size(); ++i) {
            double x = batch[j].get(static_cast<int>(i)) ? 1.0 : 0.0;
            double pn = sigmoid(new_logits[i]);
            double po = sigmoid(old_logits[i]);
            log_ratio += x * (std::log(pn) - std::log(po)) +
                         (1.0 - x) * (std::log(1.0 - pn) - std::log(1.0 - po));
        }
        double ratio = std::exp(log_ratio);
        double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
        total += std::min(ratio * advantages[j], clipped * advantages[j]);
    }
    return total / static_cast<double>(batch.size());
}

} // namespace riskscout

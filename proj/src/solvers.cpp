#include "riskscout/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "riskscout/fm.hpp"
#include "riskscout/gp.hpp"
#include "riskscout/qaoa.hpp"
#include "riskscout/qubo.hpp"
#include "riskscout/solver_ops.hpp"

namespace riskscout {

namespace {

struct KindName {
    SolverKind kind;
    const char* name;
};

constexpr KindName kKindNames[] = {
    {SolverKind::Random, "random"},
    {SolverKind::Sa, "sa"},
    {SolverKind::GaExplore, "ga-explore"},
    {SolverKind::GaExploit, "ga-exploit"},
    {SolverKind::Pso, "pso"},
    {SolverKind::MapElites, "map-elites"},
    {SolverKind::GpEi, "gp-ei"},
    {SolverKind::GpUcb, "gp-ucb"},
    {SolverKind::Tpe, "tpe"},
    {SolverKind::Reinforce, "reinforce"},
    {SolverKind::PpoRisk, "ppo-risk"},
    {SolverKind::PpoDiv, "ppo-div"},
    {SolverKind::Qaoa, "qaoa"},
    {SolverKind::QaoaCorr, "qaoa-corr"},
};

double latent_or0(const LatentMap& latents, const char* key) {
    auto it = latents.find(key);
    return it == latents.end() ? 0.0 : it->second;
}

} // namespace

SolverKind solver_kind_from_name(const std::string& name) {
    for (const auto& kn : kKindNames)
        if (name == kn.name) return kn.kind;
    fail(Errc::UnknownKind, "unknown solver '" + name + "'");
}

const char* solver_name(SolverKind kind) {
    for (const auto& kn : kKindNames)
        if (kn.kind == kind) return kn.name;
    fail(Errc::UnknownKind, "unmapped solver kind");
}

const std::vector<std::string>& all_solver_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& kn : kKindNames) out.emplace_back(kn.name);
        return out;
    }();
    return names;
}

bool uses_uniform_warmup(SolverKind kind) {
    switch (kind) {
        case SolverKind::GpEi:
        case SolverKind::GpUcb:
        case SolverKind::Tpe:
        case SolverKind::Reinforce:
        case SolverKind::PpoRisk:
        case SolverKind::PpoDiv:
        case SolverKind::Qaoa:
        case SolverKind::QaoaCorr:
            return true;
        default:
            return false;
    }
}

std::map<std::string, double> solver_defaults(SolverKind kind) {
    switch (kind) {
        case SolverKind::Random:
            return {};
        case SolverKind::Sa:
            return {{"t0", 3.0}, {"t_end", 0.05}, {"budget", 1000.0}};
        case SolverKind::GaExplore:
            return {{"p_c", 0.9}, {"p_m", 0.1}, {"tournament", 2.0}};
        case SolverKind::GaExploit:
            return {{"p_c", 0.6}, {"p_m", 0.01}, {"tournament", 7.0}};
        case SolverKind::Pso:
            return {{"w", 0.7}, {"c1", 1.5}, {"c2", 1.5}};
        case SolverKind::MapElites:
            return {{"grid", 25.0}, {"sigma", 0.05}};
        case SolverKind::GpEi:
            return {{"length_scale", 0.0}, {"noise", 1e-6},    {"window", 500.0},
                    {"pool_uniform", 1500.0}, {"pool_mutants", 500.0}, {"top_obs", 10.0}};
        case SolverKind::GpUcb:
            return {{"length_scale", 0.0}, {"noise", 1e-6},    {"window", 500.0},
                    {"pool_uniform", 1500.0}, {"pool_mutants", 500.0}, {"top_obs", 10.0},
                    {"kappa", 2.0}};
        case SolverKind::Tpe:
            return {{"gamma", 0.25}, {"alpha", 1.0}, {"n_candidates", 500.0}};
        case SolverKind::Reinforce:
            return {{"alpha", 0.05}, {"baseline_decay", 0.9}, {"logit_clamp", 10.0}};
        case SolverKind::PpoRisk:
            return {{"step", 0.02}, {"clip_eps", 0.2}, {"logit_clamp", 10.0}};
        case SolverKind::PpoDiv:
            return {{"step", 0.02}, {"clip_eps", 0.2}, {"entropy_coef", 0.03},
                    {"logit_clamp", 10.0}};
        case SolverKind::Qaoa:
        case SolverKind::QaoaCorr:
            return {{"rank", 8.0},  {"epochs", 30.0}, {"lr", 0.01},       {"depth", 2.0},
                    {"shots", 5000.0}, {"m", 16.0},   {"opt_evals", 60.0}};
    }
    fail(Errc::UnknownKind, "unmapped solver kind");
}

Solver::Solver(SolverSpec spec, const FeatureSchema& schema, uint64_t master_seed)
    : spec_(std::move(spec)),
      schema_(schema),
      rng_(derive_stream(master_seed, hash_str(solver_name(spec_.kind)), Stream::Proposal)),
      warmup_(uses_uniform_warmup(spec_.kind)),
      best_risk_(-std::numeric_limits<double>::infinity()),
      best_bits_(BitVector::zeros(schema.total_bits())) {
    resolved_ = solver_defaults(spec_.kind);
    for (const auto& [key, value] : spec_.params) {
        if (!resolved_.count(key))
            fail(Errc::BadParam, std::string(solver_name(spec_.kind)) +
                                     " has no parameter '" + key + "'");
        resolved_[key] = value;
    }
}

int Solver::granularity() const { return spec_.batch_size; }

double Solver::param(const std::string& key) const {
    auto it = resolved_.find(key);
    if (it == resolved_.end()) fail(Errc::BadParam, "missing parameter '" + key + "'");
    return it->second;
}

std::map<std::string, double> Solver::resolved_params() const { return resolved_; }

std::vector<BitVector> Solver::uniform_batch(int count) {
    std::vector<BitVector> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(random_config(schema_, rng_));
    return out;
}

std::vector<BitVector> Solver::propose(int count) {
    if (count < 1) fail(Errc::BadParam, "propose count must be >= 1");
    if (pending_ != 0) fail(Errc::BatchMismatch, "previous proposal batch not yet observed");
    std::vector<BitVector> out;
    if (warmup_ && issued_ < spec_.n_init)
        out = uniform_batch(count);
    else
        out = propose_impl(count);
    if (static_cast<int>(out.size()) != count)
        fail(Errc::BatchMismatch, "solver produced a wrong-size batch");
    issued_ += count;
    pending_ = count;
    return out;
}

void Solver::observe(const std::vector<Evaluation>& evals) {
    if (pending_ == 0) fail(Errc::BatchMismatch, "observe without a pending proposal");
    if (static_cast<int>(evals.size()) != pending_)
        fail(Errc::BatchMismatch, "expected " + std::to_string(pending_) + " evaluations, got " +
                                      std::to_string(evals.size()));
    for (const Evaluation& e : evals) {
        if (e.risk > best_risk_) {
            best_risk_ = e.risk;
            best_bits_ = e.z;
        }
    }
    observe_impl(evals);
    observed_ += static_cast<int64_t>(evals.size());
    pending_ = 0;
}

namespace {

// ---------------------------------------------------------------- random

class RandomSolver final : public Solver {
public:
    RandomSolver(SolverSpec spec, const FeatureSchema& schema, uint64_t master_seed)
        : Solver(std::move(spec), schema, master_seed) {}

private:
    std::vector<BitVector> propose_impl(int count) override { return uniform_batch(count); }
    void observe_impl(const std::vector<Evaluation>&) override {}
};

// -------------------------------------------------------------------- sa

// Sequential single-bit-flip chain; every visited configuration is one
// budget unit, so granularity is 1 and the temperature runs on the global
// record index.
class SaSolver final : public Solver {
public:
    SaSolver(SolverSpec spec, const FeatureSchema& schema, uint64_t master_seed)
        : Solver(std::move(spec), schema, master_seed),
          incumbent_(BitVector::zeros(schema.total_bits())) {}

    int granularity() const override { return 1; }

private:
    std::vector<BitVector> propose_impl(int count) override {
        if (count != 1) fail(Errc::BadParam, "the annealer proposes one configuration at a time");
        if (!has_incumbent_) return {random_config(schema_, rng_)};
        BitVector next = incumbent_;
        next.flip(static_cast<int>(rng_.uniform_int(static_cast<uint64_t>(next.size()))));
        return {next};
    }

    void observe_impl(const std::vector<Evaluation>& evals) override {
        const Evaluation& e = evals.front();
        if (!has_incumbent_) {
            incumbent_ = e.z;
            incumbent_risk_ = e.risk;
            has_incumbent_ = true;
            return;
        }
        double t = geometric_temperature(param("t0"), param("t_end"), observed_,
                                         static_cast<int64_t>(param("budget")));
        if (anneal_accept(e.risk - incumbent_risk_, t, rng_)) {
            incumbent_ = e.z;
            incumbent_risk_ = e.risk;
        }
    }

    BitVector incumbent_;
    double incumbent_risk_ = 0.0;
    bool has_incumbent_ = false;
};

// -------------------------------------------------------------------- ga

class GaSolver final : public Solver {
public:
    GaSolver(SolverSpec spec, const FeatureSchema& schema, uint64_t master_seed)
        : Solver(std::move(spec), schema, master_seed) {}

private:
    std::vector<BitVector> propose_impl(int count) override {
        if (population_.empty()) population_ = uniform_batch(count);
        if (static_cast<int>(population_.size()) != count)
            fail(Errc::BatchMismatch, "population size is fixed after the first batch");
        return population_;
    }

    void observe_impl(const std::vector<Evaluation>& evals) override {
        std::vector<double> fitness;
        fitness.reserve(evals.size());
        for (const Evaluation& e : evals) fitness.push_back(e.risk);
        GaParams p{param("p_c"), param("p_m"), static_cast<int>(param("tournament"))};
        population_ = ga_step(population_, fitness, p, rng_);
    }

    std::vector<BitVector> population_;
};

// ------------------------------------------------------------------- pso

class PsoSolver final : public Solver {
public:
    PsoSolver(SolverSpec spec, const FeatureSchema& schema, uint64_t master_seed)
        : Solver(std::move(spec), schema, master_seed),
          gbest_(BitVector::zeros(schema.total_bits())) {}

private:
    std::vector<BitVector> propose_impl(int count) override {
        if (positions_.empty()) {
            positions_ = uniform_batch(count);
            velocities_.assign(positions_.size(),
                               std::vector<double>(static_cast<size_t>(schema_.total_bits()), 0.0));
            pbest_ = positions_;
            pbest_risk_.assign(positions_.size(), -std::numeric_limits<double>::infinity());
        }
        if (static_cast<int>(positions_.size()) != count)
            fail(Errc::BatchMismatch, "swarm size is fixed after the first batch");
        return positions_;
    }

    void observe_impl(const std::vector<Evaluation>& evals) override {
        for (size_t i = 0; i < evals.size(); ++i) {
            if (evals[i].risk > pbest_risk_[i]) {
                pbest_risk_[i] = evals[i].risk;
                pbest_[i] = evals[i].z;
            }
            if (evals[i].risk > gbest_risk_) {
                gbest_risk_ = evals[i].risk;
                gbest_ = evals[i].z;
            }
        }
        PsoParams p{param("w"), param("c1"), param("c2")};
        for (size_t i = 0; i < positions_.size(); ++i)
            pso_update(positions_[i], velocities_[i], pbest_[i], gbest_, p, rng_);
    }

    std::vector<BitVector> positions_;
    std::vector<std::vector<double>> velocities_;
    std::vector<BitVector> pbest_;
    std::vector<double> pbest_risk_;
    BitVector gbest_;
    double gbest_risk_ = -std::numeric_limits<double>::infinity();
};

// ------------------------------------------------------------ map-elites

// Relaxed [0,1]^N genomes with Gaussian mutation, thresholded at 0.5 into
// bits; descriptors are the density composite and a noise/layout blend.
class MapElitesSolver final : public Solver {
public:
    MapElitesSolver(SolverSpec spec, const FeatureSchema& schema, uint64_t master_seed)
        : Solver(std::move(spec), schema, master_seed),
          grid_(static_cast<int>(param("grid"))) {}

private:
    std::vector<BitVector> propose_impl(int count) override {
        const int width = schema_.total_bits();
        const double sigma = param("sigma");
        last_genomes_.clear();
        std::vector<BitVector> out;
        for (int i = 0; i < count; ++i) {
            std::vector<double> genome(static_cast<size_t>(width));
            if (grid_.occupied_count() == 0) {
                for (double& g : genome) g = rng_.uniform();
            } else {
                const auto& cells = grid_.occupied_cells();
                int flat = cells[rng_.uniform_int(cells.size())];
                genome = grid_.elite_at(flat).genome;
                for (double& g : genome)
                    g = std::clamp(g + sigma * rng_.normal(), 0.0, 1.0);
            }
            BitVector z = BitVector::zeros(width);
            for (int b = 0; b < width; ++b)
                if (genome[static_cast<size_t>(b)] > 0.5) z.set(b, true);
            last_genomes_.push_back(std::move(genome));
            out.push_back(z);
        }
        return out;
    }

    void observe_impl(const std::vector<Evaluation>& evals) override {
        for (size_t i = 0; i < evals.size(); ++i) {
            LatentMap latents = derive_latents(evals[i].features, schema_);
            double d1 = latent_or0(latents, "d");
            double d2 = 0.5 * (latent_or0(latents, "eta") + latent_or0(latents, "s_hard"));
            std::vector<double> genome;
            if (i < last_genomes_.size()) {
                genome = last_genomes_[i];
            } else {
                // observation without a matching relaxed genome (first batch
                // replay): rebuild one consistent with the bits
                genome.resize(static_cast<size_t>(evals[i].z.size()));
                for (int b = 0; b < evals[i].z.size(); ++b)
                    genome[static_cast<size_t>(b)] = evals[i].z.get(b) ? 0.75 : 0.25;
            }
            grid_.insert(d1, d2, evals[i].risk, std::move(genome), evals[i].z);
        }
    }

    EliteGrid grid_;
    std::vector<std::vector<double>> last_genomes_;
};

// -------------------------------------------------------------------- gp

class GpSolver final : public Solver {
public:
    GpSolver(SolverSpec spec, const FeatureSchema& schema, uint64_t master_seed, bool ucb)
        : Solver(std::move(spec), schema, master_seed), ucb_(ucb) {}

private:
    std::vector<BitVector> propose_impl(int count) override {
        const size_t window = static_cast<size_t>(param("window"));
        size_t start = x_.size() > window ? x_.size() - window : 0;
        std::vector<BitVector> wx(x_.begin() + static_cast<ptrdiff_t>(start), x_.end());
        std::vector<double> wy(y_.begin() + static_cast<ptrdiff_t>(start), y_.end());
        GpPosterior gp = GpPosterior::fit(wx, wy, GpParams{param("length_scale"), param("noise")});

        std::vector<BitVector> pool = uniform_batch(static_cast<int>(param("pool_uniform")));
        const int top_obs = std::min<int>(static_cast<int>(param("top_obs")),
                                          static_cast<int>(x_.size()));
        std::vector<size_t> order(x_.size());
        std::iota(order.begin(), order.end(), size_t{0});
        std::partial_sort(order.begin(), order.begin() + top_obs, order.end(),
                          [&](size_t a, size_t b) { return y_[a] > y_[b]; });
        for (int i = 0; i < static_cast<int>(param("pool_mutants")); ++i) {
            BitVector z = x_[order[rng_.uniform_int(static_cast<uint64_t>(top_obs))]];
            z.flip(static_cast<int>(rng_.uniform_int(static_cast<uint64_t>(z.size()))));
            pool.push_back(z);
        }
        // dedup within the pool only; history revisits stay allowed
        std::set<BitVector> seen;
        std::vector<BitVector> unique_pool;
        for (const BitVector& z : pool)
            if (seen.insert(z).second) unique_pool.push_back(z);

        std::vector<double> mean, var;
        gp.predict_batch(unique_pool, mean, var);
        double incumbent = *std::max_element(y_.begin(), y_.end());
        std::vector<double> score(unique_pool.size());
        for (size_t i = 0; i < unique_pool.size(); ++i) {
            double sigma = std::sqrt(std::max(0.0, var[i]));
            score[i] = ucb_ ? upper_confidence_bound(mean[i], sigma, param("kappa"))
                            : expected_improvement(mean[i], sigma, incumbent);
        }
        std::vector<size_t> rank(unique_pool.size());
        std::iota(rank.begin(), rank.end(), size_t{0});
        std::stable_sort(rank.begin(), rank.end(),
                         [&](size_t a, size_t b) { return score[a] > score[b]; });

        std::vector<BitVector> out;
        for (size_t i = 0; i < rank.size() && static_cast<int>(out.size()) < count; ++i)
            out.push_back(unique_pool[rank[i]]);
        while (static_cast<int>(out.size()) < count) out.push_back(random_config(schema_, rng_));
        return out;
    }

    void observe_impl(const std::vector<Evaluation>& evals) override {
        for (const Evaluation& e : evals) {
            x_.push_back(e.z);
            y_.push_back(e.risk);
        }
    }

    bool ucb_;
    std::vector<BitVector> x_;
    std::vector<double> y_;
};

// ------------------------------------------------------------------- tpe

class TpeSolver final : public Solver {
public:
    TpeSolver(SolverSpec spec, const FeatureSchema& schema, uint64_t master_seed)
        : Solver(std::move(spec), schema, master_seed) {}

private:
    std::vector<BitVector> propose_impl(int count) override {
        TpeDensities d = tpe_fit(x_, y_, param("gamma"), param("alpha"));
        const int n_cand = static_cast<int>(param("n_candidates"));
        std::vector<BitVector> cand;
        std::vector<double> score;
        cand.reserve(static_cast<size_t>(n_cand));
        for (int i = 0; i < n_cand; ++i) {
            cand.push_back(tpe_sample(d, schema_.total_bits(), rng_));
            score.push_back(tpe_score(cand.back(), d));
        }
        std::vector<size_t> rank(cand.size());
        std::iota(rank.begin(), rank.end(), size_t{0});
        std::stable_sort(rank.begin(), rank.end(),
                         [&](size_t a, size_t b) { return score[a] > score[b]; });
        // Take the top-k distinct candidates; repeating one modal word
        // across a batch would only re-query the evaluation cache.
        std::vector<BitVector> out;
        std::set<uint64_t> seen;
        for (size_t i = 0; i < rank.size() && static_cast<int>(out.size()) < count; ++i) {
            if (!seen.insert(cand[rank[i]].word()).second) continue;
            out.push_back(cand[rank[i]]);
        }
        while (static_cast<int>(out.size()) < count) out.push_back(random_config(schema_, rng_));
        return out;
    }

    void observe_impl(const std::vector<Evaluation>& evals) override {
        for (const Evaluation& e : evals) {
            x_.push_back(e.z);
            y_.push_back(e.risk);
        }
    }

    std::vector<BitVector> x_;
    std::vector<double> y_;
};

// ---------------------------------------------------------------- policy

class PolicySolver final : public Solver {
public:
    PolicySolver(SolverSpec spec, const FeatureSchema& schema, uint64_t master_seed,
                 PolicyKind kind)
        : Solver(std::move(spec), schema, master_seed), kind_(kind) {
        state_.logits.assign(static_cast<size_t>(schema.total_bits()), 0.0);
    }

private:
    std::vector<BitVector> propose_impl(int count) override {
        std::vector<BitVector> out;
        for (int i = 0; i < count; ++i) {
            BitVector z = BitVector::zeros(schema_.total_bits());
            for (int b = 0; b < z.size(); ++b)
                if (rng_.bernoulli(sigmoid(state_.logits[static_cast<size_t>(b)]))) z.set(b, true);
            out.push_back(z);
        }
        return out;
    }

    void observe_impl(const std::vector<Evaluation>& evals) override {
        if (in_warmup()) return; // warmup records stay exactly uniform
        std::vector<BitVector> bits;
        std::vector<double> rewards;
        for (const Evaluation& e : evals) {
            bits.push_back(e.z);
            rewards.push_back(e.risk);
        }
        PolicyParams p;
        p.kind = kind_;
        p.logit_clamp = param("logit_clamp");
        if (kind_ == PolicyKind::Reinforce) {
            p.alpha = param("alpha");
            p.baseline_decay = param("baseline_decay");
        } else {
            p.step = param("step");
            p.clip_eps = param("clip_eps");
            if (kind_ == PolicyKind::PpoDiv) p.entropy_coef = param("entropy_coef");
        }
        policy_update(state_, bits, rewards, p);
    }

    PolicyKind kind_;
    PolicyState state_;
};

// ------------------------------------------------------------------ qaoa

// FM surrogate compiled to an Ising cost Hamiltonian over the most
// influential m bits (the rest frozen to the incumbent best), depth-2 QAOA
// simulated exactly, batches drawn from the measurement distribution.
class QaoaSolver final : public Solver {
public:
    QaoaSolver(SolverSpec spec, const FeatureSchema& schema, uint64_t master_seed, bool correlated)
        : Solver(std::move(spec), schema, master_seed),
          correlated_(correlated),
          rng_shots_(derive_stream(master_seed, hash_str(solver_name(spec_.kind)), Stream::Shots)),
          rng_fm_(derive_stream(master_seed, hash_str(solver_name(spec_.kind)), Stream::Init)) {}

private:
    std::vector<BitVector> propose_impl(int count) override {
        FmParams fp;
        fp.rank = static_cast<int>(param("rank"));
        fp.epochs = static_cast<int>(param("epochs"));
        fp.lr = param("lr");
        FmModel fm = fit_fm(x_, y_, fp, rng_fm_);

        QuboMatrix qubo = fm_to_qubo(fm);
        const int m = std::min(static_cast<int>(param("m")), schema_.total_bits());
        std::vector<int> active = select_subproblem(fm, m);
        QuboMatrix sub = restrict_qubo(qubo, active, best_bits());
        IsingModel ising = qubo_to_ising(sub);

        QaoaCircuitSpec cs;
        cs.depth = static_cast<int>(param("depth"));
        cs.shots = static_cast<int>(param("shots"));
        cs.mixer = MixerKind::Standard;
        if (correlated_) {
            cs.correlated_pairs = strongest_coupling_pairs(ising, (m + 1) / 2);
            if (!cs.correlated_pairs.empty()) cs.mixer = MixerKind::Correlated;
        }
        cs.angles.assign(static_cast<size_t>(2 * cs.depth), 0.1);
        optimize_angles(ising, cs, static_cast<int>(param("opt_evals")));
        Amplitudes amps = qaoa_statevector(ising, cs);
        std::vector<uint64_t> samples = sample_states(amps, cs.shots, rng_shots_);

        // expand each sampled subspace state to a full config, keep distinct
        // ones in first-seen shot order so the batch follows the circuit's
        // own measurement distribution
        std::vector<BitVector> out;
        std::set<uint64_t> seen;
        for (uint64_t s : samples) {
            if (static_cast<int>(out.size()) >= count) break;
            BitVector z = best_bits();
            for (size_t qb = 0; qb < active.size(); ++qb)
                z.set(active[qb], (s >> qb) & 1u);
            if (!seen.insert(z.word()).second) continue;
            out.push_back(z);
        }
        while (static_cast<int>(out.size()) < count) out.push_back(random_config(schema_, rng_));
        return out;
    }

    void observe_impl(const std::vector<Evaluation>& evals) override {
        for (const Evaluation& e : evals) {
            x_.push_back(e.z);
            y_.push_back(e.risk);
        }
    }

    bool correlated_;
    Rng rng_shots_;
    Rng rng_fm_;
    std::vector<BitVector> x_;
    std::vector<double> y_;
};

} // namespace

std::unique_ptr<Solver> make_solver(const SolverSpec& spec, const FeatureSchema& schema,
                                    uint64_t master_seed) {
    if (spec.batch_size < 1) fail(Errc::BadParam, "batch_size must be >= 1");
    if (spec.n_init < 0) fail(Errc::BadParam, "n_init must be >= 0");
    if (spec.n_init % spec.batch_size != 0)
        fail(Errc::BadParam, "n_init must be a multiple of batch_size");
    switch (spec.kind) {
        case SolverKind::Random:
            return std::make_unique<RandomSolver>(spec, schema, master_seed);
        case SolverKind::Sa:
            return std::make_unique<SaSolver>(spec, schema, master_seed);
        case SolverKind::GaExplore:
        case SolverKind::GaExploit:
            return std::make_unique<GaSolver>(spec, schema, master_seed);
        case SolverKind::Pso:
            return std::make_unique<PsoSolver>(spec, schema, master_seed);
        case SolverKind::MapElites:
            return std::make_unique<MapElitesSolver>(spec, schema, master_seed);
        case SolverKind::GpEi:
            return std::make_unique<GpSolver>(spec, schema, master_seed, false);
        case SolverKind::GpUcb:
            return std::make_unique<GpSolver>(spec, schema, master_seed, true);
        case SolverKind::Tpe:
            return std::make_unique<TpeSolver>(spec, schema, master_seed);
        case SolverKind::Reinforce:
            return std::make_unique<PolicySolver>(spec, schema, master_seed, PolicyKind::Reinforce);
        case SolverKind::PpoRisk:
            return std::make_unique<PolicySolver>(spec, schema, master_seed, PolicyKind::PpoRisk);
        case SolverKind::PpoDiv:
            return std::make_unique<PolicySolver>(spec, schema, master_seed, PolicyKind::PpoDiv);
        case SolverKind::Qaoa:
        case SolverKind::QaoaCorr: {
            auto it = spec.params.find("m");
            double m = it == spec.params.end() ? solver_defaults(spec.kind).at("m") : it->second;
            if (m < 1) fail(Errc::BadParam, "m must be >= 1");
            if (m > 24) fail(Errc::TooManyQubits, "m exceeds the 24-qubit simulation guard");
            return std::make_unique<QaoaSolver>(spec, schema, master_seed,
                                                spec.kind == SolverKind::QaoaCorr);
        }
    }
    fail(Errc::UnknownKind, "unmapped solver kind");
}

} // namespace riskscout

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "riskscout/bitvector.hpp"
#include "riskscout/errors.hpp"
#include "riskscout/oracle.hpp"
#include "riskscout/rng.hpp"
#include "riskscout/schema.hpp"

namespace riskscout {

enum class SolverKind {
    Random,
    Sa,
    GaExplore,
    GaExploit,
    Pso,
    MapElites,
    GpEi,
    GpUcb,
    Tpe,
    Reinforce,
    PpoRisk,
    PpoDiv,
    Qaoa,
    QaoaCorr,
};

SolverKind solver_kind_from_name(const std::string& name); // UnknownKind
const char* solver_name(SolverKind kind);
const std::vector<std::string>& all_solver_names();

// Surrogate/learning kinds emit their first n_init proposals uniformly at
// random and defer model updates until the warmup evaluations are in.
bool uses_uniform_warmup(SolverKind kind);

struct SolverSpec {
    SolverKind kind = SolverKind::Random;
    std::map<std::string, double> params; // overrides of the kind's defaults
    int batch_size = 50;
    int n_init = 100;
};

// Per-kind default parameters; resolved_params() reports these merged with
// any overrides, and the manifest records the result.
std::map<std::string, double> solver_defaults(SolverKind kind);

// Single-owner propose/observe state machine. propose never mutates observed
// history; observe never proposes. The harness alternates them strictly.
class Solver {
public:
    virtual ~Solver() = default;

    const SolverSpec& spec() const { return spec_; }
    const char* name() const { return solver_name(spec_.kind); }

    // Proposals per propose/observe cycle. batch_size for population and
    // surrogate methods; 1 for the annealer, whose chain needs feedback after
    // every step.
    virtual int granularity() const;

    std::vector<BitVector> propose(int count);
    void observe(const std::vector<Evaluation>& evals);

    int64_t observed() const { return observed_; }
    double best_risk() const { return best_risk_; }
    const BitVector& best_bits() const { return best_bits_; }
    std::map<std::string, double> resolved_params() const;

protected:
    Solver(SolverSpec spec, const FeatureSchema& schema, uint64_t master_seed);

    virtual std::vector<BitVector> propose_impl(int count) = 0;
    virtual void observe_impl(const std::vector<Evaluation>& evals) = 0;

    bool in_warmup() const { return warmup_ && observed_ < spec_.n_init; }
    std::vector<BitVector> uniform_batch(int count);
    double param(const std::string& key) const;

    SolverSpec spec_;
    const FeatureSchema& schema_;
    Rng rng_; // proposal stream
    int64_t issued_ = 0;
    int64_t observed_ = 0;
    int pending_ = 0;
    bool warmup_ = false;
    double best_risk_;
    BitVector best_bits_;
    std::map<std::string, double> resolved_;
};

// Validates batch_size/n_init invariants and parameter names; BadParam on
// violations, UnknownKind via solver_kind_from_name.
std::unique_ptr<Solver> make_solver(const SolverSpec& spec, const FeatureSchema& schema,
                                    uint64_t master_seed);

} // namespace riskscout

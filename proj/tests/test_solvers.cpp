#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "riskscout/oracle.hpp"
#include "riskscout/solvers.hpp"

using namespace riskscout;

namespace {

struct Bench {
    FeatureSchema schema = builtin_schema("single_page_24");
    LandscapeProfile profile = builtin_profile("idp-sim-v1");
    ReferenceStats stats = default_reference_stats(schema);

    Bench() { profile.noise_sigma = 0.0; }

    std::vector<Evaluation> run(const std::vector<BitVector>& batch) const {
        std::vector<Evaluation> out;
        out.reserve(batch.size());
        for (const auto& z : batch) out.push_back(evaluate(z, 0, schema, profile, stats));
        return out;
    }
};

// Minimal evaluations for solvers whose observe path only reads z and risk.
std::vector<Evaluation> fake_evals(const std::vector<BitVector>& batch,
                                   const std::vector<double>& risk) {
    std::vector<Evaluation> out(batch.size());
    for (size_t i = 0; i < batch.size(); ++i) {
        out[i].z = batch[i];
        out[i].risk = risk[i];
    }
    return out;
}

SolverSpec make_spec(SolverKind kind, int batch, int n_init,
                     std::map<std::string, double> params = {}) {
    SolverSpec s;
    s.kind = kind;
    s.batch_size = batch;
    s.n_init = n_init;
    s.params = std::move(params);
    return s;
}

} // namespace

// ----------------------------------------------------------- registration

TEST_CASE("the catalog names exactly fourteen solvers") {
    const auto& names = all_solver_names();
    REQUIRE(names.size() == 14);
    std::vector<std::string> want{"random",    "sa",       "ga-explore", "ga-exploit", "pso",
                                  "map-elites", "gp-ei",    "gp-ucb",     "tpe",       "reinforce",
                                  "ppo-risk",  "ppo-div",  "qaoa",       "qaoa-corr"};
    CHECK(names == want);
    for (const auto& n : names) CHECK(solver_name(solver_kind_from_name(n)) == n);
    CHECK_THROWS_AS(solver_kind_from_name("bogus"), Error);
}

TEST_CASE("warmup membership covers the model-based solvers only") {
    for (auto kind : {SolverKind::GpEi, SolverKind::GpUcb, SolverKind::Tpe, SolverKind::Reinforce,
                      SolverKind::PpoRisk, SolverKind::PpoDiv, SolverKind::Qaoa,
                      SolverKind::QaoaCorr})
        CHECK(uses_uniform_warmup(kind));
    for (auto kind : {SolverKind::Random, SolverKind::Sa, SolverKind::GaExplore,
                      SolverKind::GaExploit, SolverKind::Pso, SolverKind::MapElites})
        CHECK_FALSE(uses_uniform_warmup(kind));
}

TEST_CASE("defaults carry the documented values") {
    auto sa = solver_defaults(SolverKind::Sa);
    CHECK(sa.at("t0") == 3.0);
    CHECK(sa.at("t_end") == 0.05);
    auto gax = solver_defaults(SolverKind::GaExplore);
    CHECK(gax.at("p_c") == 0.9);
    CHECK(gax.at("p_m") == 0.1);
    CHECK(gax.at("tournament") == 2.0);
    auto git = solver_defaults(SolverKind::GaExploit);
    CHECK(git.at("p_c") == 0.6);
    CHECK(git.at("p_m") == 0.01);
    CHECK(git.at("tournament") == 7.0);
    CHECK(solver_defaults(SolverKind::GpUcb).at("kappa") == 2.0);
    CHECK(solver_defaults(SolverKind::Tpe).at("gamma") == 0.25);
    CHECK(solver_defaults(SolverKind::Reinforce).at("alpha") == 0.05);
    CHECK(solver_defaults(SolverKind::PpoDiv).at("entropy_coef") == 0.03);
    auto qa = solver_defaults(SolverKind::Qaoa);
    CHECK(qa.at("m") == 16.0);
    CHECK(qa.at("depth") == 2.0);
    CHECK(qa.at("shots") == 5000.0);
}

TEST_CASE("parameter overrides are merged and validated") {
    Bench b;
    auto s = make_solver(make_spec(SolverKind::Sa, 1, 0, {{"t0", 5.0}}), b.schema, 42);
    CHECK(s->resolved_params().at("t0") == 5.0);
    CHECK(s->resolved_params().at("t_end") == 0.05);
    CHECK_THROWS_AS(make_solver(make_spec(SolverKind::Sa, 1, 0, {{"nope", 1.0}}), b.schema, 42),
                    Error);
}

TEST_CASE("spec validation rejects impossible shapes") {
    Bench b;
    CHECK_THROWS_AS(make_solver(make_spec(SolverKind::Random, 0, 0), b.schema, 1), Error);
    // n_init must align with the batch grid
    CHECK_THROWS_AS(make_solver(make_spec(SolverKind::GpEi, 50, 120), b.schema, 1), Error);
    CHECK_NOTHROW(make_solver(make_spec(SolverKind::GpEi, 50, 100), b.schema, 1));
    CHECK_THROWS_AS(make_solver(make_spec(SolverKind::Qaoa, 50, 100, {{"m", 30.0}}), b.schema, 1),
                    Error);
    CHECK_THROWS_AS(make_solver(make_spec(SolverKind::Qaoa, 50, 100, {{"m", 0.0}}), b.schema, 1),
                    Error);
}

// ---------------------------------------------------------------protocol

TEST_CASE("propose/observe must strictly alternate") {
    Bench b;
    auto s = make_solver(make_spec(SolverKind::Random, 10, 0), b.schema, 7);
    CHECK(s->granularity() == 10);
    auto batch = s->propose(10);
    REQUIRE(batch.size() == 10);
    CHECK_THROWS_AS(s->propose(10), Error); // pending batch
    auto evals = b.run(batch);
    evals.pop_back();
    CHECK_THROWS_AS(s->observe(evals), Error); // wrong size
    evals = b.run(batch);
    s->observe(evals);
    CHECK(s->observed() == 10);
    CHECK_THROWS_AS(s->observe(evals), Error); // nothing pending
    CHECK_THROWS_AS(s->propose(0), Error);
}

TEST_CASE("the incumbent tracks the strict maximum") {
    Bench b;
    auto s = make_solver(make_spec(SolverKind::Random, 4, 0), b.schema, 8);
    auto batch = s->propose(4);
    std::vector<double> risk{1.0, 3.0, 3.0, 2.0};
    s->observe(fake_evals(batch, risk));
    CHECK(s->best_risk() == 3.0);
    CHECK(s->best_bits() == batch[1]); // first of the tie, strict comparison

    auto batch2 = s->propose(4);
    s->observe(fake_evals(batch2, {0.0, 0.0, 0.0, 0.0}));
    CHECK(s->best_risk() == 3.0); // unchanged
    CHECK(s->best_bits() == batch[1]);
}

TEST_CASE("warmup proposals replay the documented uniform stream") {
    Bench b;
    for (const char* name : {"gp-ei", "gp-ucb", "tpe", "reinforce", "ppo-risk", "ppo-div"}) {
        SolverKind kind = solver_kind_from_name(name);
        const uint64_t master = 505;
        auto s = make_solver(make_spec(kind, 10, 20), b.schema, master);
        Rng expect(derive_stream(master, hash_str(name), Stream::Proposal));
        for (int batch = 0; batch < 2; ++batch) {
            auto got = s->propose(10);
            for (const auto& z : got) CHECK(z == random_config(b.schema, expect));
            s->observe(b.run(got));
        }
        // Past n_init the stream is the solver's own business; it only has to
        // keep the shape.
        auto post = s->propose(10);
        CHECK(post.size() == 10);
        for (const auto& z : post) CHECK(z.size() == 24);
    }
}

TEST_CASE("solvers replay exactly under the same master seed") {
    Bench b;
    for (const char* name : {"random", "sa", "ga-explore", "ga-exploit", "pso", "map-elites",
                             "gp-ei", "tpe", "reinforce", "ppo-div"}) {
        SolverKind kind = solver_kind_from_name(name);
        int batch = kind == SolverKind::Sa ? 1 : 10;
        int n_init = kind == SolverKind::Sa ? 0 : 20;
        auto s1 = make_solver(make_spec(kind, batch, n_init), b.schema, 99);
        auto s2 = make_solver(make_spec(kind, batch, n_init), b.schema, 99);
        for (int round = 0; round < 6; ++round) {
            auto p1 = s1->propose(batch);
            auto p2 = s2->propose(batch);
            CHECK(p1 == p2);
            auto e = b.run(p1);
            s1->observe(e);
            s2->observe(e);
        }
        CHECK(s1->best_risk() == s2->best_risk());
    }
}

// --------------------------------------------------------------------- SA

TEST_CASE("the annealer walks single-bit steps from its incumbent") {
    Bench b;
    auto s = make_solver(make_spec(SolverKind::Sa, 1, 0), b.schema, 11);
    CHECK(s->granularity() == 1);

    // Monotonically improving risks: the chain accepts everything, so each
    // proposal is one flip away from the previous one.
    BitVector prev = s->propose(1)[0];
    s->observe(fake_evals({prev}, {1.0}));
    for (int t = 1; t < 40; ++t) {
        BitVector cur = s->propose(1)[0];
        CHECK(cur.hamming(prev) == 1);
        s->observe(fake_evals({cur}, {1.0 + t}));
        prev = cur;
    }
    CHECK_THROWS_AS(s->propose(2), Error); // chain granularity is one
}

TEST_CASE("a frozen annealer never leaves its incumbent") {
    Bench b;
    // t0 = t_end ~ 0: regressions are always rejected.
    auto s = make_solver(
        make_spec(SolverKind::Sa, 1, 0, {{"t0", 1e-12}, {"t_end", 1e-12}, {"budget", 100.0}}),
        b.schema, 12);
    BitVector first = s->propose(1)[0];
    s->observe(fake_evals({first}, {5.0}));
    for (int t = 1; t < 30; ++t) {
        BitVector cur = s->propose(1)[0];
        CHECK(cur.hamming(first) == 1); // always proposed off the same incumbent
        s->observe(fake_evals({cur}, {1.0}));
    }
}

// --------------------------------------------------------------------- GA

TEST_CASE("ga populations stay batch-sized and improve risk") {
    Bench b;
    auto s = make_solver(make_spec(SolverKind::GaExploit, 20, 0), b.schema, 13);
    double first_mean = 0.0, last_mean = 0.0;
    for (int round = 0; round < 15; ++round) {
        auto pop = s->propose(20);
        REQUIRE(pop.size() == 20);
        auto evals = b.run(pop);
        double mean = 0.0;
        for (const auto& e : evals) mean += e.risk / 20;
        if (round == 0) first_mean = mean;
        last_mean = mean;
        s->observe(evals);
    }
    CHECK(last_mean > first_mean); // selection pressure pays off on a smooth landscape
}

// ------------------------------------------------------------- map-elites

TEST_CASE("map-elites proposes valid batches and archives improvements") {
    Bench b;
    auto s = make_solver(make_spec(SolverKind::MapElites, 10, 0), b.schema, 14);
    double best = 0.0;
    for (int round = 0; round < 10; ++round) {
        auto pop = s->propose(10);
        REQUIRE(pop.size() == 10);
        auto evals = b.run(pop);
        s->observe(evals);
        for (const auto& e : evals) best = std::max(best, e.risk);
    }
    CHECK(s->best_risk() == doctest::Approx(best));
}

// -------------------------------------------------------------------- GP

TEST_CASE("gp solvers emit distinct candidates after warmup") {
    Bench b;
    for (auto kind : {SolverKind::GpEi, SolverKind::GpUcb}) {
        auto s = make_solver(make_spec(kind, 10, 10), b.schema, 15);
        auto warm = s->propose(10);
        s->observe(b.run(warm));
        auto cand = s->propose(10);
        std::set<uint64_t> distinct;
        for (const auto& z : cand) distinct.insert(z.word());
        CHECK(distinct.size() == cand.size()); // acquisition ranks a deduped pool
        s->observe(b.run(cand));
        CHECK(s->observed() == 20);
    }
}

// ----------------------------------------------------------------- policy

TEST_CASE("reinforce learns to favor rewarded bits") {
    Bench b;
    auto s = make_solver(make_spec(SolverKind::Reinforce, 10, 10), b.schema, 16);
    // Reward = fraction of ones: the policy should drift towards dense
    // configurations once warmup ends.
    double early = -1.0, late = -1.0;
    for (int round = 0; round < 60; ++round) {
        auto batch = s->propose(10);
        std::vector<double> risk;
        double density = 0.0;
        for (const auto& z : batch) {
            risk.push_back(static_cast<double>(z.popcount()));
            density += z.popcount() / 24.0 / 10.0;
        }
        if (round == 1) early = density;
        late = density;
        s->observe(fake_evals(batch, risk));
    }
    CHECK(early == doctest::Approx(0.5).epsilon(0.35)); // warmup is uniform
    CHECK(late > 0.8);                                  // policy concentrated
}

TEST_CASE("policy solvers ignore rewards during warmup") {
    Bench b;
    // Two REINFORCE solvers with the same master seed see wildly different
    // warmup rewards; their post-warmup behaviour must still match until the
    // first real update, because no learning happens on warmup batches.
    auto s1 = make_solver(make_spec(SolverKind::Reinforce, 10, 20), b.schema, 17);
    auto s2 = make_solver(make_spec(SolverKind::Reinforce, 10, 20), b.schema, 17);
    for (int round = 0; round < 2; ++round) {
        auto p1 = s1->propose(10);
        auto p2 = s2->propose(10);
        std::vector<double> r1(10), r2(10);
        for (int i = 0; i < 10; ++i) {
            r1[i] = static_cast<double>(i);
            r2[i] = static_cast<double>(100 - i * 7);
        }
        s1->observe(fake_evals(p1, r1));
        s2->observe(fake_evals(p2, r2));
    }
    CHECK(s1->propose(10) == s2->propose(10));
}

// ------------------------------------------------------------------- QAOA

TEST_CASE("qaoa solvers run the full loop on a small subproblem") {
    Bench b;
    std::map<std::string, double> fast{{"m", 4.0},     {"epochs", 5.0}, {"shots", 200.0},
                                       {"depth", 1.0}, {"opt_evals", 12.0}};
    for (auto kind : {SolverKind::Qaoa, SolverKind::QaoaCorr}) {
        auto s1 = make_solver(make_spec(kind, 10, 10, fast), b.schema, 18);
        auto s2 = make_solver(make_spec(kind, 10, 10, fast), b.schema, 18);
        for (int round = 0; round < 3; ++round) {
            auto p1 = s1->propose(10);
            auto p2 = s2->propose(10);
            CHECK(p1 == p2);
            REQUIRE(p1.size() == 10);
            for (const auto& z : p1) CHECK(z.size() == 24);
            auto e = b.run(p1);
            s1->observe(e);
            s2->observe(e);
        }
    }
}

TEST_CASE("qaoa clamps the subproblem to the schema width") {
    FeatureSchema mini = builtin_schema("mini_8");
    LandscapeProfile p = builtin_profile("idp-sim-v1");
    p.noise_sigma = 0.0;
    ReferenceStats stats = default_reference_stats(mini);
    // m=16 default > 8 bits: the solver must shrink to 8 rather than fail.
    auto s = make_solver(make_spec(SolverKind::Qaoa, 5, 5,
                                   {{"epochs", 3.0}, {"shots", 100.0}, {"depth", 1.0},
                                    {"opt_evals", 8.0}}),
                         mini, 19);
    auto warm = s->propose(5);
    std::vector<Evaluation> evals;
    for (const auto& z : warm) evals.push_back(evaluate(z, 0, mini, p, stats));
    s->observe(evals);
    auto cand = s->propose(5);
    REQUIRE(cand.size() == 5);
    for (const auto& z : cand) CHECK(z.size() == 8);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "riskscout/analytics.hpp"
#include "riskscout/rng.hpp"

using namespace riskscout;
namespace fs = std::filesystem;

namespace {

Evaluation rec(const std::string& solver, uint64_t seed, uint64_t word, double risk,
               double rarity = 0.0, int width = 8) {
    Evaluation e;
    e.solver = solver;
    e.seed = seed;
    e.z = BitVector(word, width);
    e.risk = risk;
    e.rarity = rarity;
    e.features["F"] = 0;
    e.features["G"] = 0;
    return e;
}

CoreRiskMode mode(std::vector<std::string> failures, DensityRegime d = DensityRegime::Low) {
    CoreRiskMode m;
    m.failures = std::move(failures);
    m.density = d;
    return m;
}

std::string first_line(const fs::path& p) {
    std::ifstream f(p);
    std::string line;
    std::getline(f, line);
    return line;
}

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a riskscout error");
    return Errc::BadParam;
}

} // namespace

// --------------------------------------------------------------- grouping

TEST_CASE("grouping keeps first-appearance solver order and sorts seeds") {
    std::vector<std::vector<Evaluation>> archives;
    archives.push_back({rec("b", 5, 0, 1.0)});
    archives.push_back({rec("a", 2, 0, 1.0)});
    archives.push_back({rec("b", 1, 0, 1.0)});

    auto grouped = group_archives(std::move(archives));
    REQUIRE(grouped.size() == 2);
    CHECK(grouped[0].solver == "b");
    CHECK(grouped[0].seeds == std::vector<uint64_t>{1, 5});
    CHECK(grouped[1].solver == "a");
    CHECK(grouped[1].seeds == std::vector<uint64_t>{2});

    CHECK(code_of([] { group_archives({{}}); }) == Errc::EmptyArchive);
}

// ---------------------------------------------------------------- summary

TEST_CASE("summary columns match a worked four-record archive") {
    // risks 1..4, rarities .5/.5/1/1, words 0x00/0xFF/0x00/0x0F,
    // feature F in {0,0,1,1}, G constant.
    std::vector<Evaluation> a{rec("s", 1, 0x00, 1.0, 0.5), rec("s", 1, 0xFF, 2.0, 0.5),
                              rec("s", 1, 0x00, 3.0, 1.0), rec("s", 1, 0x0F, 4.0, 1.0)};
    a[2].features["F"] = 1;
    a[3].features["F"] = 1;

    SummaryRow row = summary_stats(a);
    CHECK(row.max_risk == 4.0);
    CHECK(row.mean_risk == 2.5);
    CHECK(row.std_risk == doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));
    CHECK(row.rare == 0.75);
    CHECK(row.t10_mu == 4.0); // ceil(4/10) = 1 record
    CHECK(row.t10_sd == 0.0);
    CHECK(row.unique_layouts == 3.0);
    CHECK(row.auc == doctest::Approx(0.625).epsilon(1e-12)); // (1+2+3+4)/4 each /4
    // per-bit ones: 2 for bits 0-3, 1 for bits 4-7 -> 4*4 + 4*3 = 28 unequal pairs
    CHECK(row.hamming == doctest::Approx(28.0 / 48.0).epsilon(1e-12));
    CHECK(row.entropy == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("summary handles degenerate archives") {
    std::vector<Evaluation> one{rec("s", 1, 0x10, 2.0)};
    SummaryRow row = summary_stats(one);
    CHECK(row.hamming == 0.0); // no pairs
    CHECK(row.auc == 1.0);
    CHECK(row.unique_layouts == 1.0);

    std::vector<Evaluation> flat{rec("s", 1, 0, 0.0), rec("s", 1, 1, 0.0)};
    CHECK(summary_stats(flat).auc == 1.0); // max risk zero: curve defined as flat

    CHECK(code_of([] { summary_stats({}); }) == Errc::EmptyArchive);
}

TEST_CASE("the per-bit hamming formula agrees with the quadratic definition") {
    Rng rng(71);
    std::vector<Evaluation> a;
    for (int i = 0; i < 60; ++i)
        a.push_back(rec("s", 1, rng.next_u64() & 0xFF, rng.uniform()));

    double direct = 0.0;
    size_t pairs = 0;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j) {
            direct += a[i].z.hamming(a[j].z) / 8.0;
            ++pairs;
        }
    direct /= static_cast<double>(pairs);
    CHECK(summary_stats(a).hamming == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("solver summaries average the per-seed rows") {
    SolverArchives s;
    s.solver = "s";
    s.seeds = {1, 2};
    s.by_seed.push_back({rec("s", 1, 0, 2.0)});
    s.by_seed.push_back({rec("s", 2, 3, 4.0)});
    SummaryRow row = summarize_solver(s);
    CHECK(row.max_risk == 3.0);
    CHECK(row.unique_layouts == 1.0);

    CHECK(code_of([] { summarize_solver(SolverArchives{}); }) == Errc::EmptyArchive);
}

// ------------------------------------------------------------ exclusivity

TEST_CASE("exclusivity is the asymmetric jaccard remainder") {
    CHECK(exclusivity({1, 2}, {2, 3, 4}) == 0.25); // |{1}| / |{1,2,3,4}|
    CHECK(exclusivity({1, 2}, {1, 2}) == 0.0);
    CHECK(exclusivity({}, {}) == 0.0);
    CHECK(exclusivity({}, {7}) == 0.0);
    CHECK(exclusivity({7, 8}, {}) == 1.0);
}

TEST_CASE("the exclusivity curve matches prefix sets by seed") {
    SolverArchives target;
    target.solver = "t";
    target.seeds = {1};
    target.by_seed.push_back(
        {rec("t", 1, 1, 1.0), rec("t", 1, 2, 4.0), rec("t", 1, 3, 2.0), rec("t", 1, 4, 3.0)});
    SolverArchives other;
    other.solver = "o";
    other.seeds = {1};
    other.by_seed.push_back(
        {rec("o", 1, 3, 5.0), rec("o", 1, 4, 1.0), rec("o", 1, 5, 2.0), rec("o", 1, 6, 8.0)});

    auto curve = exclusivity_curve(target, {target, other}, 2);
    REQUIRE(curve.size() == 2);
    CHECK(curve[0].t == 2);
    CHECK(curve[0].excl == 0.5); // {1,2} vs {3,4}
    CHECK(curve[0].t10_self == 4.0);
    CHECK(curve[0].t10_others == 5.0);
    CHECK(curve[1].t == 4);
    CHECK(curve[1].excl == doctest::Approx(2.0 / 6.0).epsilon(1e-12)); // {1,2} of {1..6}
    CHECK(curve[1].t10_self == 4.0);
    CHECK(curve[1].t10_others == 8.0);

    SUBCASE("a rival on a different seed does not count") {
        other.seeds = {9};
        auto solo = exclusivity_curve(target, {other}, 2);
        CHECK(solo[0].excl == 1.0);
        CHECK(solo[0].t10_others == 0.0);
    }

    SUBCASE("step validation") {
        CHECK(code_of([&] { exclusivity_curve(target, {}, 0); }) == Errc::BadParam);
    }
}

// ---------------------------------------------------------------- overlap

TEST_CASE("cross-temporal overlap partitions both prefix sets") {
    std::vector<Evaluation> a{rec("a", 1, 1, 0), rec("a", 1, 2, 0), rec("a", 1, 3, 0)};
    std::vector<Evaluation> b{rec("b", 1, 2, 0), rec("b", 1, 3, 0), rec("b", 1, 4, 0),
                              rec("b", 1, 5, 0)};

    auto cells = cross_temporal_overlap(a, b, {2}, 2);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].snapshot == 2);
    CHECK(cells[0].t == 2);
    CHECK(cells[0].exclusive_a == 1); // {1}
    CHECK(cells[0].common == 1);      // {2}
    CHECK(cells[0].exclusive_b == 1); // {3}
    CHECK(cells[1].t == 4);
    CHECK(cells[1].common == 1);
    CHECK(cells[1].exclusive_b == 3);

    // conservation at every cell
    for (const OverlapCell& c : cross_temporal_overlap(a, b, {1, 2, 3}, 1)) {
        auto za_size = std::min<int64_t>(c.snapshot, 3);
        CHECK(c.exclusive_a + c.common == za_size);
        CHECK(c.common + c.exclusive_b <= 4);
    }

    std::vector<Evaluation> wide{rec("w", 1, 1, 0, 0, 24)};
    CHECK(code_of([&] { cross_temporal_overlap(a, wide); }) == Errc::SchemaMismatch);
    CHECK(code_of([&] { cross_temporal_overlap(a, b, {1}, 0); }) == Errc::BadParam);
}

// ------------------------------------------------------------------ modes

TEST_CASE("mode pair cells count shared and exclusive modes") {
    std::set<CoreRiskMode> row{mode({"X"}), mode({"Y"})};
    std::set<CoreRiskMode> col{mode({"Y"}), mode({"Z"})};
    ModePairCell cell = mode_pair_cell("r", row, "c", col);
    CHECK(cell.shared == 1);
    CHECK(cell.row_exclusive == 1);
    CHECK(cell.col_exclusive == 1);
}

TEST_CASE("the mode matrix ranks solvers by exclusive discoveries") {
    auto with_mode = [](const std::string& solver, CoreRiskMode m) {
        Evaluation e = rec(solver, 1, 0, 1.0);
        e.core_mode = std::move(m);
        return e;
    };
    SolverArchives a;
    a.solver = "a";
    a.seeds = {1};
    a.by_seed.push_back({with_mode("a", mode({"X"})), with_mode("a", mode({"Y"})),
                         with_mode("a", mode({"Z"}))});
    SolverArchives b;
    b.solver = "b";
    b.seeds = {1};
    b.by_seed.push_back({with_mode("b", mode({"X"}))});
    SolverArchives c;
    c.solver = "c";
    c.seeds = {1};
    c.by_seed.push_back({with_mode("c", mode({"X"})), with_mode("c", mode({"Y"}))});

    ModeMatrix m = core_mode_matrix({a, b, c});
    REQUIRE(m.solvers == std::vector<std::string>{"a", "b", "c"});
    CHECK(m.mode_sets[0].size() == 3);
    CHECK(m.pairs.size() == 6);
    CHECK(m.win_rate[0] == 1.0); // beats both
    CHECK(m.win_rate[1] == 0.0);
    CHECK(m.win_rate[2] == 0.5); // beats b only
}

TEST_CASE("the mode census counts occurrences and discovering solvers") {
    auto with_mode = [](const std::string& solver, uint64_t seed, CoreRiskMode m) {
        Evaluation e = rec(solver, seed, 0, 1.0);
        e.core_mode = std::move(m);
        return e;
    };
    SolverArchives a;
    a.solver = "a";
    a.seeds = {1, 2};
    a.by_seed.push_back({with_mode("a", 1, mode({"X"})), with_mode("a", 1, mode({"X"})),
                         with_mode("a", 1, mode({"Y"}))});
    a.by_seed.push_back({with_mode("a", 2, mode({"X"}))});
    SolverArchives b;
    b.solver = "b";
    b.seeds = {1};
    b.by_seed.push_back({with_mode("b", 1, mode({"X"}))});

    auto census = mode_census({a, b});
    REQUIRE(census.size() == 2);
    CHECK(census[0].mode == mode({"X"})); // most frequent first
    CHECK(census[0].count == 4);
    CHECK(census[0].n_solvers == 2);
    CHECK(census[0].solver_fraction == 1.0);
    CHECK(census[1].count == 1);
    CHECK(census[1].n_solvers == 1);
    CHECK(census[1].solver_fraction == 0.5);
}

TEST_CASE("the signature census sums component hits per solver") {
    auto with_sig = [](const std::string& solver, std::vector<bool> bits) {
        Evaluation e = rec(solver, 1, 0, 1.0);
        e.signature.bits = std::move(bits);
        return e;
    };
    SolverArchives a;
    a.solver = "a";
    a.seeds = {1};
    a.by_seed.push_back({with_sig("a", {true, false, true}), with_sig("a", {true, true, false})});

    auto census = signature_census({a});
    REQUIRE(census.size() == 1);
    CHECK(census[0].solver == "a");
    CHECK(census[0].counts == std::vector<int64_t>{2, 1, 1});
}

// -------------------------------------------------------------------- csv

TEST_CASE("csv emitters write fixed headers and deterministic bytes") {
    fs::path dir = fs::temp_directory_path() / "riskscout-analytics-csv";
    fs::remove_all(dir);

    Rng rng(5);
    std::vector<std::vector<Evaluation>> archives;
    for (const char* solver : {"p", "q"})
        for (uint64_t seed : {1, 2}) {
            std::vector<Evaluation> records;
            for (int i = 0; i < 100; ++i) {
                Evaluation e = rec(solver, seed, rng.next_u64() & 0xFF, rng.uniform());
                e.features["F"] = static_cast<int>(rng.uniform_int(3));
                e.signature.bits = {rng.bernoulli(0.5), rng.bernoulli(0.5)};
                e.core_mode = mode({rng.bernoulli(0.5) ? "X" : "Y"});
                records.push_back(std::move(e));
            }
            archives.push_back(std::move(records));
        }
    auto grouped = group_archives(std::move(archives));

    LandscapeProfile profile = builtin_profile("idp-sim-v1");

    write_summary_csv(dir / "summary.csv", grouped);
    CHECK(first_line(dir / "summary.csv") ==
          "solver,max_risk,mean_risk,std_risk,rare,t10_mu,t10_sd,unique_layouts,auc,hamming,"
          "entropy");

    write_exclusivity_csv(dir / "excl.csv", grouped, 25);
    CHECK(first_line(dir / "excl.csv") == "solver,t,excl,t10_self,t10_others");

    write_overlap_csv(dir / "overlap.csv", grouped, "p", "q");
    CHECK(first_line(dir / "overlap.csv") ==
          "fixed_solver,other_solver,seed,snapshot,t,exclusive_fixed,common,exclusive_other");

    write_modes_matrix_csv(dir / "matrix.csv", grouped);
    CHECK(first_line(dir / "matrix.csv") ==
          "row_solver,col_solver,shared,row_exclusive,col_exclusive,row_win_rate");

    write_modes_census_csv(dir / "census.csv", grouped);
    CHECK(first_line(dir / "census.csv") == "mode,count,n_solvers,solver_fraction");

    write_signature_census_csv(dir / "sig.csv", grouped, profile);
    CHECK(first_line(dir / "sig.csv") ==
          "solver,OCR_DEGRADED,LAYOUT_FRAGMENTED,KV_MISSED,TABLE_TRUNCATED,SUMMARY_MISSING,"
          "TEXT_GARBLED");

    write_report_md(dir / "report.md", grouped, profile);
    CHECK(first_line(dir / "report.md") == "# Risk discovery report");

    // byte determinism of a second pass
    auto slurp = [](const fs::path& p) {
        std::ifstream f(p);
        return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
    };
    std::string once = slurp(dir / "summary.csv");
    write_summary_csv(dir / "summary.csv", grouped);
    CHECK(slurp(dir / "summary.csv") == once);

    fs::remove_all(dir);
}

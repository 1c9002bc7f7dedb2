#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "riskscout/fm.hpp"
#include "riskscout/qaoa.hpp"
#include "riskscout/qubo.hpp"

using namespace riskscout;
using cplx = std::complex<double>;

namespace {

QuboMatrix random_qubo(int n, Rng& rng) {
    QuboMatrix q(n);
    for (int i = 0; i < n; ++i) {
        q.at(i, i) = rng.uniform(-1.0, 1.0);
        for (int j = i + 1; j < n; ++j) q.at(i, j) = rng.uniform(-1.0, 1.0);
    }
    q.offset = rng.uniform(-1.0, 1.0);
    return q;
}

// Reference spin energy, written from the definition rather than the library.
double ref_ising_energy(const IsingModel& m, uint64_t state) {
    auto z = [&](int i) { return ((state >> i) & 1) ? -1.0 : 1.0; };
    double e = 0.0;
    for (int i = 0; i < m.n(); ++i) e += m.h[static_cast<size_t>(i)] * z(i);
    for (const auto& [ij, jv] : m.j) e += jv * z(ij.first) * z(ij.second);
    return e;
}

// Dense brute-force QAOA simulator: explicit butterflies over the full
// 2^m vector, kept deliberately naive so it cannot share bugs with the
// stride-based implementation.
Amplitudes ref_statevector(const IsingModel& m, const QaoaCircuitSpec& spec) {
    const int mq = m.n();
    const size_t dim = size_t{1} << mq;
    Amplitudes amp(dim, cplx(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    const int p = spec.depth;
    for (int layer = 0; layer < p; ++layer) {
        double gamma = spec.angles[static_cast<size_t>(layer)];
        double beta = spec.angles[static_cast<size_t>(p + layer)];
        for (size_t s = 0; s < dim; ++s) {
            double e = ref_ising_energy(m, s);
            amp[s] *= std::exp(cplx(0.0, -gamma * e));
        }
        cplx c(std::cos(beta), 0.0), is(0.0, std::sin(beta));
        for (int q = 0; q < mq; ++q) {
            uint64_t mask = uint64_t{1} << q;
            for (size_t s = 0; s < dim; ++s) {
                if (s & mask) continue;
                cplx a = amp[s], b = amp[s | mask];
                amp[s] = c * a - is * b;
                amp[s | mask] = c * b - is * a;
            }
        }
        if (spec.mixer == MixerKind::Correlated) {
            for (auto [q1, q2] : spec.correlated_pairs) {
                uint64_t mask = (uint64_t{1} << q1) | (uint64_t{1} << q2);
                for (size_t s = 0; s < dim; ++s) {
                    uint64_t t = s ^ mask;
                    if (s >= t) continue;
                    cplx a = amp[s], b = amp[t];
                    amp[s] = c * a - is * b;
                    amp[t] = c * b - is * a;
                }
            }
        }
    }
    return amp;
}

} // namespace

// ------------------------------------------------------------------ QUBO

TEST_CASE("qubo energy expands the upper-triangular form") {
    QuboMatrix q(2);
    q.at(0, 0) = 1.0;
    q.at(1, 1) = 2.0;
    q.at(0, 1) = -3.0;
    q.offset = 0.5;
    CHECK(q.energy(uint64_t{0b00}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(q.energy(uint64_t{0b01}) == doctest::Approx(1.0).epsilon(1e-15)); // x0 = 1
    CHECK(q.energy(uint64_t{0b10}) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(q.energy(uint64_t{0b11}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(q.energy(BitVector::from_string("11")) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(q.at(1, 0) == doctest::Approx(-3.0)); // mirrored access
}

TEST_CASE("fm_to_qubo negates the surrogate exactly") {
    FmModel fm;
    fm.w0 = 0.5;
    fm.w = {0.1, -0.2, 0.3};
    fm.v = {{1.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}};
    QuboMatrix q = fm_to_qubo(fm);
    REQUIRE(q.n() == 3);
    CHECK(q.offset == doctest::Approx(-0.5).epsilon(1e-15));
    for (uint64_t x = 0; x < 8; ++x) {
        BitVector z(x, 3);
        CHECK(q.energy(x) + q.offset == doctest::Approx(-fm.predict(z)).epsilon(1e-12));
    }
}

TEST_CASE("ising energy follows the spin convention") {
    IsingModel m;
    m.h = {0.5};
    CHECK(m.energy(0) == doctest::Approx(0.5).epsilon(1e-15));  // bit 0 -> z=+1
    CHECK(m.energy(1) == doctest::Approx(-0.5).epsilon(1e-15)); // bit 1 -> z=-1

    IsingModel pair;
    pair.h = {0.0, 0.0};
    pair.j[{0, 1}] = 1.0;
    CHECK(pair.energy(0b00) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pair.energy(0b01) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(pair.energy(0b10) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(pair.energy(0b11) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("qubo to ising preserves every state energy") {
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        QuboMatrix q = random_qubo(8, rng);
        IsingModel m = qubo_to_ising(q);
        for (uint64_t x = 0; x < 256; ++x) {
            double qe = q.energy(x) + q.offset;
            double ie = ref_ising_energy(m, x) + m.offset;
            CHECK(qe == doctest::Approx(ie).epsilon(1e-12));
            CHECK(m.energy(x) == doctest::Approx(ref_ising_energy(m, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("restrict_qubo folds frozen bits into the subproblem") {
    Rng rng(12);
    QuboMatrix q = random_qubo(8, rng);
    std::vector<int> active{1, 3, 6};
    BitVector frozen = BitVector::random(8, rng);
    QuboMatrix sub = restrict_qubo(q, active, frozen);
    REQUIRE(sub.n() == 3);
    for (uint64_t y = 0; y < 8; ++y) {
        BitVector full = frozen;
        for (size_t j = 0; j < active.size(); ++j)
            full.set(active[j], (y >> j) & 1);
        CHECK(sub.energy(y) + sub.offset ==
              doctest::Approx(q.energy(full) + q.offset).epsilon(1e-12));
    }
}

// ------------------------------------------------------------------ QAOA

TEST_CASE("statevector matches a dense reference simulator") {
    Rng rng(13);
    for (int trial = 0; trial < 4; ++trial) {
        QuboMatrix q = random_qubo(5, rng);
        IsingModel m = qubo_to_ising(q);
        QaoaCircuitSpec spec;
        spec.depth = 2;
        spec.angles = {rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0),
                       rng.uniform(-3.0, 3.0)};
        Amplitudes got = qaoa_statevector(m, spec);
        Amplitudes want = ref_statevector(m, spec);
        REQUIRE(got.size() == want.size());
        for (size_t s = 0; s < got.size(); ++s)
            CHECK(std::abs(got[s] - want[s]) < 1e-10);
    }
}

TEST_CASE("correlated mixer matches the dense reference too") {
    Rng rng(14);
    QuboMatrix q = random_qubo(4, rng);
    IsingModel m = qubo_to_ising(q);
    QaoaCircuitSpec spec;
    spec.depth = 2;
    spec.mixer = MixerKind::Correlated;
    spec.correlated_pairs = {{0, 2}, {1, 3}};
    spec.angles = {0.7, -0.4, 0.3, 1.1};
    Amplitudes got = qaoa_statevector(m, spec);
    Amplitudes want = ref_statevector(m, spec);
    for (size_t s = 0; s < got.size(); ++s) CHECK(std::abs(got[s] - want[s]) < 1e-10);
}

TEST_CASE("the circuit is unitary") {
    Rng rng(15);
    for (int mq = 1; mq <= 6; ++mq) {
        QuboMatrix q = random_qubo(mq, rng);
        IsingModel m = qubo_to_ising(q);
        QaoaCircuitSpec spec;
        spec.depth = 3;
        for (int i = 0; i < 6; ++i) spec.angles.push_back(rng.uniform(-3.0, 3.0));
        Amplitudes amp = qaoa_statevector(m, spec);
        double norm = 0.0;
        for (const auto& a : amp) norm += std::norm(a);
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("zero angles leave the uniform superposition") {
    IsingModel m;
    m.h = {0.3, -0.2, 0.9};
    m.j[{0, 2}] = 0.4;
    QaoaCircuitSpec spec;
    spec.depth = 2;
    spec.angles = {0.0, 0.0, 0.0, 0.0};
    Amplitudes amp = qaoa_statevector(m, spec);
    for (const auto& a : amp) {
        CHECK(a.real() == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-12));
        CHECK(a.imag() == doctest::Approx(0.0).epsilon(1e-12));
    }
    // Mean energy over all spin states is zero for any h/J.
    CHECK(qaoa_expectation(m, spec) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("expectation equals the probability-weighted energy") {
    Rng rng(16);
    QuboMatrix q = random_qubo(5, rng);
    IsingModel m = qubo_to_ising(q);
    QaoaCircuitSpec spec;
    spec.depth = 2;
    spec.angles = {0.5, -0.8, 0.2, 0.9};
    Amplitudes amp = qaoa_statevector(m, spec);
    double want = 0.0;
    for (size_t s = 0; s < amp.size(); ++s) want += std::norm(amp[s]) * ref_ising_energy(m, s);
    CHECK(qaoa_expectation(m, spec) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("circuit inputs are validated") {
    IsingModel m;
    m.h = {1.0};
    QaoaCircuitSpec spec;
    spec.depth = 1;
    spec.angles = {0.1, 0.1};
    CHECK_NOTHROW(qaoa_statevector(m, spec));

    QaoaCircuitSpec bad = spec;
    bad.angles = {0.1};
    CHECK_THROWS_AS(qaoa_statevector(m, bad), Error);

    bad = spec;
    bad.depth = 0;
    CHECK_THROWS_AS(qaoa_statevector(m, bad), Error);

    bad = spec;
    bad.mixer = MixerKind::Correlated; // no pairs given
    CHECK_THROWS_AS(qaoa_statevector(m, bad), Error);

    IsingModel wide;
    wide.h.resize(25, 0.1);
    CHECK_THROWS_AS(qaoa_statevector(wide, spec), Error);

    IsingModel none;
    CHECK_THROWS_AS(qaoa_statevector(none, spec), Error);
}

TEST_CASE("correlated mixer moves probability mass") {
    // Strongly coupled pair: the XX rotation should reshape the output
    // distribution relative to the standard mixer (total variation > 0.01).
    IsingModel m;
    m.h = {0.2, -0.1, 0.3, 0.0};
    m.j[{0, 1}] = 1.5;
    m.j[{2, 3}] = -1.0;
    QaoaCircuitSpec std_spec;
    std_spec.depth = 2;
    std_spec.angles = {0.6, 0.4, 0.5, 0.3};
    QaoaCircuitSpec corr_spec = std_spec;
    corr_spec.mixer = MixerKind::Correlated;
    corr_spec.correlated_pairs = {{0, 1}, {2, 3}};
    Amplitudes a = qaoa_statevector(m, std_spec);
    Amplitudes b = qaoa_statevector(m, corr_spec);
    double tv = 0.0;
    for (size_t s = 0; s < a.size(); ++s) tv += std::abs(std::norm(a[s]) - std::norm(b[s]));
    tv *= 0.5;
    CHECK(tv > 0.01);
}

// ------------------------------------------------------------- optimizer

TEST_CASE("nelder_mead minimizes a smooth bowl") {
    auto f = [](const std::vector<double>& x) {
        return (x[0] - 0.3) * (x[0] - 0.3) + (x[1] + 0.2) * (x[1] + 0.2);
    };
    auto best = nelder_mead(f, {0.0, 0.0}, 0.5, 120, -3.14159, 3.14159);
    REQUIRE(best.size() == 2);
    CHECK(f(best) < 1e-3);
    CHECK(best[0] == doctest::Approx(0.3).epsilon(0.2));
    CHECK(best[1] == doctest::Approx(-0.2).epsilon(0.2));
}

TEST_CASE("nelder_mead respects the box") {
    auto f = [](const std::vector<double>& x) { return (x[0] - 5.0) * (x[0] - 5.0); };
    auto best = nelder_mead(f, {0.0}, 0.5, 80, -1.0, 1.0);
    CHECK(best[0] <= 1.0 + 1e-12);
    CHECK(best[0] >= -1.0 - 1e-12);
    CHECK(best[0] == doctest::Approx(1.0).epsilon(0.05)); // pushed to the wall
}

TEST_CASE("optimize_angles reaches the single-qubit optimum") {
    // For h=[1], p=1: <E> = sin(2 beta) sin(2 gamma), minimum -1.
    IsingModel m;
    m.h = {1.0};
    QaoaCircuitSpec spec;
    spec.depth = 1;
    QaoaCircuitSpec probe = spec;
    probe.angles = {0.5, 0.7};
    CHECK(qaoa_expectation(m, probe) ==
          doctest::Approx(std::sin(1.4) * std::sin(1.0)).epsilon(1e-12));

    auto angles = optimize_angles(m, spec, 60);
    REQUIRE(angles.size() == 2);
    CHECK(spec.angles == angles);
    CHECK(qaoa_expectation(m, spec) < -0.9);
}

TEST_CASE("optimize_angles never returns something worse than the start") {
    Rng rng(17);
    QuboMatrix q = random_qubo(4, rng);
    IsingModel m = qubo_to_ising(q);
    QaoaCircuitSpec spec;
    spec.depth = 2;
    spec.angles = {0.1, 0.1, 0.1, 0.1};
    double before = qaoa_expectation(m, spec);
    optimize_angles(m, spec, 60);
    CHECK(qaoa_expectation(m, spec) <= before + 1e-12);
    for (double a : spec.angles) {
        CHECK(a <= 3.14159266);
        CHECK(a >= -3.14159266);
    }
}

// -------------------------------------------------------------- sampling

TEST_CASE("sampling is deterministic and follows the amplitudes") {
    Amplitudes amp(4, cplx(0.5, 0.0)); // uniform over 2 qubits
    Rng a(18), b(18);
    auto s1 = sample_states(amp, 4000, a);
    auto s2 = sample_states(amp, 4000, b);
    CHECK(s1 == s2);
    std::map<uint64_t, int> counts;
    for (uint64_t s : s1) counts[s]++;
    for (uint64_t s = 0; s < 4; ++s) {
        CHECK(counts[s] > 800); // expected 1000, sd ~27
        CHECK(counts[s] < 1200);
    }

    Amplitudes point(4, cplx(0.0, 0.0));
    point[2] = cplx(0.0, 1.0); // phase must not matter
    Rng c(19);
    for (uint64_t s : sample_states(point, 100, c)) CHECK(s == 2);
}

TEST_CASE("sampling matches skewed probabilities") {
    Amplitudes amp(2);
    amp[0] = cplx(std::sqrt(0.9), 0.0);
    amp[1] = cplx(0.0, std::sqrt(0.1));
    Rng rng(20);
    auto draws = sample_states(amp, 20000, rng);
    int ones = 0;
    for (uint64_t s : draws) ones += (s == 1);
    CHECK(ones / 20000.0 == doctest::Approx(0.1).epsilon(0.1));
}

// -------------------------------------------------- subproblem selection

TEST_CASE("strongest couplings rank by magnitude with stable ties") {
    IsingModel m;
    m.h = {0, 0, 0};
    m.j[{0, 1}] = 0.5;
    m.j[{1, 2}] = -2.0;
    m.j[{0, 2}] = 1.0;
    auto top2 = strongest_coupling_pairs(m, 2);
    REQUIRE(top2.size() == 2);
    CHECK(top2[0] == std::pair<int, int>{1, 2});
    CHECK(top2[1] == std::pair<int, int>{0, 2});
    auto all = strongest_coupling_pairs(m, 10);
    CHECK(all.size() == 3);

    IsingModel ties;
    ties.h = {0, 0, 0};
    ties.j[{0, 2}] = 1.0;
    ties.j[{0, 1}] = 1.0;
    auto first = strongest_coupling_pairs(ties, 1);
    CHECK(first[0] == std::pair<int, int>{0, 1}); // lexicographic tie-break
}

TEST_CASE("select_subproblem keeps the most influential bits, sorted") {
    FmModel fm;
    fm.w = {3.0, 1.0, 2.0, 5.0};
    fm.v = {{0.0}, {0.0}, {0.0}, {0.0}};
    auto top2 = select_subproblem(fm, 2);
    CHECK(top2 == std::vector<int>{0, 3});
    CHECK(select_subproblem(fm, 10) == std::vector<int>{0, 1, 2, 3});

    // Pairwise mass can outweigh the linear term.
    FmModel fm2;
    fm2.w = {0.1, 0.0, 0.1};
    fm2.v = {{2.0}, {2.0}, {0.0}};
    // influence: |0.1|+|4| , |0|+|4| , |0.1| -> bits 0 and 1 win
    CHECK(select_subproblem(fm2, 2) == std::vector<int>{0, 1});
}

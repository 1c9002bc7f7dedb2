#include "riskscout/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace riskscout {

namespace {

constexpr double kPi = 3.141592653589793;

std::vector<double> energy_table(const IsingModel& ising) {
    const int m = ising.n();
    const size_t dim = size_t{1} << m;
    std::vector<double> e(dim, 0.0);
    for (size_t s = 0; s < dim; ++s) e[s] = ising.energy(s);
    return e;
}

void apply_rx(Amplitudes& amps, int qubit, double beta) {
    const double c = std::cos(beta);
    const std::complex<double> ms(0.0, -std::sin(beta));
    const size_t stride = size_t{1} << qubit;
    const size_t dim = amps.size();
    for (size_t base = 0; base < dim; base += 2 * stride) {
        for (size_t off = 0; off < stride; ++off) {
            size_t i0 = base + off;
            size_t i1 = i0 + stride;
            std::complex<double> a = amps[i0], b = amps[i1];
            amps[i0] = c * a + ms * b;
            amps[i1] = c * b + ms * a;
        }
    }
}

void apply_rxx(Amplitudes& amps, int qa, int qb, double beta) {
    const double c = std::cos(beta);
    const std::complex<double> ms(0.0, -std::sin(beta));
    const uint64_t mask = (uint64_t{1} << qa) | (uint64_t{1} << qb);
    const size_t dim = amps.size();
    for (size_t s = 0; s < dim; ++s) {
        size_t t = s ^ mask;
        if (t < s) continue; // touch each pair once
        std::complex<double> a = amps[s], b = amps[t];
        amps[s] = c * a + ms * b;
        amps[t] = c * b + ms * a;
    }
}

} // namespace

Amplitudes qaoa_statevector(const IsingModel& ising, const QaoaCircuitSpec& spec) {
    const int m = ising.n();
    if (m < 1) fail(Errc::BadParam, "statevector needs at least one qubit");
    if (m > 24) fail(Errc::TooManyQubits, std::to_string(m) + " qubits exceed the 24-qubit guard");
    if (spec.depth < 1) fail(Errc::BadParam, "circuit depth must be >= 1");
    if (static_cast<int>(spec.angles.size()) != 2 * spec.depth)
        fail(Errc::BadParam, "expected 2p angles");
    if (spec.mixer == MixerKind::Correlated && spec.correlated_pairs.empty())
        fail(Errc::BadParam, "correlated mixer needs correlated_pairs");

    const size_t dim = size_t{1} << m;
    std::vector<double> energies = energy_table(ising);
    Amplitudes amps(dim, std::complex<double>(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));

    for (int layer = 0; layer < spec.depth; ++layer) {
        const double gamma = spec.angles[static_cast<size_t>(layer)];
        const double beta = spec.angles[static_cast<size_t>(spec.depth + layer)];
        for (size_t s = 0; s < dim; ++s)
            amps[s] *= std::complex<double>(std::cos(gamma * energies[s]),
                                            -std::sin(gamma * energies[s]));
        for (int qb = 0; qb < m; ++qb) apply_rx(amps, qb, beta);
        if (spec.mixer == MixerKind::Correlated)
            for (const auto& [qa, qb] : spec.correlated_pairs) apply_rxx(amps, qa, qb, beta);
    }
    return amps;
}

double qaoa_expectation(const IsingModel& ising, const QaoaCircuitSpec& spec) {
    Amplitudes amps = qaoa_statevector(ising, spec);
    std::vector<double> energies = energy_table(ising);
    double e = 0.0;
    for (size_t s = 0; s < amps.size(); ++s) e += std::norm(amps[s]) * energies[s];
    return e;
}

std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                                std::vector<double> x0, double init_step, int max_evals,
                                double lo, double hi) {
    const size_t dim = x0.size();
    int evals = 0;
    auto clamp_point = [&](std::vector<double>& p) {
        for (double& v : p) v = std::clamp(v, lo, hi);
    };
    auto eval = [&](std::vector<double>& p) {
        clamp_point(p);
        ++evals;
        return objective(p);
    };

    std::vector<std::vector<double>> simplex(dim + 1, x0);
    std::vector<double> value(dim + 1);
    for (size_t i = 0; i < dim; ++i) simplex[i + 1][i] += init_step;
    for (size_t i = 0; i <= dim && evals < max_evals; ++i) value[i] = eval(simplex[i]);

    while (evals < max_evals) {
        std::vector<size_t> order(dim + 1);
        std::iota(order.begin(), order.end(), size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t a, size_t b) { return value[a] < value[b]; });
        const size_t best = order[0], worst = order[dim], second_worst = order[dim - 1];

        std::vector<double> centroid(dim, 0.0);
        for (size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (size_t d = 0; d < dim; ++d) centroid[d] += simplex[i][d];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double coef) {
            std::vector<double> p(dim);
            for (size_t d = 0; d < dim; ++d)
                p[d] = centroid[d] + coef * (simplex[worst][d] - centroid[d]);
            return p;
        };

        std::vector<double> reflected = blend(-1.0);
        double fr = eval(reflected);
        if (fr < value[best]) {
            if (evals >= max_evals) {
                simplex[worst] = reflected;
                value[worst] = fr;
                break;
            }
            std::vector<double> expanded = blend(-2.0);
            double fe = eval(expanded);
            if (fe < fr) {
                simplex[worst] = expanded;
                value[worst] = fe;
            } else {
                simplex[worst] = reflected;
                value[worst] = fr;
            }
        } else if (fr < value[second_worst]) {
            simplex[worst] = reflected;
            value[worst] = fr;
        } else {
            if (evals >= max_evals) break;
            std::vector<double> contracted = blend(0.5);
            double fc = eval(contracted);
            if (fc < value[worst]) {
                simplex[worst] = contracted;
                value[worst] = fc;
            } else {
                // shrink toward the best vertex
                for (size_t i = 0; i <= dim && evals < max_evals; ++i) {
                    if (i == best) continue;
                    for (size_t d = 0; d < dim; ++d)
                        simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
                    value[i] = eval(simplex[i]);
                }
            }
        }
    }

    size_t best = 0;
    for (size_t i = 1; i <= dim; ++i)
        if (value[i] < value[best]) best = i;
    return simplex[best];
}

std::vector<double> optimize_angles(const IsingModel& ising, QaoaCircuitSpec& spec,
                                    int budget_evals) {
    std::vector<double> x0 = spec.angles;
    if (static_cast<int>(x0.size()) != 2 * spec.depth)
        x0.assign(static_cast<size_t>(2 * spec.depth), 0.1);

    QaoaCircuitSpec probe = spec;
    auto objective = [&](const std::vector<double>& angles) {
        probe.angles = angles;
        return qaoa_expectation(ising, probe);
    };
    std::vector<double> best = nelder_mead(objective, x0, 0.1, budget_evals, -kPi, kPi);
    spec.angles = best;
    return best;
}

std::vector<uint64_t> sample_states(const Amplitudes& amps, int shots, Rng& rng) {
    std::vector<double> cdf(amps.size());
    double acc = 0.0;
    for (size_t s = 0; s < amps.size(); ++s) {
        acc += std::norm(amps[s]);
        cdf[s] = acc;
    }
    std::vector<uint64_t> out;
    out.reserve(static_cast<size_t>(shots));
    for (int i = 0; i < shots; ++i) {
        double u = rng.uniform() * acc;
        auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        out.push_back(static_cast<uint64_t>(it - cdf.begin()));
    }
    return out;
}

std::vector<std::pair<int, int>> strongest_coupling_pairs(const IsingModel& ising, int count) {
    std::vector<std::pair<std::pair<int, int>, double>> entries(ising.j.begin(), ising.j.end());
    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        double ma = std::abs(a.second), mb = std::abs(b.second);
        if (ma != mb) return ma > mb;
        return a.first < b.first;
    });
    std::vector<std::pair<int, int>> out;
    for (const auto& [pair, val] : entries) {
        if (static_cast<int>(out.size()) >= count) break;
        out.push_back(pair);
    }
    return out;
}

std::vector<int> select_subproblem(const FmModel& fm, int m) {
    if (m < 1) fail(Errc::BadParam, "subproblem size must be >= 1");
    const int n = fm.n();
    m = std::min(m, n);
    std::vector<double> influence(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) influence[static_cast<size_t>(i)] = std::abs(fm.w[static_cast<size_t>(i)]);
    for (int i = 0; i < n; ++i)
        for (int jj = i + 1; jj < n; ++jj) {
            double pw = std::abs(fm.pair_weight(i, jj));
            influence[static_cast<size_t>(i)] += pw;
            influence[static_cast<size_t>(jj)] += pw;
        }
    std::vector<int> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return influence[static_cast<size_t>(a)] > influence[static_cast<size_t>(b)];
    });
    idx.resize(static_cast<size_t>(m));
    std::sort(idx.begin(), idx.end());
    return idx;
}

} // namespace riskscout

#include "riskscout/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

namespace riskscout {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) fail(Errc::IoError, "cannot write " + path.string());
    return f;
}

void check_same_width(const std::vector<Evaluation>& a, const std::vector<Evaluation>& b) {
    if (!a.empty() && !b.empty() && a.front().z.size() != b.front().z.size())
        fail(Errc::SchemaMismatch, "archives use different bit widths");
}

std::set<uint64_t> prefix_words(const std::vector<Evaluation>& records, int64_t t) {
    std::set<uint64_t> out;
    int64_t n = std::min<int64_t>(t, static_cast<int64_t>(records.size()));
    for (int64_t i = 0; i < n; ++i) out.insert(records[static_cast<size_t>(i)].z.word());
    return out;
}

double top_decile_mean(std::vector<double> risks) {
    if (risks.empty()) return 0.0;
    size_t k = (risks.size() + 9) / 10; // ceil(n/10)
    std::partial_sort(risks.begin(), risks.begin() + static_cast<ptrdiff_t>(k), risks.end(),
                      std::greater<>());
    return std::accumulate(risks.begin(), risks.begin() + static_cast<ptrdiff_t>(k), 0.0) /
           static_cast<double>(k);
}

} // namespace

std::vector<SolverArchives> group_archives(std::vector<std::vector<Evaluation>> archives) {
    std::vector<SolverArchives> out;
    for (auto& records : archives) {
        if (records.empty()) fail(Errc::EmptyArchive, "cannot group an empty archive");
        const std::string& solver = records.front().solver;
        uint64_t seed = records.front().seed;
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const SolverArchives& s) { return s.solver == solver; });
        if (it == out.end()) {
            out.push_back({solver, {}, {}});
            it = out.end() - 1;
        }
        it->seeds.push_back(seed);
        it->by_seed.push_back(std::move(records));
    }
    for (SolverArchives& s : out) {
        std::vector<size_t> order(s.seeds.size());
        std::iota(order.begin(), order.end(), size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return s.seeds[a] < s.seeds[b]; });
        std::vector<uint64_t> seeds;
        std::vector<std::vector<Evaluation>> by_seed;
        for (size_t i : order) {
            seeds.push_back(s.seeds[i]);
            by_seed.push_back(std::move(s.by_seed[i]));
        }
        s.seeds = std::move(seeds);
        s.by_seed = std::move(by_seed);
    }
    return out;
}

SummaryRow summary_stats(const std::vector<Evaluation>& archive) {
    if (archive.empty()) fail(Errc::EmptyArchive, "summary of an empty archive");
    const size_t b = archive.size();
    SummaryRow row;

    std::vector<double> risks(b);
    double sum = 0.0, rare_sum = 0.0;
    for (size_t i = 0; i < b; ++i) {
        risks[i] = archive[i].risk;
        sum += risks[i];
        rare_sum += archive[i].rarity;
    }
    row.max_risk = *std::max_element(risks.begin(), risks.end());
    row.mean_risk = sum / static_cast<double>(b);
    double ss = 0.0;
    for (double r : risks) ss += (r - row.mean_risk) * (r - row.mean_risk);
    row.std_risk = std::sqrt(ss / static_cast<double>(b));
    row.rare = rare_sum / static_cast<double>(b);

    size_t k = (b + 9) / 10;
    std::vector<double> top(risks);
    std::partial_sort(top.begin(), top.begin() + static_cast<ptrdiff_t>(k), top.end(),
                      std::greater<>());
    double tsum = std::accumulate(top.begin(), top.begin() + static_cast<ptrdiff_t>(k), 0.0);
    row.t10_mu = tsum / static_cast<double>(k);
    double tss = 0.0;
    for (size_t i = 0; i < k; ++i) tss += (top[i] - row.t10_mu) * (top[i] - row.t10_mu);
    row.t10_sd = std::sqrt(tss / static_cast<double>(k));

    std::set<uint64_t> distinct;
    for (const Evaluation& e : archive) distinct.insert(e.z.word());
    row.unique_layouts = static_cast<double>(distinct.size());

    double final_max = row.max_risk;
    if (final_max > 0.0) {
        double runmax = -std::numeric_limits<double>::infinity(), acc = 0.0;
        for (double r : risks) {
            runmax = std::max(runmax, r);
            acc += runmax / final_max;
        }
        row.auc = acc / static_cast<double>(b);
    } else {
        row.auc = 1.0;
    }

    const int width = archive.front().z.size();
    if (b > 1) {
        double diff_pairs = 0.0;
        for (int bit = 0; bit < width; ++bit) {
            double ones = 0.0;
            for (const Evaluation& e : archive) ones += e.z.get(bit) ? 1.0 : 0.0;
            diff_pairs += ones * (static_cast<double>(b) - ones);
        }
        row.hamming = 2.0 * diff_pairs /
                      (static_cast<double>(width) * static_cast<double>(b) *
                       (static_cast<double>(b) - 1.0));
    }

    double entropy_sum = 0.0;
    size_t n_features = archive.front().features.size();
    for (const auto& [name, first_value] : archive.front().features) {
        std::map<int, int64_t> counts;
        for (const Evaluation& e : archive) counts[e.features.at(name)]++;
        double h = 0.0;
        for (const auto& [value, count] : counts) {
            double p = static_cast<double>(count) / static_cast<double>(b);
            h -= p * std::log(p);
        }
        entropy_sum += h;
    }
    if (n_features > 0) row.entropy = entropy_sum / static_cast<double>(n_features);
    return row;
}

SummaryRow summarize_solver(const SolverArchives& solver) {
    if (solver.by_seed.empty()) fail(Errc::EmptyArchive, "solver has no archives");
    SummaryRow acc;
    for (const auto& records : solver.by_seed) {
        SummaryRow r = summary_stats(records);
        acc.max_risk += r.max_risk;
        acc.mean_risk += r.mean_risk;
        acc.std_risk += r.std_risk;
        acc.rare += r.rare;
        acc.t10_mu += r.t10_mu;
        acc.t10_sd += r.t10_sd;
        acc.unique_layouts += r.unique_layouts;
        acc.auc += r.auc;
        acc.hamming += r.hamming;
        acc.entropy += r.entropy;
    }
    double n = static_cast<double>(solver.by_seed.size());
    acc.max_risk /= n;
    acc.mean_risk /= n;
    acc.std_risk /= n;
    acc.rare /= n;
    acc.t10_mu /= n;
    acc.t10_sd /= n;
    acc.unique_layouts /= n;
    acc.auc /= n;
    acc.hamming /= n;
    acc.entropy /= n;
    return acc;
}

double exclusivity(const std::set<uint64_t>& a, const std::set<uint64_t>& others) {
    if (a.empty() && others.empty()) return 0.0;
    int64_t only_a = 0;
    for (uint64_t w : a)
        if (!others.count(w)) ++only_a;
    int64_t union_size = static_cast<int64_t>(others.size()) + only_a;
    return union_size == 0 ? 0.0 : static_cast<double>(only_a) / static_cast<double>(union_size);
}

std::vector<ExclusivityPoint> exclusivity_curve(const SolverArchives& target,
                                                const std::vector<SolverArchives>& others,
                                                int64_t step) {
    if (step < 1) fail(Errc::BadParam, "step must be >= 1");
    if (target.by_seed.empty()) fail(Errc::EmptyArchive, "target has no archives");

    int64_t budget = static_cast<int64_t>(target.by_seed.front().size());
    std::vector<ExclusivityPoint> curve;
    for (int64_t t = step; t <= budget; t += step) curve.push_back({t, 0.0, 0.0, 0.0});

    int used_seeds = 0;
    for (size_t si = 0; si < target.seeds.size(); ++si) {
        uint64_t seed = target.seeds[si];
        const auto& own = target.by_seed[si];
        std::vector<const std::vector<Evaluation>*> rivals;
        for (const SolverArchives& o : others) {
            if (o.solver == target.solver) continue;
            for (size_t oi = 0; oi < o.seeds.size(); ++oi)
                if (o.seeds[oi] == seed) {
                    check_same_width(own, o.by_seed[oi]);
                    rivals.push_back(&o.by_seed[oi]);
                }
        }
        ++used_seeds;
        for (size_t ci = 0; ci < curve.size(); ++ci) {
            int64_t t = curve[ci].t;
            std::set<uint64_t> za = prefix_words(own, t);
            std::set<uint64_t> zo;
            std::vector<double> pooled;
            for (const auto* r : rivals) {
                int64_t n = std::min<int64_t>(t, static_cast<int64_t>(r->size()));
                for (int64_t i = 0; i < n; ++i) {
                    zo.insert((*r)[static_cast<size_t>(i)].z.word());
                    pooled.push_back((*r)[static_cast<size_t>(i)].risk);
                }
            }
            std::vector<double> own_risks;
            int64_t n = std::min<int64_t>(t, static_cast<int64_t>(own.size()));
            for (int64_t i = 0; i < n; ++i) own_risks.push_back(own[static_cast<size_t>(i)].risk);
            curve[ci].excl += exclusivity(za, zo);
            curve[ci].t10_self += top_decile_mean(std::move(own_risks));
            curve[ci].t10_others += top_decile_mean(std::move(pooled));
        }
    }
    if (used_seeds > 0)
        for (ExclusivityPoint& p : curve) {
            p.excl /= used_seeds;
            p.t10_self /= used_seeds;
            p.t10_others /= used_seeds;
        }
    return curve;
}

std::vector<OverlapCell> cross_temporal_overlap(const std::vector<Evaluation>& a,
                                                const std::vector<Evaluation>& b,
                                                const std::vector<int64_t>& snapshots,
                                                int64_t grid_step) {
    if (grid_step < 1) fail(Errc::BadParam, "grid step must be >= 1");
    check_same_width(a, b);
    std::vector<OverlapCell> out;
    for (int64_t s : snapshots) {
        std::set<uint64_t> za = prefix_words(a, s);
        for (int64_t t = grid_step; t <= static_cast<int64_t>(b.size()); t += grid_step) {
            std::set<uint64_t> zb = prefix_words(b, t);
            OverlapCell cell;
            cell.snapshot = s;
            cell.t = t;
            for (uint64_t w : za) {
                if (zb.count(w))
                    ++cell.common;
                else
                    ++cell.exclusive_a;
            }
            cell.exclusive_b = static_cast<int64_t>(zb.size()) - cell.common;
            out.push_back(cell);
        }
    }
    return out;
}

std::set<CoreRiskMode> solver_mode_set(const SolverArchives& solver) {
    std::set<CoreRiskMode> out;
    for (const auto& records : solver.by_seed)
        for (const Evaluation& e : records) out.insert(e.core_mode);
    return out;
}

ModePairCell mode_pair_cell(const std::string& row_name, const std::set<CoreRiskMode>& row_set,
                            const std::string& col_name, const std::set<CoreRiskMode>& col_set) {
    ModePairCell cell;
    cell.row_solver = row_name;
    cell.col_solver = col_name;
    for (const CoreRiskMode& m : row_set) {
        if (col_set.count(m))
            ++cell.shared;
        else
            ++cell.row_exclusive;
    }
    cell.col_exclusive = static_cast<int64_t>(col_set.size()) - cell.shared;
    return cell;
}

ModeMatrix core_mode_matrix(const std::vector<SolverArchives>& grouped) {
    ModeMatrix out;
    for (const SolverArchives& s : grouped) {
        out.solvers.push_back(s.solver);
        out.mode_sets.push_back(solver_mode_set(s));
    }
    const size_t n = out.solvers.size();
    std::vector<int> wins(n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            ModePairCell cell = mode_pair_cell(out.solvers[i], out.mode_sets[i], out.solvers[j],
                                               out.mode_sets[j]);
            if (cell.row_exclusive > cell.col_exclusive) ++wins[i];
            out.pairs.push_back(std::move(cell));
        }
    out.win_rate.resize(n, 0.0);
    if (n > 1)
        for (size_t i = 0; i < n; ++i)
            out.win_rate[i] = static_cast<double>(wins[i]) / static_cast<double>(n - 1);
    return out;
}

std::vector<ModeCensusRow> mode_census(const std::vector<SolverArchives>& grouped) {
    std::map<CoreRiskMode, ModeCensusRow> acc;
    for (const SolverArchives& s : grouped) {
        std::set<CoreRiskMode> seen;
        for (const auto& records : s.by_seed)
            for (const Evaluation& e : records) {
                ModeCensusRow& row = acc[e.core_mode];
                row.mode = e.core_mode;
                ++row.count;
                seen.insert(e.core_mode);
            }
        for (const CoreRiskMode& m : seen) ++acc[m].n_solvers;
    }
    std::vector<ModeCensusRow> out;
    out.reserve(acc.size());
    for (auto& [mode, row] : acc) {
        if (!grouped.empty())
            row.solver_fraction = static_cast<double>(row.n_solvers) /
                                  static_cast<double>(grouped.size());
        out.push_back(std::move(row));
    }
    std::stable_sort(out.begin(), out.end(), [](const ModeCensusRow& a, const ModeCensusRow& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.mode.to_string() < b.mode.to_string();
    });
    return out;
}

std::vector<SignatureCensusRow> signature_census(const std::vector<SolverArchives>& grouped) {
    std::vector<SignatureCensusRow> out;
    for (const SolverArchives& s : grouped) {
        SignatureCensusRow row;
        row.solver = s.solver;
        for (const auto& records : s.by_seed)
            for (const Evaluation& e : records) {
                if (row.counts.size() < e.signature.bits.size())
                    row.counts.resize(e.signature.bits.size(), 0);
                for (size_t k = 0; k < e.signature.bits.size(); ++k)
                    if (e.signature.bits[k]) ++row.counts[k];
            }
        out.push_back(std::move(row));
    }
    return out;
}

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<SolverArchives>& grouped) {
    std::ofstream f = open_out(path);
    f << "solver,max_risk,mean_risk,std_risk,rare,t10_mu,t10_sd,unique_layouts,auc,hamming,"
         "entropy\n";
    for (const SolverArchives& s : grouped) {
        SummaryRow r = summarize_solver(s);
        f << s.solver << ',' << fmt(r.max_risk) << ',' << fmt(r.mean_risk) << ','
          << fmt(r.std_risk) << ',' << fmt(r.rare) << ',' << fmt(r.t10_mu) << ',' << fmt(r.t10_sd)
          << ',' << fmt(r.unique_layouts) << ',' << fmt(r.auc) << ',' << fmt(r.hamming) << ','
          << fmt(r.entropy) << '\n';
    }
}

void write_exclusivity_csv(const std::filesystem::path& path,
                           const std::vector<SolverArchives>& grouped, int64_t step) {
    std::ofstream f = open_out(path);
    f << "solver,t,excl,t10_self,t10_others\n";
    for (const SolverArchives& s : grouped) {
        std::vector<ExclusivityPoint> curve = exclusivity_curve(s, grouped, step);
        for (const ExclusivityPoint& p : curve)
            f << s.solver << ',' << p.t << ',' << fmt(p.excl) << ',' << fmt(p.t10_self) << ','
              << fmt(p.t10_others) << '\n';
    }
}

void write_overlap_csv(const std::filesystem::path& path,
                       const std::vector<SolverArchives>& grouped, const std::string& fix,
                       const std::string& against) {
    std::ofstream f = open_out(path);
    f << "fixed_solver,other_solver,seed,snapshot,t,exclusive_fixed,common,exclusive_other\n";
    for (const SolverArchives& a : grouped) {
        if (!fix.empty() && a.solver != fix) continue;
        for (const SolverArchives& b : grouped) {
            if (b.solver == a.solver) continue;
            if (!against.empty() && b.solver != against) continue;
            for (size_t si = 0; si < a.seeds.size(); ++si) {
                for (size_t bi = 0; bi < b.seeds.size(); ++bi) {
                    if (b.seeds[bi] != a.seeds[si]) continue;
                    for (const OverlapCell& cell :
                         cross_temporal_overlap(a.by_seed[si], b.by_seed[bi]))
                        f << a.solver << ',' << b.solver << ',' << a.seeds[si] << ','
                          << cell.snapshot << ',' << cell.t << ',' << cell.exclusive_a << ','
                          << cell.common << ',' << cell.exclusive_b << '\n';
                }
            }
        }
    }
}

void write_modes_matrix_csv(const std::filesystem::path& path,
                            const std::vector<SolverArchives>& grouped) {
    ModeMatrix m = core_mode_matrix(grouped);
    std::ofstream f = open_out(path);
    f << "row_solver,col_solver,shared,row_exclusive,col_exclusive,row_win_rate\n";
    size_t pair_idx = 0;
    for (size_t i = 0; i < m.solvers.size(); ++i)
        for (size_t j = 0; j < m.solvers.size(); ++j) {
            if (i == j) continue;
            const ModePairCell& cell = m.pairs[pair_idx++];
            f << cell.row_solver << ',' << cell.col_solver << ',' << cell.shared << ','
              << cell.row_exclusive << ',' << cell.col_exclusive << ',' << fmt(m.win_rate[i])
              << '\n';
        }
}

void write_modes_census_csv(const std::filesystem::path& path,
                            const std::vector<SolverArchives>& grouped) {
    std::vector<ModeCensusRow> census = mode_census(grouped);
    std::ofstream f = open_out(path);
    f << "mode,count,n_solvers,solver_fraction\n";
    for (const ModeCensusRow& row : census)
        f << '"' << row.mode.to_string() << "\"," << row.count << ',' << row.n_solvers << ','
          << fmt(row.solver_fraction) << '\n';
}

void write_signature_census_csv(const std::filesystem::path& path,
                                const std::vector<SolverArchives>& grouped,
                                const LandscapeProfile& profile) {
    std::vector<SignatureCensusRow> census = signature_census(grouped);
    std::ofstream f = open_out(path);
    f << "solver";
    for (const Component& c : profile.components) f << ',' << c.name;
    f << '\n';
    for (const SignatureCensusRow& row : census) {
        f << row.solver;
        for (size_t k = 0; k < profile.components.size(); ++k)
            f << ',' << (k < row.counts.size() ? row.counts[k] : 0);
        f << '\n';
    }
}

void write_report_md(const std::filesystem::path& path, const std::vector<SolverArchives>& grouped,
                     const LandscapeProfile& profile) {
    std::ofstream f = open_out(path);
    f << "# Risk discovery report\n\n";
    f << "Profile `" << profile.name << "`, " << grouped.size() << " solvers.\n\n";

    f << "## Summary\n\n";
    f << "| solver | max | mean | std | rare | t10 mu | t10 sd | unique | auc | ham | entropy "
         "|\n";
    f << "|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (const SolverArchives& s : grouped) {
        SummaryRow r = summarize_solver(s);
        f << "| " << s.solver << " | " << fmt(r.max_risk) << " | " << fmt(r.mean_risk) << " | "
          << fmt(r.std_risk) << " | " << fmt(r.rare) << " | " << fmt(r.t10_mu) << " | "
          << fmt(r.t10_sd) << " | " << fmt(r.unique_layouts) << " | " << fmt(r.auc) << " | "
          << fmt(r.hamming) << " | " << fmt(r.entropy) << " |\n";
    }

    ModeMatrix m = core_mode_matrix(grouped);
    f << "\n## Core risk modes\n\n";
    f << "| solver | distinct modes | win rate |\n|---|---|---|\n";
    for (size_t i = 0; i < m.solvers.size(); ++i)
        f << "| " << m.solvers[i] << " | " << m.mode_sets[i].size() << " | " << fmt(m.win_rate[i])
          << " |\n";

    std::vector<ModeCensusRow> census = mode_census(grouped);
    f << "\n## Mode census (top 20)\n\n";
    f << "| mode | count | solvers |\n|---|---|---|\n";
    for (size_t i = 0; i < census.size() && i < 20; ++i)
        f << "| " << census[i].mode.to_string() << " | " << census[i].count << " | "
          << census[i].n_solvers << " |\n";

    std::vector<SignatureCensusRow> sig = signature_census(grouped);
    f << "\n## Signature census\n\n";
    f << "| solver";
    for (const Component& c : profile.components) f << " | " << c.name;
    f << " |\n|---";
    for (size_t k = 0; k < profile.components.size(); ++k) f << "|---";
    f << "|\n";
    for (const SignatureCensusRow& row : sig) {
        f << "| " << row.solver;
        for (size_t k = 0; k < profile.components.size(); ++k)
            f << " | " << (k < row.counts.size() ? row.counts[k] : 0);
        f << " |\n";
    }
}

} // namespace riskscout

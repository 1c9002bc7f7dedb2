#include "riskscout/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>

#include "riskscout/analytics.hpp"
#include "riskscout/predictor.hpp"

namespace riskscout {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(Errc::IoError, "cannot read " + path);
    return json::parse(f);
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const std::string& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            fail(Errc::BadConfig, "expected key=value, got '" + kv + "'");
        try {
            out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            fail(Errc::BadConfig, "non-numeric value in '" + kv + "'");
        }
    }
    return out;
}

std::vector<std::filesystem::path> jsonl_files(const std::string& dir) {
    if (!std::filesystem::is_directory(dir)) fail(Errc::IoError, dir + " is not a directory");
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
            out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    if (out.empty()) fail(Errc::IoError, "no .jsonl archives under " + dir);
    return out;
}

std::vector<SolverArchives> load_grouped(const std::string& dir) {
    std::vector<std::vector<Evaluation>> archives;
    for (const auto& path : jsonl_files(dir)) archives.push_back(load_archive(path));
    int width = -1;
    for (const auto& a : archives)
        for (const Evaluation& e : a) {
            if (width < 0) width = e.z.size();
            if (e.z.size() != width)
                fail(Errc::SchemaMismatch, "archives mix different schemas");
        }
    return group_archives(std::move(archives));
}

int run_phase(const std::function<void()>& body) {
    try {
        body();
        return kExitOk;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitRuntime;
    }
}

// Setup failures (bad names, bad files, invalid parameters) exit 2; failures
// after a validated start exit 3.
template <typename Setup, typename Body>
int two_phase(Setup&& setup, Body&& body) {
    try {
        auto state = setup();
        return run_phase([&] { body(state); });
    } catch (const std::exception& ex) {
        std::cerr << "config error: " << ex.what() << '\n';
        return kExitConfig;
    }
}

} // namespace

FeatureSchema resolve_schema(const std::string& name_or_path) {
    if (is_builtin_schema(name_or_path)) return builtin_schema(name_or_path);
    if (std::filesystem::exists(name_or_path))
        return schema_from_json(load_json_file(name_or_path));
    fail(Errc::BadConfig, "'" + name_or_path + "' is neither a builtin schema nor a file");
}

LandscapeProfile resolve_profile(const std::string& name_or_path) {
    LandscapeProfile p;
    if (is_builtin_profile(name_or_path)) {
        p = builtin_profile(name_or_path);
    } else if (std::filesystem::exists(name_or_path)) {
        p = profile_from_json(load_json_file(name_or_path));
    } else {
        fail(Errc::BadConfig, "'" + name_or_path + "' is neither a builtin profile nor a file");
    }
    validate_profile(p);
    return p;
}

OracleContext make_context(const std::string& schema, const std::string& profile,
                           const std::string& stats_path) {
    OracleContext ctx{resolve_schema(schema), resolve_profile(profile), {}};
    ctx.stats = stats_path.empty() ? default_reference_stats(ctx.schema)
                                   : stats_from_json(load_json_file(stats_path));
    return ctx;
}

int thread_cap() {
    const char* env = std::getenv("RISKSCOUT_THREADS");
    if (!env || !*env) return std::numeric_limits<int>::max();
    int cap = std::atoi(env);
    return cap >= 1 ? cap : 1;
}

namespace {

struct RunSetup {
    OracleContext ctx;
    SolverSpec spec;
    RunOptions opts;
    std::filesystem::path out;
    std::vector<uint64_t> seeds;
};

RunOptions make_options(int64_t budget, int parallelism, bool no_cache) {
    RunOptions opts;
    opts.budget = budget;
    opts.parallelism = std::clamp(parallelism, 1, thread_cap());
    opts.cache_enabled = !no_cache;
    return opts;
}

} // namespace

int cmd_run(const RunArgs& args) {
    return two_phase(
        [&] {
            RunSetup s{make_context(args.schema, args.profile, args.stats),
                       SolverSpec{}, make_options(args.budget, args.parallelism, args.no_cache),
                       args.out, args.seeds};
            s.spec.kind = solver_kind_from_name(args.solver);
            s.spec.params = parse_params(args.params);
            s.spec.batch_size = args.batch;
            s.spec.n_init = args.n_init;
            if (s.seeds.empty()) fail(Errc::BadConfig, "at least one seed required");
            // validate eagerly so bad configs exit 2 before any file exists
            make_solver(s.spec, s.ctx.schema, 0);
            if (s.opts.budget < s.spec.n_init) fail(Errc::BadConfig, "budget below n_init");
            if (s.opts.budget % s.spec.batch_size != 0)
                fail(Errc::BadConfig, "budget must be a multiple of batch_size");
            return s;
        },
        [&](RunSetup& s) {
            for (uint64_t seed : s.seeds) {
                RunArchive archive = run_one(s.spec, s.ctx, seed, s.opts);
                auto [manifest, jsonl] = write_run(archive, s.out);
                double best = 0.0;
                for (const Evaluation& e : archive.records) best = std::max(best, e.risk);
                std::cout << jsonl.string() << ": " << archive.records.size()
                          << " records, max risk " << best << '\n';
            }
        });
}

int cmd_suite(const SuiteArgs& args) {
    struct Setup {
        OracleContext ctx;
        std::vector<SolverSpec> specs;
        RunOptions opts;
        std::filesystem::path out;
        std::vector<uint64_t> seeds;
        ordered_json manifest;
    };
    return two_phase(
        [&] {
            Setup s{make_context(args.schema, args.profile, args.stats),
                    {},
                    make_options(args.budget, args.parallelism, args.no_cache),
                    args.out,
                    args.seeds,
                    {}};
            if (s.seeds.empty()) fail(Errc::BadConfig, "at least one seed required");
            std::vector<std::string> names;
            if (args.solvers == "all") {
                names = all_solver_names();
            } else {
                std::stringstream ss(args.solvers);
                std::string item;
                while (std::getline(ss, item, ','))
                    if (!item.empty()) names.push_back(item);
            }
            if (names.empty()) fail(Errc::BadConfig, "empty solver list");
            auto overrides = parse_params(args.params);
            for (const std::string& name : names) {
                SolverSpec spec;
                spec.kind = solver_kind_from_name(name);
                spec.batch_size = args.batch;
                spec.n_init = args.n_init;
                auto defaults = solver_defaults(spec.kind);
                for (const auto& [key, value] : overrides)
                    if (defaults.count(key)) spec.params[key] = value;
                make_solver(spec, s.ctx.schema, 0); // eager validation
                s.specs.push_back(std::move(spec));
            }
            if (s.opts.budget < args.n_init) fail(Errc::BadConfig, "budget below n_init");
            if (s.opts.budget % args.batch != 0)
                fail(Errc::BadConfig, "budget must be a multiple of batch_size");

            ordered_json m;
            m["format"] = "riskscout-suite-1";
            m["schema"] = s.ctx.schema.name();
            m["profile"] = s.ctx.profile.name;
            m["budget"] = s.opts.budget;
            m["batch_size"] = args.batch;
            m["n_init"] = args.n_init;
            m["cache"] = s.opts.cache_enabled;
            m["seeds"] = s.seeds;
            ordered_json solver_list = ordered_json::array();
            for (size_t i = 0; i < s.specs.size(); ++i) {
                ordered_json one;
                one["solver"] = names[i];
                ordered_json params;
                for (const auto& [key, value] : solver_defaults(s.specs[i].kind)) {
                    auto it = s.specs[i].params.find(key);
                    params[key] = it == s.specs[i].params.end() ? value : it->second;
                }
                one["params"] = params;
                solver_list.push_back(one);
            }
            m["solvers"] = solver_list;
            s.manifest = m;
            return s;
        },
        [&](Setup& s) {
            std::filesystem::create_directories(s.out);
            {
                std::ofstream f(s.out / "suite_manifest.json");
                if (!f) fail(Errc::IoError, "cannot write suite manifest");
                f << s.manifest.dump(2) << '\n';
            }
            SuiteResult result = run_suite(s.specs, s.ctx, s.seeds, s.opts);
            std::filesystem::path archive_dir = s.out / "archives";
            std::vector<std::vector<Evaluation>> records;
            for (const RunArchive& a : result.archives) {
                write_run(a, archive_dir);
                records.push_back(a.records);
            }
            auto grouped = group_archives(std::move(records));
            write_summary_csv(s.out / "summary.csv", grouped);
            if (!result.errors.empty()) {
                std::ofstream f(s.out / "suite_errors.txt");
                for (const std::string& e : result.errors) f << e << '\n';
                for (const std::string& e : result.errors) std::cerr << "cell failed: " << e << '\n';
                fail(Errc::BadConfig, std::to_string(result.errors.size()) + " cells failed");
            }
            std::cout << s.out.string() << ": " << result.archives.size() << " archives, "
                      << grouped.size() << " solvers\n";
        });
}

int cmd_analyze(const AnalyzeArgs& args) {
    struct Setup {
        std::vector<SolverArchives> grouped;
        LandscapeProfile profile;
    };
    return two_phase(
        [&] {
            if (args.kind != "exclusivity" && args.kind != "overlap" && args.kind != "modes" &&
                args.kind != "signatures")
                fail(Errc::BadConfig, "unknown analysis kind '" + args.kind + "'");
            if (args.step < 1) fail(Errc::BadConfig, "step must be >= 1");
            return Setup{load_grouped(args.archives), resolve_profile(args.profile)};
        },
        [&](Setup& s) {
            std::filesystem::path out(args.out);
            if (args.kind == "exclusivity") {
                write_exclusivity_csv(out / "exclusivity.csv", s.grouped, args.step);
            } else if (args.kind == "overlap") {
                write_overlap_csv(out / "overlap.csv", s.grouped, args.fix, args.against);
            } else if (args.kind == "modes") {
                write_modes_matrix_csv(out / "modes_matrix.csv", s.grouped);
                write_modes_census_csv(out / "modes_census.csv", s.grouped);
            } else {
                write_signature_census_csv(out / "signature_census.csv", s.grouped, s.profile);
            }
            // report.md accompanies every kind
            write_report_md(out / "report.md", s.grouped, s.profile);
            std::cout << args.out << ": " << args.kind << " tables written\n";
        });
}

int cmd_predict(const PredictArgs& args) {
    struct Setup {
        std::vector<SolverArchives> grouped;
    };
    return two_phase(
        [&] {
            if (args.mode != "all" && args.mode != "per_method" && args.mode != "portfolio_early" &&
                args.mode != "portfolio_random" && args.mode != "full")
                fail(Errc::BadConfig, "unknown prediction mode '" + args.mode + "'");
            if (args.n_trees < 1) fail(Errc::BadConfig, "n_trees must be >= 1");
            return Setup{load_grouped(args.archives)};
        },
        [&](Setup& s) {
            ForestParams fp;
            fp.n_trees = args.n_trees;
            fp.seed = args.seed;

            struct Row {
                std::string category, name;
                Metrics metrics;
                size_t train_n, holdout_n;
                int64_t dropped;
            };
            std::vector<Row> rows;
            auto eval_split = [&](const std::string& category, const std::string& name,
                                  SplitMode mode, const std::string& solver) {
                SplitResult split = build_training_splits(s.grouped, mode, solver, args.seed);
                Forest forest = fit_forest(split.train, fp);
                Metrics m = regression_metrics(forest.predict(split.holdout.x), split.holdout.y);
                rows.push_back({category, name, m, split.train.size(), split.holdout.size(),
                                split.holdout_dropped});
            };

            if (args.mode == "all" || args.mode == "per_method")
                for (const SolverArchives& sa : s.grouped)
                    eval_split("per_method", sa.solver, SplitMode::PerMethod, sa.solver);
            if (args.mode == "all" || args.mode == "portfolio_early")
                eval_split("portfolio", "portfolio_early", SplitMode::PortfolioEarly, "");
            if (args.mode == "all" || args.mode == "portfolio_random")
                eval_split("portfolio", "portfolio_random", SplitMode::PortfolioRandom, "");
            if (args.mode == "all" || args.mode == "full")
                eval_split("full", "full", SplitMode::Full, "");

            std::filesystem::create_directories(args.out);
            std::ofstream f(std::filesystem::path(args.out) / "prediction_report.csv");
            if (!f) fail(Errc::IoError, "cannot write prediction report");
            f << "category,name,r2,mae,rmse,train_n,holdout_n,holdout_dropped\n";
            char buf[160];
            for (const Row& r : rows) {
                std::snprintf(buf, sizeof(buf), "%s,%s,%.6g,%.6g,%.6g,%zu,%zu,%lld\n",
                              r.category.c_str(), r.name.c_str(), r.metrics.r2, r.metrics.mae,
                              r.metrics.rmse, r.train_n, r.holdout_n,
                              static_cast<long long>(r.dropped));
                f << buf;
            }
            std::cout << args.out << ": " << rows.size() << " prediction rows\n";
        });
}

int cmd_enumerate(const EnumerateArgs& args) {
    return two_phase(
        [&] {
            OracleContext ctx = make_context(args.schema, args.profile, args.stats);
            if (ctx.schema.total_bits() > 16)
                fail(Errc::BadConfig, "exhaustive scan is limited to 16-bit schemas");
            return ctx;
        },
        [&](OracleContext& ctx) {
            RunArchive archive = enumerate_archive(ctx);
            auto [manifest, jsonl] = write_run(archive, args.out);
            const Evaluation* best = &archive.records.front();
            for (const Evaluation& e : archive.records)
                if (e.risk > best->risk) best = &e;
            std::cout << jsonl.string() << ": " << archive.records.size() << " configurations\n";
            std::cout << "global max risk " << best->risk << " at bits " << best->z.to_string()
                      << " (" << evaluation_to_json(*best)["features"].dump() << ")\n";
        });
}

int cmd_validate(const ValidateArgs& args) {
    return two_phase([&] { return make_context(args.schema, args.profile, args.stats); },
                     [&](OracleContext& ctx) {
                         SpaceSize size = space_size(ctx.schema);
                         std::cout << "schema " << ctx.schema.name() << ": "
                                   << ctx.schema.total_bits() << " bits, "
                                   << ctx.schema.features().size() << " features, semantic space "
                                   << size.semantic_space << '\n';
                         std::cout << "profile " << ctx.profile.name << ": " << ctx.profile.k()
                                   << " components, lambda " << ctx.profile.lambda
                                   << ", noise sigma " << ctx.profile.noise_sigma << '\n';
                         auto inert = inert_latents(ctx.profile, ctx.schema);
                         if (inert.empty()) {
                             std::cout << "all profile latents are reachable\n";
                         } else {
                             std::cout << "inert latents (always 0 on this schema):";
                             for (const std::string& name : inert) std::cout << ' ' << name;
                             std::cout << '\n';
                         }
                         std::cout << "ok\n";
                     });
}

} // namespace riskscout

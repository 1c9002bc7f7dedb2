#include "riskscout/harness.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <thread>

namespace riskscout {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<Evaluation> evaluate_batch(const std::vector<BitVector>& batch,
                                       const std::vector<uint64_t>& render_seeds, EvalCache* cache,
                                       const OracleContext& ctx, int parallelism) {
    if (batch.empty()) fail(Errc::BadParam, "empty evaluation batch");
    if (batch.size() != render_seeds.size())
        fail(Errc::LengthMismatch, "render seeds must align with the batch");

    // first-occurrence misses; with the cache disabled every slot is a miss
    std::vector<size_t> miss_slots;
    std::map<uint64_t, size_t> first_miss; // word -> index into miss_slots
    for (size_t i = 0; i < batch.size(); ++i) {
        uint64_t w = batch[i].word();
        if (cache) {
            if (cache->find(w)) continue;
            if (first_miss.emplace(w, miss_slots.size()).second) miss_slots.push_back(i);
        } else {
            miss_slots.push_back(i);
        }
    }

    std::vector<Evaluation> miss_results(miss_slots.size());
    auto work = [&](size_t k) {
        size_t slot = miss_slots[k];
        miss_results[k] =
            evaluate(batch[slot], render_seeds[slot], ctx.schema, ctx.profile, ctx.stats);
    };
    int threads = std::min<int>(parallelism, static_cast<int>(miss_slots.size()));
    if (threads <= 1) {
        for (size_t k = 0; k < miss_slots.size(); ++k) work(k);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (size_t k = static_cast<size_t>(t); k < miss_slots.size();
                     k += static_cast<size_t>(threads))
                    work(k);
            });
        for (auto& th : pool) th.join();
    }

    std::vector<Evaluation> out;
    out.reserve(batch.size());
    for (size_t i = 0; i < batch.size(); ++i) {
        uint64_t w = batch[i].word();
        if (cache) {
            if (const Evaluation* hit = cache->find(w)) {
                out.push_back(*hit);
                out.back().cached = true;
            } else {
                const Evaluation& fresh = miss_results[first_miss.at(w)];
                out.push_back(fresh);
                out.back().cached = false;
                cache->insert(w, fresh);
            }
        } else {
            out.push_back(miss_results[i]);
            out.back().cached = false;
        }
    }
    return out;
}

uint64_t run_master_seed(const OracleContext& ctx, const std::string& solver, uint64_t seed) {
    uint64_t base = hash_combine(hash_str(ctx.schema.name()), hash_str(ctx.profile.name));
    return hash3(base, hash_str(solver), seed);
}

namespace {

ordered_json run_manifest(const SolverSpec& spec, const Solver& solver, const OracleContext& ctx,
                          uint64_t seed, const RunOptions& opts) {
    ordered_json m;
    m["format"] = "riskscout-archive-1";
    m["schema"] = ctx.schema.name();
    m["profile"] = ctx.profile.name;
    m["solver"] = solver_name(spec.kind);
    m["seed"] = seed;
    m["budget"] = opts.budget;
    m["batch_size"] = spec.batch_size;
    m["n_init"] = spec.n_init;
    m["cache"] = opts.cache_enabled;
    ordered_json params;
    for (const auto& [key, value] : solver.resolved_params()) params[key] = value;
    m["params"] = params;
    return m;
}

} // namespace

RunArchive run_one(const SolverSpec& spec_in, const OracleContext& ctx, uint64_t seed,
                   const RunOptions& opts) {
    SolverSpec spec = spec_in;
    if (spec.kind == SolverKind::Sa && !spec.params.count("budget"))
        spec.params["budget"] = static_cast<double>(opts.budget);
    if (opts.budget < spec.n_init) fail(Errc::BadConfig, "budget below n_init");
    if (opts.budget % spec.batch_size != 0)
        fail(Errc::BadConfig, "budget must be a multiple of batch_size");

    uint64_t master = run_master_seed(ctx, solver_name(spec.kind), seed);
    auto solver = make_solver(spec, ctx.schema, master);
    uint64_t render_base = derive_stream(master, 0, Stream::Render);

    EvalCache cache;
    EvalCache* cptr = opts.cache_enabled ? &cache : nullptr;

    RunArchive archive;
    archive.manifest = run_manifest(spec, *solver, ctx, seed, opts);
    archive.records.reserve(static_cast<size_t>(opts.budget));

    int64_t t = 0;
    while (t < opts.budget) {
        int gran = solver->granularity();
        std::vector<BitVector> proposals = solver->propose(gran);
        std::vector<uint64_t> rseeds(proposals.size());
        for (size_t i = 0; i < proposals.size(); ++i) {
            int64_t g = t + static_cast<int64_t>(i);
            rseeds[i] = hash3(render_base, static_cast<uint64_t>(g / spec.batch_size),
                              static_cast<uint64_t>(g % spec.batch_size));
        }
        std::vector<Evaluation> evals =
            evaluate_batch(proposals, rseeds, cptr, ctx, opts.parallelism);
        for (size_t i = 0; i < evals.size(); ++i) {
            evals[i].iteration = t + static_cast<int64_t>(i);
            evals[i].solver = solver_name(spec.kind);
            evals[i].seed = seed;
        }
        solver->observe(evals);
        for (Evaluation& e : evals) archive.records.push_back(std::move(e));
        t += gran;
    }
    return archive;
}

SuiteResult run_suite(const std::vector<SolverSpec>& solvers, const OracleContext& ctx,
                      const std::vector<uint64_t>& seeds, const RunOptions& opts) {
    if (solvers.empty()) fail(Errc::BadConfig, "suite needs at least one solver");
    if (seeds.empty()) fail(Errc::BadConfig, "suite needs at least one seed");

    struct Cell {
        size_t solver_idx;
        uint64_t seed;
    };
    std::vector<Cell> cells;
    for (size_t s = 0; s < solvers.size(); ++s)
        for (uint64_t seed : seeds) cells.push_back({s, seed});

    std::vector<RunArchive> results(cells.size());
    std::vector<std::string> cell_errors(cells.size());
    std::vector<char> ok(cells.size(), 0);

    int threads = std::clamp(opts.parallelism, 1, static_cast<int>(cells.size()));
    RunOptions cell_opts = opts;
    if (threads > 1) cell_opts.parallelism = 1; // run-level parallelism wins

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t k = next.fetch_add(1);
            if (k >= cells.size()) return;
            const Cell& cell = cells[k];
            try {
                results[k] = run_one(solvers[cell.solver_idx], ctx, cell.seed, cell_opts);
                ok[k] = 1;
            } catch (const std::exception& ex) {
                cell_errors[k] = std::string(solver_name(solvers[cell.solver_idx].kind)) +
                                 " seed " + std::to_string(cell.seed) + ": " + ex.what();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    SuiteResult out;
    for (size_t k = 0; k < cells.size(); ++k) {
        if (ok[k])
            out.archives.push_back(std::move(results[k]));
        else
            out.errors.push_back(cell_errors[k]);
    }
    return out;
}

RunArchive enumerate_archive(const OracleContext& ctx) {
    const int width = ctx.schema.total_bits();
    if (width > 16) fail(Errc::BadConfig, "exhaustive scan is limited to 16-bit schemas");

    LandscapeProfile noiseless = ctx.profile;
    noiseless.noise_sigma = 0.0;

    RunArchive archive;
    ordered_json m;
    m["format"] = "riskscout-archive-1";
    m["schema"] = ctx.schema.name();
    m["profile"] = ctx.profile.name;
    m["solver"] = "enumerate";
    m["seed"] = 0;
    m["budget"] = int64_t{1} << width;
    m["batch_size"] = int64_t{1} << width;
    m["n_init"] = 0;
    m["cache"] = false;
    m["params"] = ordered_json::object();
    archive.manifest = m;

    const uint64_t total = uint64_t{1} << width;
    archive.records.reserve(total);
    for (uint64_t x = 0; x < total; ++x) {
        Evaluation e = evaluate(BitVector(x, width), 0, ctx.schema, noiseless, ctx.stats);
        e.iteration = static_cast<int64_t>(x);
        e.solver = "enumerate";
        e.seed = 0;
        e.cached = false;
        archive.records.push_back(std::move(e));
    }
    return archive;
}

ordered_json evaluation_to_json(const Evaluation& e) {
    ordered_json j;
    j["iter"] = e.iteration;
    j["solver"] = e.solver;
    j["seed"] = e.seed;
    j["bits"] = e.z.to_string();
    ordered_json feats;
    for (const auto& [name, value] : e.features) feats[name] = value;
    j["features"] = feats;
    j["r"] = e.r;
    j["base_risk"] = e.base_risk;
    j["rarity"] = e.rarity;
    j["risk"] = e.risk;
    j["signature"] = e.signature.to_string();
    j["core_mode"] = e.core_mode.to_string();
    j["render_seed"] = e.render_seed;
    j["cached"] = e.cached;
    return j;
}

Evaluation evaluation_from_json(const json& j) {
    Evaluation e;
    e.iteration = j.at("iter").get<int64_t>();
    e.solver = j.at("solver").get<std::string>();
    e.seed = j.at("seed").get<uint64_t>();
    e.z = BitVector::from_string(j.at("bits").get<std::string>());
    for (const auto& [name, value] : j.at("features").items())
        e.features[name] = value.get<int>();
    e.r = j.at("r").get<std::vector<double>>();
    e.base_risk = j.at("base_risk").get<double>();
    e.rarity = j.at("rarity").get<double>();
    e.risk = j.at("risk").get<double>();
    const std::string sig = j.at("signature").get<std::string>();
    e.signature.bits.reserve(sig.size());
    for (char c : sig) e.signature.bits.push_back(c == '1');
    e.core_mode = CoreRiskMode::parse(j.at("core_mode").get<std::string>());
    e.render_seed = j.at("render_seed").get<uint64_t>();
    e.cached = j.at("cached").get<bool>();
    return e;
}

std::pair<std::filesystem::path, std::filesystem::path> write_run(
    const RunArchive& archive, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::string solver = archive.manifest.at("solver").get<std::string>();
    const std::string seed = std::to_string(archive.manifest.at("seed").get<uint64_t>());
    const std::string stem = solver + "-s" + seed;

    std::filesystem::path manifest_path = dir / (stem + ".manifest.json");
    {
        std::ofstream f(manifest_path);
        if (!f) fail(Errc::IoError, "cannot write " + manifest_path.string());
        f << archive.manifest.dump(2) << '\n';
    }
    std::filesystem::path jsonl_path = dir / (stem + ".jsonl");
    {
        std::ofstream f(jsonl_path);
        if (!f) fail(Errc::IoError, "cannot write " + jsonl_path.string());
        for (const Evaluation& e : archive.records) f << evaluation_to_json(e).dump() << '\n';
    }
    return {manifest_path, jsonl_path};
}

std::vector<Evaluation> load_archive(const std::filesystem::path& jsonl_path) {
    std::ifstream f(jsonl_path);
    if (!f) fail(Errc::IoError, "cannot read " + jsonl_path.string());
    std::vector<Evaluation> out;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        out.push_back(evaluation_from_json(json::parse(line)));
    }
    return out;
}

} // namespace riskscout

// Command line front end. All real work lives in the library; this file only
// maps flags onto the cmd_* argument structs so the behaviour stays testable.

#include <CLI11.hpp>

#include "riskscout/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"riskscout: budgeted black-box search over document-processing failure landscapes"};
    app.require_subcommand(1);

    riskscout::RunArgs run;
    auto* cmd_run = app.add_subcommand("run", "run one solver and write its archive");
    cmd_run->add_option("--schema", run.schema, "builtin schema name or JSON file");
    cmd_run->add_option("--profile", run.profile, "builtin profile name or JSON file");
    cmd_run->add_option("--stats", run.stats, "reference stats JSON (default: uniform)");
    cmd_run->add_option("--solver", run.solver, "solver name");
    cmd_run->add_option("--budget", run.budget, "total oracle evaluations");
    cmd_run->add_option("--seed", run.seeds, "seed(s), comma separated")->delimiter(',');
    cmd_run->add_option("--batch", run.batch, "proposals per iteration");
    cmd_run->add_option("--n-init", run.n_init, "uniform warmup evaluations");
    cmd_run->add_option("--param", run.params, "solver parameter override key=value");
    cmd_run->add_option("--parallelism", run.parallelism, "oracle batch threads");
    cmd_run->add_flag("--no-cache", run.no_cache, "re-render duplicate configs");
    cmd_run->add_option("--out", run.out, "output directory");

    riskscout::SuiteArgs suite;
    auto* cmd_suite = app.add_subcommand("suite", "run many solvers x seeds and summarize");
    cmd_suite->add_option("--schema", suite.schema, "builtin schema name or JSON file");
    cmd_suite->add_option("--profile", suite.profile, "builtin profile name or JSON file");
    cmd_suite->add_option("--stats", suite.stats, "reference stats JSON (default: uniform)");
    cmd_suite->add_option("--solvers", suite.solvers, "'all' or comma-separated solver names");
    cmd_suite->add_option("--budget", suite.budget, "total oracle evaluations per run");
    cmd_suite->add_option("--seeds", suite.seeds, "seeds, comma separated")->delimiter(',');
    cmd_suite->add_option("--batch", suite.batch, "proposals per iteration");
    cmd_suite->add_option("--n-init", suite.n_init, "uniform warmup evaluations");
    cmd_suite->add_option("--param", suite.params,
                          "parameter override key=value, applied where the key exists");
    cmd_suite->add_option("--parallelism", suite.parallelism, "worker pool size across runs");
    cmd_suite->add_flag("--no-cache", suite.no_cache, "re-render duplicate configs");
    cmd_suite->add_option("--out", suite.out, "output directory");

    riskscout::AnalyzeArgs analyze;
    auto* cmd_analyze = app.add_subcommand("analyze", "compute tables from archive directories");
    cmd_analyze->add_option("--kind", analyze.kind, "exclusivity | overlap | modes | signatures");
    cmd_analyze->add_option("--archives", analyze.archives, "directory of *.jsonl archives")
        ->required();
    cmd_analyze->add_option("--profile", analyze.profile, "profile used to produce the archives");
    cmd_analyze->add_option("--fix", analyze.fix, "overlap: solver whose snapshot is fixed");
    cmd_analyze->add_option("--against", analyze.against, "overlap: solver swept over time");
    cmd_analyze->add_option("--step", analyze.step, "exclusivity: budget grid step");
    cmd_analyze->add_option("--out", analyze.out, "output directory");

    riskscout::PredictArgs predict;
    auto* cmd_predict = app.add_subcommand("predict", "fit risk predictors from archives");
    cmd_predict->add_option("--archives", predict.archives, "directory of *.jsonl archives")
        ->required();
    cmd_predict->add_option("--mode", predict.mode,
                            "all | per_method | portfolio_early | portfolio_random | full");
    cmd_predict->add_option("--n-trees", predict.n_trees, "forest size");
    cmd_predict->add_option("--seed", predict.seed, "forest / subsample seed");
    cmd_predict->add_option("--out", predict.out, "output directory");

    riskscout::EnumerateArgs enumerate;
    auto* cmd_enumerate = app.add_subcommand("enumerate", "exhaustively evaluate a small schema");
    cmd_enumerate->add_option("--schema", enumerate.schema, "schema of at most 16 bits");
    cmd_enumerate->add_option("--profile", enumerate.profile, "builtin profile name or JSON file");
    cmd_enumerate->add_option("--stats", enumerate.stats, "reference stats JSON");
    cmd_enumerate->add_option("--out", enumerate.out, "output directory");

    riskscout::ValidateArgs validate;
    auto* cmd_validate = app.add_subcommand("validate", "check a schema/profile pair and report");
    cmd_validate->add_option("--schema", validate.schema, "builtin schema name or JSON file");
    cmd_validate->add_option("--profile", validate.profile, "builtin profile name or JSON file");
    cmd_validate->add_option("--stats", validate.stats, "reference stats JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? riskscout::kExitOk : riskscout::kExitConfig;
    }

    if (cmd_run->parsed()) return riskscout::cmd_run(run);
    if (cmd_suite->parsed()) return riskscout::cmd_suite(suite);
    if (cmd_analyze->parsed()) return riskscout::cmd_analyze(analyze);
    if (cmd_predict->parsed()) return riskscout::cmd_predict(predict);
    if (cmd_enumerate->parsed()) return riskscout::cmd_enumerate(enumerate);
    return riskscout::cmd_validate(validate);
}

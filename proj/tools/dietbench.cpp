// dietbench: benchmark healthy-diet cost and emissions engine.
//
// Subcommands:
//   validate  check inputs, print the country x scenario eligibility matrix
//   diets     compute deterministic diets (scenarios 1-3)
//   simulate  Monte Carlo diets (scenarios 4-5)
//   report    full report bundle from whatever inputs are supplied

#include "hdb/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

struct CliArgs {
    hdb::runner::RunOptions opt;
    std::string nutrients, income, config;

    void finalize() {
        if (!nutrients.empty()) opt.paths.nutrients_file = nutrients;
        if (!income.empty()) opt.paths.income_file = income;
        if (!config.empty()) opt.paths.config_file = config;
    }
};

void add_common_flags(CLI::App *cmd, CliArgs &args, bool needs_out) {
    cmd->add_option("--items", args.opt.paths.items_file, "items.csv path")->required();
    cmd->add_option("--ppp", args.opt.paths.ppp_file, "ppp.csv path")->required();
    cmd->add_option("--fbs", args.opt.paths.fbs_file, "fbs.csv path")->required();
    cmd->add_option("--nutrients", args.nutrients, "nutrients.csv path");
    cmd->add_option("--income", args.income, "income.csv path");
    cmd->add_option("--config", args.config, "config JSON path");
    cmd->add_option("--threads", args.opt.threads, "worker threads")->default_val(1);
    if (needs_out)
        cmd->add_option("--out", args.opt.out_dir, "output directory")->required();
}

int run(int (*fn)(const hdb::runner::RunOptions &, std::ostream &), CliArgs &args) {
    args.finalize();
    try {
        return fn(args.opt, std::cout);
    } catch (const hdb::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return hdb::runner::kExitFatal;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Benchmark healthy-diet cost and emissions engine"};
    app.require_subcommand(1);

    CliArgs validate_args, diets_args, sim_args, report_args;

    CLI::App *validate = app.add_subcommand("validate", "check inputs and eligibility");
    add_common_flags(validate, validate_args, false);

    CLI::App *diets = app.add_subcommand("diets", "deterministic diets (scenarios 1-3)");
    add_common_flags(diets, diets_args, true);
    diets->add_option("--scenario", diets_args.opt.scenarios, "scenarios to run (1-3)")
        ->check(CLI::Range(1, 3));

    CLI::App *simulate = app.add_subcommand("simulate", "Monte Carlo diets (scenarios 4-5)");
    add_common_flags(simulate, sim_args, true);
    simulate->add_option("--scenario", sim_args.opt.scenarios, "scenarios to run (4-5)")
        ->check(CLI::Range(4, 5));
    simulate->add_option("--iterations", sim_args.opt.iterations, "draws per country")
        ->default_val(1000);
    simulate->add_option("--seed", sim_args.opt.seed, "master seed");
    simulate->add_flag("--draws", sim_args.opt.write_draws, "write the draw-level table");

    CLI::App *report = app.add_subcommand("report", "full report bundle");
    add_common_flags(report, report_args, true);
    report->add_option("--iterations", report_args.opt.iterations, "draws per country")
        ->default_val(1000);
    report->add_option("--seed", report_args.opt.seed, "master seed");
    report->add_flag("--draws", report_args.opt.write_draws, "write the draw-level table");

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) return run(hdb::runner::cmd_validate, validate_args);
    if (diets->parsed()) return run(hdb::runner::cmd_diets, diets_args);
    if (simulate->parsed()) return run(hdb::runner::cmd_simulate, sim_args);
    if (report->parsed()) return run(hdb::runner::cmd_report, report_args);
    return hdb::runner::kExitFatal;
}

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "mlcd/experiment.hpp"
#include "mlcd/io.hpp"
#include "mlcd/metrics.hpp"
#include "mlcd/rng.hpp"
#include "mlcd/sampling.hpp"

namespace fs = std::filesystem;
using namespace mlcd;

namespace {

struct CommonArgs {
    std::string config_path;
    long seed_override = -1;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config file")->required();
    cmd->add_option("--seed", args.seed_override, "override the master seed");
    cmd->add_option("--out", args.out_dir, "output directory");
}

ExperimentConfig load(const CommonArgs& args) {
    auto cfg = load_experiment_config(args.config_path);
    if (args.seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed_override);
    fs::create_directories(args.out_dir);
    return cfg;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    return (fs::path(args.out_dir) / name).string();
}

int cmd_sample(const CommonArgs& args) {
    const auto cfg = load(args);
    const auto sys = system_for(cfg);
    const auto points = latin_hypercube(sys.domain, cfg.sample_count, derive_seed(cfg.seed, 1));
    const auto ens = iterate_time1(sys, points, cfg.horizon);
    write_file(out_path(args, "ensemble.csv"), ensemble_to_csv(ens));

    const double tol = cfg.stabilization_tol_fraction * sys.domain.diameter();
    const auto stable = stabilization_index(ens, tol);
    std::size_t escaped = 0;
    for (char flag : ens.escaped) escaped += flag ? 1 : 0;
    std::cout << "sampled " << points.size() << " orbits of " << sys.name << " for "
              << cfg.horizon << " iterates (" << escaped << " escaped)\n";
    if (stable)
        std::cout << "ensemble stabilizes at iterate " << *stable << " (tol " << tol << ")\n";
    else
        std::cout << "ensemble has not stabilized within the horizon (tol " << tol << ")\n";
    return 0;
}

int cmd_cluster(const CommonArgs& args, const std::string& in_file) {
    const auto cfg = load(args);
    const auto sys = system_for(cfg);
    const auto ens = ensemble_from_csv(
        read_file(in_file.empty() ? out_path(args, "ensemble.csv") : in_file), sys.domain);

    ClusterOptions copts = cfg.cluster;
    copts.seed = derive_seed(cfg.seed, 2);
    PersistenceDiagram0 diagram;
    const auto ds = label_by_terminal_cluster(ens, copts, &diagram);
    write_file(out_path(args, "labeled.csv"), dataset_to_csv(ds));
    write_file(out_path(args, "persistence.csv"), diagram_to_csv(diagram));
    std::cout << "labeled " << ds.points.size() << " points into " << ds.num_labels
              << " clusters\n";
    return 0;
}

int cmd_train(const CommonArgs& args, const std::string& in_file) {
    const auto cfg = load(args);
    const auto sys = system_for(cfg);
    auto ds = dataset_from_csv(
        read_file(in_file.empty() ? out_path(args, "labeled.csv") : in_file));

    BalanceOptions bopts = cfg.balance_opts;
    bopts.seed = derive_seed(cfg.seed, 3);
    ds = balance(ds, bopts);

    const auto net0 =
        init_constrained(sys.domain, cfg.rows_per_group, ds.num_labels, derive_seed(cfg.seed, 4));
    TrainConfig tcfg = cfg.train;
    tcfg.seed = derive_seed(cfg.seed, 5);
    const auto result = train(net0, ds, tcfg);

    write_file(out_path(args, "net.json"), net_to_json(result.net));
    write_file(out_path(args, "curves.csv"), curves_to_csv(result.train_losses, result.test_losses));
    std::cout << "trained " << result.train_losses.size() << " epochs, final test loss "
              << result.final_test_loss() << (result.converged ? "" : " (not converged)")
              << (result.spans ? "" : " (directions do not span)") << '\n';
    return 0;
}

int cmd_decompose(const CommonArgs& args, const std::string& in_file, double eps) {
    const auto cfg = load(args);
    const auto sys = system_for(cfg);
    const auto net =
        net_from_json(read_file(in_file.empty() ? out_path(args, "net.json") : in_file));
    const auto arrangement = extract_arrangement(net, sys.domain);
    const auto grid = enumerate_cells(arrangement, sys.domain);
    const auto assignment = classify_cells(net, grid, eps > 0 ? eps : cfg.epsilons.front());
    write_file(out_path(args, "regions.json"), region_to_json(assignment));
    if (sys.dim == 2) write_file(out_path(args, "cells.csv"), region_cells_csv(assignment));
    std::cout << "kept " << grid.cell_count() << " cells (N"
              << ": " << (grid.cell_count() - assignment.count_tag(kUncertain)) << ", U: "
              << assignment.count_tag(kUncertain) << ")\n";
    return 0;
}

int cmd_homology(const CommonArgs& args, const std::string& in_file,
                 const std::string& expected_file) {
    const auto cfg = load(args);
    const auto assignment = region_from_json(
        read_file(in_file.empty() ? out_path(args, "regions.json") : in_file));
    const auto expected =
        expected_file.empty() ? cfg.expected : expected_betti_from_json(read_file(expected_file));
    const auto check = conley_check(assignment, expected);
    const auto report = morse_report(check);
    write_file(out_path(args, "homology.json"), conley_result_to_json(check, report));
    for (const auto& tag : check.per_tag) {
        std::cout << tag.tag << ": ";
        if (tag.empty) {
            std::cout << "empty";
        } else {
            std::cout << '(';
            for (std::size_t k = 0; k < tag.computed.betti.size(); ++k)
                std::cout << (k ? "," : "") << tag.computed.betti[k];
            std::cout << ')';
        }
        std::cout << (tag.matches ? "  ok" : "  MISMATCH") << '\n';
    }
    std::cout << (check.success ? "conley check passed" : "conley check failed: " + check.failure)
              << '\n';
    return check.success ? 0 : 1;
}

int cmd_experiment(const CommonArgs& args) {
    const auto cfg = load(args);
    const auto run = run_experiment(cfg);
    write_file(out_path(args, "records.json"), records_to_json(run.records));
    write_file(out_path(args, "report.json"), report_to_json(run.report));
    write_file(out_path(args, "scatter.csv"),
               scatter_to_csv(run.records, run.report.best_epsilon));

    const auto sys = system_for(cfg);
    if (sys.dim == 2) {
        // plot data from the first realization that succeeds at the best
        // epsilon (first included one when none succeed)
        std::uint64_t pick = 0;
        bool found = false;
        for (const auto& rec : run.records)
            if (rec.included && rec.success_at(run.report.best_epsilon)) {
                pick = rec.seed;
                found = true;
                break;
            }
        if (!found)
            for (const auto& rec : run.records)
                if (rec.included) {
                    pick = rec.seed;
                    found = true;
                    break;
                }
        if (found) {
            RegionAssignment captured;
            run_realization_capture(cfg, pick, run.report.best_epsilon, &captured);
            if (!captured.cells.empty())
                write_file(out_path(args, "cells.csv"), region_cells_csv(captured));
        }
    }

    std::cout << "included " << run.report.included << "/" << run.report.realizations
              << " realizations; best epsilon " << run.report.best_epsilon << " with success rate "
              << run.report.best_success_rate << "; cells " << run.report.cell_mean << " +- "
              << run.report.cell_sdev << "; " << run.report.expressiveness << '\n';
    return 0;
}

int cmd_benchmark(const CommonArgs& args) {
    const auto cfg = load(args);
    const auto result = run_benchmark(cfg);
    write_file(out_path(args, "benchmark.json"), benchmark_to_json(result));
    if (result.min_n)
        std::cout << "minimal resolution n = " << *result.min_n << " ("
                  << result.profile[static_cast<std::size_t>(*result.min_n - 1)].cubes
                  << " cubes)\n";
    else
        std::cout << "no resolution up to n_max recovered the expected homology\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"machine-learned cubical decompositions of multistable ODE dynamics"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string in_file, expected_file;
    double eps = -1.0;

    auto* sample = app.add_subcommand("sample", "integrate a Latin hypercube orbit ensemble");
    add_common(sample, args);
    auto* cluster = app.add_subcommand("cluster", "label initial conditions by terminal cluster");
    add_common(cluster, args);
    cluster->add_option("--in", in_file, "ensemble csv (default <out>/ensemble.csv)");
    auto* train_cmd = app.add_subcommand("train", "fit the constrained network");
    add_common(train_cmd, args);
    train_cmd->add_option("--in", in_file, "labeled csv (default <out>/labeled.csv)");
    auto* decompose = app.add_subcommand("decompose", "extract and classify the cell grid");
    add_common(decompose, args);
    decompose->add_option("--in", in_file, "net json (default <out>/net.json)");
    decompose->add_option("--eps", eps, "classification epsilon (default: first configured)");
    auto* homology = app.add_subcommand("homology", "verify region homology");
    add_common(homology, args);
    homology->add_option("--in", in_file, "regions json (default <out>/regions.json)");
    homology->add_option("--expected", expected_file, "expected Betti json (default built-in)");
    auto* experiment = app.add_subcommand("experiment", "run the multi-realization study");
    add_common(experiment, args);
    auto* benchmark = app.add_subcommand("benchmark", "minimal regular-grid resolution search");
    add_common(benchmark, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sample->parsed()) return cmd_sample(args);
        if (cluster->parsed()) return cmd_cluster(args, in_file);
        if (train_cmd->parsed()) return cmd_train(args, in_file);
        if (decompose->parsed()) return cmd_decompose(args, in_file, eps);
        if (homology->parsed()) return cmd_homology(args, in_file, expected_file);
        if (experiment->parsed()) return cmd_experiment(args);
        if (benchmark->parsed()) return cmd_benchmark(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

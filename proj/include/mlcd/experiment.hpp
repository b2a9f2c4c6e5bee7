#ifndef MLCD_EXPERIMENT_HPP
#define MLCD_EXPERIMENT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlcd/config.hpp"
#include "mlcd/regular_grid.hpp"

namespace mlcd {

struct EpsilonResult {
    double epsilon = 0.0;
    bool success = false;
    std::map<std::string, std::vector<long>> betti;  // per nonempty tag
    std::string failure;
};

struct RealizationRecord {
    std::uint64_t seed = 0;
    bool spans = false;
    bool converged = false;
    bool aborted = false;
    bool included = false;
    std::string exclusion_reason;
    double final_test_loss = -1.0;
    long cell_count = 0;
    std::vector<EpsilonResult> per_epsilon;
    double wall_seconds = 0.0;

    bool success_at(double eps) const;
};

/// Full pipeline for one seed: sample, integrate, cluster, balance, train,
/// decompose, and check homology at every epsilon. Realizations that fail the
/// span or convergence filter carry no homology results; errors anywhere are
/// captured as exclusions.
RealizationRecord run_realization(const ExperimentConfig& cfg, std::uint64_t seed);

/// Same pipeline, also returning the region assignment at the given epsilon
/// (plot/export path; requires the realization to be included).
RealizationRecord run_realization_capture(const ExperimentConfig& cfg, std::uint64_t seed,
                                          double capture_eps, RegionAssignment* captured);

struct ExperimentReport {
    std::string system;
    int realizations = 0;
    int included = 0;
    std::map<double, double> success_rate;  // per epsilon, over included
    double best_epsilon = 0.0;
    double best_success_rate = 0.0;
    int successes_best = 0;
    double cell_mean = 0.0;   // over successes at the best epsilon
    double cell_sdev = 0.0;
    std::string expressiveness;  // trustworthy | inexpressive | insufficient
    std::optional<GridSearchResult> benchmark;
};

struct ExperimentRun {
    std::vector<RealizationRecord> records;
    ExperimentReport report;
};

/// Realization seeds derive from the master seed by a counter scheme, records
/// are aggregated in seed order, and reruns with the same config are
/// bitwise-identical regardless of the worker count.
ExperimentRun run_experiment(const ExperimentConfig& cfg);

/// Loss-threshold separation verdict: trustworthy iff some threshold tau has
/// every included realization below it succeed while at least 10% of them
/// fall below tau. Needs >= 10 included realizations.
std::string expressiveness_heuristic(const std::vector<RealizationRecord>& records,
                                     double epsilon);

/// Report recomputed from records alone (used for aggregation and tested for
/// purity).
ExperimentReport aggregate_records(const ExperimentConfig& cfg,
                                   const std::vector<RealizationRecord>& records);

/// Build the configured benchmark labeler from a reference ensemble run.
VertexLabeler make_benchmark_labeler(const ExperimentConfig& cfg, const SystemSpec& sys);

GridSearchResult run_benchmark(const ExperimentConfig& cfg);

std::string records_to_json(const std::vector<RealizationRecord>& records);
std::vector<RealizationRecord> records_from_json(const std::string& text);
std::string report_to_json(const ExperimentReport& report);
std::string scatter_to_csv(const std::vector<RealizationRecord>& records, double epsilon);
std::string benchmark_to_json(const GridSearchResult& result);

SystemSpec system_for(const ExperimentConfig& cfg);

}  // namespace mlcd

#endif

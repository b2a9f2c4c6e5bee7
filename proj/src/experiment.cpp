#include "mlcd/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mlcd/parallel.hpp"
#include "mlcd/rng.hpp"
#include "mlcd/sampling.hpp"

namespace mlcd {

bool RealizationRecord::success_at(double eps) const {
    for (const auto& r : per_epsilon)
        if (r.epsilon == eps) return r.success;
    return false;
}

SystemSpec system_for(const ExperimentConfig& cfg) {
    if (!cfg.hill_params_file.empty())
        return make_hill_system_from_json(cfg.system, cfg.hill_params_file);
    return make_system(cfg.system);
}

namespace {

RealizationRecord run_one(const ExperimentConfig& cfg, std::uint64_t seed, double capture_eps,
                          RegionAssignment* captured) {
    RealizationRecord rec;
    rec.seed = seed;
    const auto started = std::chrono::steady_clock::now();
    auto stop_clock = [&] {
        rec.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };

    try {
        const SystemSpec sys = system_for(cfg);

        const auto points = latin_hypercube(sys.domain, cfg.sample_count, derive_seed(seed, 1));
        const auto ensemble = iterate_time1(sys, points, cfg.horizon);

        ClusterOptions copts = cfg.cluster;
        copts.seed = derive_seed(seed, 2);
        auto ds = label_by_terminal_cluster(ensemble, copts);

        BalanceOptions bopts = cfg.balance_opts;
        bopts.seed = derive_seed(seed, 3);
        ds = balance(ds, bopts);

        const auto net0 =
            init_constrained(sys.domain, cfg.rows_per_group, ds.num_labels, derive_seed(seed, 4));
        TrainConfig tcfg = cfg.train;
        tcfg.seed = derive_seed(seed, 5);
        const auto trained = train(net0, ds, tcfg);

        rec.spans = trained.spans;
        rec.converged = trained.converged;
        rec.aborted = trained.aborted;
        rec.final_test_loss = trained.final_test_loss();

        if (!trained.spans) {
            rec.exclusion_reason = "directions do not span the space";
            stop_clock();
            return rec;
        }
        if (!trained.converged) {
            rec.exclusion_reason = trained.aborted ? "training aborted on non-finite loss"
                                                   : "training did not converge";
            stop_clock();
            return rec;
        }
        rec.included = true;

        const auto arrangement = extract_arrangement(trained.net, sys.domain);
        const auto grid = enumerate_cells(arrangement, sys.domain);
        rec.cell_count = static_cast<long>(grid.cell_count());

        for (double eps : cfg.epsilons) {
            const auto assignment = classify_cells(trained.net, grid, eps);
            if (captured && eps == capture_eps) *captured = assignment;
            const auto check = conley_check(assignment, cfg.expected);
            EpsilonResult res;
            res.epsilon = eps;
            res.success = check.success;
            res.failure = check.failure;
            for (const auto& tag : check.per_tag)
                if (!tag.empty) res.betti[tag.tag] = tag.computed.betti;
            rec.per_epsilon.push_back(std::move(res));
        }
    } catch (const std::exception& e) {
        rec.included = false;
        rec.per_epsilon.clear();
        rec.exclusion_reason = std::string("error: ") + e.what();
    }
    stop_clock();
    return rec;
}

}  // namespace

RealizationRecord run_realization(const ExperimentConfig& cfg, std::uint64_t seed) {
    return run_one(cfg, seed, -1.0, nullptr);
}

RealizationRecord run_realization_capture(const ExperimentConfig& cfg, std::uint64_t seed,
                                          double capture_eps, RegionAssignment* captured) {
    return run_one(cfg, seed, capture_eps, captured);
}

std::string expressiveness_heuristic(const std::vector<RealizationRecord>& records,
                                     double epsilon) {
    std::vector<std::pair<double, bool>> included;
    for (const auto& rec : records)
        if (rec.included) included.emplace_back(rec.final_test_loss, rec.success_at(epsilon));
    if (included.size() < 10) return "insufficient";

    std::stable_sort(included.begin(), included.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    double first_fail = std::numeric_limits<double>::infinity();
    for (const auto& [loss, success] : included)
        if (!success) {
            first_fail = loss;
            break;
        }
    std::size_t below = 0;
    for (const auto& [loss, success] : included)
        if (loss < first_fail) ++below;
    const auto need = static_cast<std::size_t>(
        std::ceil(0.1 * static_cast<double>(included.size())));
    return below >= std::max<std::size_t>(need, 1) ? "trustworthy" : "inexpressive";
}

ExperimentReport aggregate_records(const ExperimentConfig& cfg,
                                   const std::vector<RealizationRecord>& records) {
    ExperimentReport report;
    report.system = cfg.system;
    report.realizations = static_cast<int>(records.size());
    for (const auto& rec : records) report.included += rec.included ? 1 : 0;

    for (double eps : cfg.epsilons) {
        int wins = 0;
        for (const auto& rec : records)
            if (rec.included && rec.success_at(eps)) ++wins;
        report.success_rate[eps] =
            report.included > 0 ? static_cast<double>(wins) / report.included : 0.0;
    }

    report.best_epsilon = cfg.epsilons.empty() ? 0.0 : cfg.epsilons.front();
    for (double eps : cfg.epsilons)
        if (report.success_rate[eps] > report.success_rate[report.best_epsilon])
            report.best_epsilon = eps;
    report.best_success_rate = cfg.epsilons.empty() ? 0.0 : report.success_rate[report.best_epsilon];

    double sum = 0.0, sq = 0.0;
    int wins = 0;
    for (const auto& rec : records)
        if (rec.included && rec.success_at(report.best_epsilon)) {
            ++wins;
            sum += static_cast<double>(rec.cell_count);
            sq += static_cast<double>(rec.cell_count) * static_cast<double>(rec.cell_count);
        }
    report.successes_best = wins;
    if (wins > 0) {
        report.cell_mean = sum / wins;
        const double var = std::max(0.0, sq / wins - report.cell_mean * report.cell_mean);
        report.cell_sdev = std::sqrt(var);
    }
    report.expressiveness = expressiveness_heuristic(records, report.best_epsilon);
    return report;
}

VertexLabeler make_benchmark_labeler(const ExperimentConfig& cfg, const SystemSpec& sys) {
    // Reference dataset behind both labelers; independent of any realization.
    const auto seed = derive_seed(cfg.seed, 0xBEEC);
    const auto points = latin_hypercube(sys.domain, cfg.benchmark.reference_points, seed);
    const auto ensemble = iterate_time1(sys, points, cfg.horizon);
    ClusterOptions copts = cfg.cluster;
    copts.seed = seed;
    const auto ds = label_by_terminal_cluster(ensemble, copts);

    if (cfg.benchmark.labeler == "knn") return knn_labeler(ds, cfg.benchmark.knn_k);
    if (cfg.benchmark.labeler == "direct")
        return direct_labeler(sys, ds.attractor_samples, cfg.horizon);
    throw std::invalid_argument("benchmark: unknown labeler '" + cfg.benchmark.labeler + "'");
}

GridSearchResult run_benchmark(const ExperimentConfig& cfg) {
    const SystemSpec sys = system_for(cfg);
    const auto labeler = make_benchmark_labeler(cfg, sys);
    const int num_labels = static_cast<int>(cfg.expected.size()) - 1;  // tags minus "U"
    return min_grid_search(sys.domain, labeler, num_labels, cfg.expected, cfg.benchmark.n_max,
                           cfg.benchmark.scan_full);
}

ExperimentRun run_experiment(const ExperimentConfig& cfg) {
    if (cfg.realizations < 1) throw std::invalid_argument("run_experiment: need realizations >= 1");
    ExperimentRun run;
    run.records.resize(static_cast<std::size_t>(cfg.realizations));
    parallel_for(static_cast<std::size_t>(cfg.realizations), [&](std::size_t i) {
        run.records[i] = run_realization(cfg, derive_seed(cfg.seed, 0x1000 + i));
    });
    run.report = aggregate_records(cfg, run.records);
    if (cfg.with_benchmark) run.report.benchmark = run_benchmark(cfg);
    return run;
}

namespace {

nlohmann::json record_to_json(const RealizationRecord& rec) {
    nlohmann::json j;
    j["seed"] = rec.seed;
    j["spans"] = rec.spans;
    j["converged"] = rec.converged;
    j["aborted"] = rec.aborted;
    j["included"] = rec.included;
    if (!rec.exclusion_reason.empty()) j["exclusion_reason"] = rec.exclusion_reason;
    j["final_test_loss"] = rec.final_test_loss;
    j["cell_count"] = rec.cell_count;
    j["wall_seconds"] = rec.wall_seconds;
    j["per_epsilon"] = nlohmann::json::array();
    for (const auto& res : rec.per_epsilon) {
        nlohmann::json e;
        e["epsilon"] = res.epsilon;
        e["success"] = res.success;
        if (!res.failure.empty()) e["failure"] = res.failure;
        for (const auto& [tag, betti] : res.betti) e["betti"][tag] = betti;
        j["per_epsilon"].push_back(e);
    }
    return j;
}

RealizationRecord record_from_json(const nlohmann::json& j) {
    RealizationRecord rec;
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.spans = j.at("spans").get<bool>();
    rec.converged = j.at("converged").get<bool>();
    rec.aborted = j.at("aborted").get<bool>();
    rec.included = j.at("included").get<bool>();
    if (j.contains("exclusion_reason")) rec.exclusion_reason = j.at("exclusion_reason");
    rec.final_test_loss = j.at("final_test_loss").get<double>();
    rec.cell_count = j.at("cell_count").get<long>();
    rec.wall_seconds = j.at("wall_seconds").get<double>();
    for (const auto& e : j.at("per_epsilon")) {
        EpsilonResult res;
        res.epsilon = e.at("epsilon").get<double>();
        res.success = e.at("success").get<bool>();
        if (e.contains("failure")) res.failure = e.at("failure");
        if (e.contains("betti"))
            for (const auto& [tag, betti] : e.at("betti").items())
                res.betti[tag] = betti.get<std::vector<long>>();
        rec.per_epsilon.push_back(std::move(res));
    }
    return rec;
}

}  // namespace

std::string records_to_json(const std::vector<RealizationRecord>& records) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& rec : records) j.push_back(record_to_json(rec));
    return j.dump(2);
}

std::vector<RealizationRecord> records_from_json(const std::string& text) {
    std::vector<RealizationRecord> records;
    for (const auto& j : nlohmann::json::parse(text)) records.push_back(record_from_json(j));
    return records;
}

std::string report_to_json(const ExperimentReport& report) {
    nlohmann::json j;
    j["system"] = report.system;
    j["realizations"] = report.realizations;
    j["included"] = report.included;
    for (const auto& [eps, rate] : report.success_rate)
        j["success_rate"][std::to_string(eps)] = rate;
    j["best_epsilon"] = report.best_epsilon;
    j["best_success_rate"] = report.best_success_rate;
    j["successes_at_best_epsilon"] = report.successes_best;
    j["cell_count_mean"] = report.cell_mean;
    j["cell_count_sdev"] = report.cell_sdev;
    j["expressiveness"] = report.expressiveness;
    if (report.benchmark) {
        nlohmann::json b;
        for (const auto& entry : report.benchmark->profile)
            b["per_n"][std::to_string(entry.n)] = {{"cubes", entry.cubes},
                                                   {"success", entry.success}};
        b["min_n"] = report.benchmark->min_n ? nlohmann::json(*report.benchmark->min_n)
                                             : nlohmann::json(nullptr);
        j["benchmark"] = b;
    }
    return j.dump(2);
}

std::string scatter_to_csv(const std::vector<RealizationRecord>& records, double epsilon) {
    std::ostringstream out;
    out.precision(17);
    out << "final_test_loss,success\n";
    for (const auto& rec : records)
        if (rec.included) out << rec.final_test_loss << ',' << (rec.success_at(epsilon) ? 1 : 0)
                              << '\n';
    return out.str();
}

std::string benchmark_to_json(const GridSearchResult& result) {
    nlohmann::json j;
    for (const auto& entry : result.profile)
        j["per_n"][std::to_string(entry.n)] = {{"cubes", entry.cubes},
                                               {"success", entry.success}};
    j["min_n"] = result.min_n ? nlohmann::json(*result.min_n) : nlohmann::json(nullptr);
    return j.dump(2);
}

}  // namespace mlcd

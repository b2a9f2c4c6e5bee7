#ifndef MLCD_CONFIG_HPP
#define MLCD_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "mlcd/conley.hpp"
#include "mlcd/labeling.hpp"
#include "mlcd/network.hpp"

namespace mlcd {

/// Sectioned key-value file: `[section]` lines open a section, `key = value`
/// lines assign inside it, `#` or `;` start a comment.
class KeyValueFile {
public:
    static KeyValueFile parse(const std::string& text);
    static KeyValueFile load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    std::string get(const std::string& section, const std::string& key,
                    const char* fallback) const;
    double get(const std::string& section, const std::string& key, double fallback) const;
    long get(const std::string& section, const std::string& key, long fallback) const;
    bool get(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

struct BenchmarkConfig {
    std::string labeler = "direct";  // direct | knn
    int knn_k = 1;
    int n_max = 10;
    bool scan_full = false;
    std::size_t reference_points = 2000;  // ensemble behind the labeler
};

/// Everything one experiment needs; defaults are filled per system and any
/// value can be overridden from a config file.
struct ExperimentConfig {
    std::string system;
    std::string hill_params_file;  // optional Hill parameter override

    std::size_t sample_count = 1000;
    int horizon = 10;
    std::uint64_t seed = 20240817;
    double stabilization_tol_fraction = 0.05;  // of the domain diameter

    ClusterOptions cluster;
    BalanceOptions balance_opts;

    int rows_per_group = 1;  // q
    TrainConfig train;

    std::vector<double> epsilons{0.1, 0.2, 0.3, 0.4, 0.49};
    int realizations = 100;
    bool with_benchmark = false;

    BenchmarkConfig benchmark;
    ExpectedBetti expected;
};

/// Hyperparameter defaults for each catalog system.
ExperimentConfig default_config(const std::string& system_name);

/// Defaults for the `system` named in the file, overridden by its entries.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& text);

}  // namespace mlcd

#endif

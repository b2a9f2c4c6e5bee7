#include "mlcd/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mlcd {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text) {
    KeyValueFile file;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(line_no) +
                                         ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key = value");
        file.sections_[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return file;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

bool KeyValueFile::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string KeyValueFile::get(const std::string& section, const std::string& key,
                              const std::string& fallback) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

std::string KeyValueFile::get(const std::string& section, const std::string& key,
                              const char* fallback) const {
    return get(section, key, std::string(fallback));
}

double KeyValueFile::get(const std::string& section, const std::string& key,
                         double fallback) const {
    return has(section, key) ? std::stod(get(section, key, "")) : fallback;
}

long KeyValueFile::get(const std::string& section, const std::string& key, long fallback) const {
    return has(section, key) ? std::stol(get(section, key, "")) : fallback;
}

bool KeyValueFile::get(const std::string& section, const std::string& key, bool fallback) const {
    if (!has(section, key)) return fallback;
    const auto v = get(section, key, "");
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::runtime_error("config: boolean expected for " + section + "." + key);
}

std::vector<double> KeyValueFile::get_list(const std::string& section, const std::string& key,
                                           const std::vector<double>& fallback) const {
    if (!has(section, key)) return fallback;
    std::vector<double> values;
    std::istringstream in(get(section, key, ""));
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) values.push_back(std::stod(item));
    }
    return values;
}

ExperimentConfig default_config(const std::string& system_name) {
    ExperimentConfig cfg;
    cfg.system = system_name;
    cfg.train.learning_rate = 0.01;
    cfg.cluster.subsample = 2000;

    auto set = [&](std::size_t count, int batch, int epochs, int patience, double beta, int q,
                   int num_labels, int horizon, double test_fraction) {
        cfg.sample_count = count;
        cfg.train.batchsize = batch;
        cfg.train.max_epochs = epochs;
        cfg.train.patience = patience;
        cfg.train.convergence_ratio = beta;
        cfg.rows_per_group = q;
        cfg.cluster.fixed_num_labels = num_labels;
        cfg.horizon = horizon;
        cfg.train.test_fraction = test_fraction;
    };

    if (system_name == "linear_separatrix") {
        set(10000, 1000, 100, 10, 0.1, 1, 2, 10, 0.5);
        cfg.benchmark.n_max = 6;
        cfg.benchmark.scan_full = true;
    } else if (system_name == "radial_bistable") {
        set(1000, 100, 1000, 100, 0.1, 2, 2, 14, 0.5);
        cfg.benchmark.n_max = 10;
        cfg.benchmark.scan_full = true;
    } else if (system_name == "radial_tristable") {
        set(1000, 100, 1000, 100, 0.5, 5, 3, 14, 0.5);
        cfg.benchmark.n_max = 26;
    } else if (system_name == "nonlinear_separatrix") {
        set(10000, 1000, 100, 20, 0.1, 1, 2, 10, 0.5);
        cfg.benchmark.n_max = 6;
    } else if (system_name == "hill_periodic_3d") {
        set(11000, 1000, 1000, 100, 0.5, 5, 4, 20, 0.2);
        cfg.benchmark.n_max = 14;
    } else if (system_name == "emt_hill_6d") {
        set(100000, 10000, 2000, 100, 0.1, 2, 2, 15, 0.2);
        cfg.benchmark.n_max = 7;
        cfg.benchmark.reference_points = 4000;
    } else if (system_name == "ellipsoidal_2d") {
        set(10000, 1000, 1000, 100, 0.1, 2, 2, 14, 0.5);
        cfg.benchmark.n_max = 22;
    } else if (system_name == "ellipsoidal_3d") {
        set(20000, 2000, 1000, 100, 0.1, 2, 2, 14, 0.5);
        cfg.benchmark.n_max = 16;
    } else if (system_name == "ellipsoidal_4d") {
        set(800000, 80000, 2000, 100, 0.1, 2, 2, 14, 0.2);
        cfg.balance_opts.strategy = BalanceStrategy::Ratio;
        cfg.balance_opts.ratios = {70.0, 30.0};
        cfg.benchmark.n_max = 14;
    } else if (system_name == "ellipsoidal_5d") {
        set(800000, 80000, 2000, 100, 0.1, 2, 2, 14, 0.2);
        cfg.balance_opts.strategy = BalanceStrategy::Ratio;
        cfg.balance_opts.ratios = {86.0, 14.0};
        cfg.benchmark.n_max = 12;
    } else {
        throw std::invalid_argument("default_config: unknown system '" + system_name + "'");
    }
    cfg.expected = expected_betti_table(system_name);
    return cfg;
}

namespace {

ExperimentConfig apply_overrides(ExperimentConfig cfg, const KeyValueFile& file) {
    cfg.hill_params_file = file.get("", "hill_params", cfg.hill_params_file);
    cfg.seed = static_cast<std::uint64_t>(file.get("", "seed", static_cast<long>(cfg.seed)));

    cfg.sample_count = static_cast<std::size_t>(
        file.get("sampling", "count", static_cast<long>(cfg.sample_count)));
    cfg.horizon = static_cast<int>(file.get("sampling", "horizon", static_cast<long>(cfg.horizon)));
    cfg.stabilization_tol_fraction =
        file.get("sampling", "stabilization_tol_fraction", cfg.stabilization_tol_fraction);

    cfg.cluster.fixed_num_labels = static_cast<int>(
        file.get("clustering", "num_labels", static_cast<long>(cfg.cluster.fixed_num_labels)));
    cfg.cluster.max_clusters = static_cast<int>(
        file.get("clustering", "max_clusters", static_cast<long>(cfg.cluster.max_clusters)));
    cfg.cluster.gap_ratio_min =
        file.get("clustering", "gap_ratio_min", cfg.cluster.gap_ratio_min);
    cfg.cluster.subsample = static_cast<std::size_t>(
        file.get("clustering", "subsample", static_cast<long>(cfg.cluster.subsample)));

    const std::string strategy =
        file.get("balance", "strategy",
                 cfg.balance_opts.strategy == BalanceStrategy::None         ? "none"
                 : cfg.balance_opts.strategy == BalanceStrategy::Oversample ? "oversample"
                                                                            : "ratio");
    if (strategy == "none")
        cfg.balance_opts.strategy = BalanceStrategy::None;
    else if (strategy == "oversample")
        cfg.balance_opts.strategy = BalanceStrategy::Oversample;
    else if (strategy == "ratio")
        cfg.balance_opts.strategy = BalanceStrategy::Ratio;
    else
        throw std::runtime_error("config: unknown balance strategy '" + strategy + "'");
    cfg.balance_opts.ratios = file.get_list("balance", "ratios", cfg.balance_opts.ratios);

    cfg.rows_per_group =
        static_cast<int>(file.get("train", "rows_per_group", static_cast<long>(cfg.rows_per_group)));
    cfg.train.learning_rate = file.get("train", "learning_rate", cfg.train.learning_rate);
    cfg.train.batchsize =
        static_cast<int>(file.get("train", "batchsize", static_cast<long>(cfg.train.batchsize)));
    cfg.train.max_epochs =
        static_cast<int>(file.get("train", "max_epochs", static_cast<long>(cfg.train.max_epochs)));
    cfg.train.patience =
        static_cast<int>(file.get("train", "patience", static_cast<long>(cfg.train.patience)));
    cfg.train.convergence_ratio =
        file.get("train", "convergence_ratio", cfg.train.convergence_ratio);
    cfg.train.test_fraction = file.get("train", "test_fraction", cfg.train.test_fraction);

    cfg.epsilons = file.get_list("decompose", "epsilons", cfg.epsilons);

    cfg.realizations = static_cast<int>(
        file.get("experiment", "realizations", static_cast<long>(cfg.realizations)));
    cfg.with_benchmark = file.get("experiment", "with_benchmark", cfg.with_benchmark);

    cfg.benchmark.labeler = file.get("benchmark", "labeler", cfg.benchmark.labeler);
    cfg.benchmark.knn_k =
        static_cast<int>(file.get("benchmark", "knn_k", static_cast<long>(cfg.benchmark.knn_k)));
    cfg.benchmark.n_max =
        static_cast<int>(file.get("benchmark", "n_max", static_cast<long>(cfg.benchmark.n_max)));
    cfg.benchmark.scan_full = file.get("benchmark", "scan_full", cfg.benchmark.scan_full);
    cfg.benchmark.reference_points = static_cast<std::size_t>(file.get(
        "benchmark", "reference_points", static_cast<long>(cfg.benchmark.reference_points)));
    return cfg;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
    const auto file = KeyValueFile::parse(text);
    const auto system = file.get("", "system", "");
    if (system.empty()) throw std::runtime_error("config: missing top-level 'system' key");
    return apply_overrides(default_config(system), file);
}

ExperimentConfig load_experiment_config(const std::string& path) {
    const auto file = KeyValueFile::load(path);
    const auto system = file.get("", "system", "");
    if (system.empty()) throw std::runtime_error("config: missing top-level 'system' key");
    return apply_overrides(default_config(system), file);
}

}  // namespace mlcd

#include "mlcd/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mlcd {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

std::string ensemble_to_csv(const OrbitEnsemble& ens) {
    const int d = ens.initial.empty() ? 0 : static_cast<int>(ens.initial.front().size());
    std::ostringstream out;
    out.precision(17);
    out << "iter,id";
    for (int i = 1; i <= d; ++i) out << ",x" << i;
    out << '\n';
    for (int iter = 0; iter <= ens.horizon; ++iter)
        for (std::size_t id = 0; id < ens.initial.size(); ++id) {
            out << iter << ',' << id;
            const Vec& x = ens.snapshots[static_cast<std::size_t>(iter)][id];
            for (int i = 0; i < d; ++i) out << ',' << x[i];
            out << '\n';
        }
    return out.str();
}

OrbitEnsemble ensemble_from_csv(const std::string& text, const HyperRectangle& domain) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("ensemble csv: empty file");
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "iter" || header[1] != "id")
        throw std::runtime_error("ensemble csv: expected header iter,id,x1..");
    const int d = static_cast<int>(header.size()) - 2;

    std::vector<std::vector<Vec>> rows;  // rows[iter][id]
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != d + 2)
            throw std::runtime_error("ensemble csv: ragged row");
        const auto iter = static_cast<std::size_t>(std::stol(fields[0]));
        const auto id = static_cast<std::size_t>(std::stol(fields[1]));
        if (rows.size() <= iter) rows.resize(iter + 1);
        if (rows[iter].size() <= id) rows[iter].resize(id + 1);
        Vec x(d);
        for (int i = 0; i < d; ++i) x[i] = std::stod(fields[static_cast<std::size_t>(i) + 2]);
        rows[iter][id] = x;
    }
    if (rows.size() < 2) throw std::runtime_error("ensemble csv: need at least 2 iterates");

    OrbitEnsemble ens;
    ens.horizon = static_cast<int>(rows.size()) - 1;
    ens.snapshots = std::move(rows);
    ens.initial = ens.snapshots.front();
    const HyperRectangle guard = domain.inflated(2.0);
    ens.escaped.assign(ens.initial.size(), 0);
    for (std::size_t id = 0; id < ens.initial.size(); ++id)
        if (!guard.contains(ens.terminal()[id])) ens.escaped[id] = 1;
    return ens;
}

std::string dataset_to_csv(const LabeledDataset& ds) {
    const int d = ds.points.empty() ? 0 : static_cast<int>(ds.points.front().size());
    std::ostringstream out;
    out.precision(17);
    for (int i = 1; i <= d; ++i) out << 'x' << i << ',';
    out << "label\n";
    for (std::size_t row = 0; row < ds.points.size(); ++row) {
        for (int i = 0; i < d; ++i) out << ds.points[row][i] << ',';
        out << ds.labels[row] << '\n';
    }
    return out.str();
}

LabeledDataset dataset_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("dataset csv: empty file");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header.back() != "label")
        throw std::runtime_error("dataset csv: expected header x1..xd,label");
    const int d = static_cast<int>(header.size()) - 1;

    LabeledDataset ds;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != d + 1)
            throw std::runtime_error("dataset csv: ragged row");
        Vec x(d);
        for (int i = 0; i < d; ++i) x[i] = std::stod(fields[static_cast<std::size_t>(i)]);
        ds.points.push_back(std::move(x));
        ds.labels.push_back(std::stoi(fields.back()));
        ds.num_labels = std::max(ds.num_labels, ds.labels.back() + 1);
    }
    ds.attractor_samples.resize(static_cast<std::size_t>(ds.num_labels));
    return ds;
}

std::string diagram_to_csv(const PersistenceDiagram0& diag) {
    std::ostringstream out;
    out.precision(17);
    out << "death\n";
    for (double d : diag.deaths) out << d << '\n';
    return out.str();
}

std::string curves_to_csv(const std::vector<double>& train_losses,
                          const std::vector<double>& test_losses) {
    std::ostringstream out;
    out.precision(17);
    out << "epoch,train_loss,test_loss\n";
    for (std::size_t e = 0; e < train_losses.size(); ++e)
        out << e << ',' << train_losses[e] << ',' << test_losses[e] << '\n';
    return out.str();
}

}  // namespace mlcd

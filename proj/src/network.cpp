#include "mlcd/network.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "mlcd/rng.hpp"

namespace mlcd {

double hardtanh(double a, double b, double x) {
    if (a > b) throw std::invalid_argument("hardtanh: requires a <= b");
    if (x < a) return a;
    if (x > b) return b;
    return x;
}

double preclamp_response(const ConstrainedNet& net, const Vec& x) {
    double s = 0.0;
    for (int i = 0; i < net.d; ++i) {
        const double t = net.directions.row(i).dot(x);
        for (int m = 0; m < net.q; ++m)
            s += net.out_weights[i * net.q + m] * hardtanh(0.0, 1.0, t + net.offsets(i, m));
    }
    return s;
}

double forward(const ConstrainedNet& net, const Vec& x) {
    return hardtanh(0.0, static_cast<double>(net.num_labels - 1), preclamp_response(net, x));
}

Mat materialize_hidden_matrix(const ConstrainedNet& net) {
    Mat a(net.width(), net.d);
    for (int i = 0; i < net.d; ++i)
        for (int m = 0; m < net.q; ++m) a.row(i * net.q + m) = net.directions.row(i);
    return a;
}

ConstrainedNet init_constrained(const HyperRectangle& domain, int q, int num_labels,
                                std::uint64_t seed) {
    if (q < 1) throw std::invalid_argument("init_constrained: q must be >= 1");
    const int d = domain.dim();
    ConstrainedNet net;
    net.d = d;
    net.q = q;
    net.num_labels = num_labels;
    net.directions = Mat::Identity(d, d);
    net.offsets.resize(d, q);
    net.out_weights.resize(net.width());

    Rng rng(derive_seed(seed, 0x17));
    for (int i = 0; i < d; ++i)
        for (int m = 0; m < q; ++m)
            net.offsets(i, m) = rng.uniform(-domain.upper[i], -domain.lower[i]);
    const double bound = 1.0 / std::sqrt(static_cast<double>(net.width()));
    for (int j = 0; j < net.width(); ++j) net.out_weights[j] = rng.uniform(-bound, bound);
    return net;
}

bool check_span(const ConstrainedNet& net) {
    Eigen::JacobiSVD<Mat> svd(net.directions);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] <= 0.0) return false;
    return sv[sv.size() - 1] / sv[0] > 1e-9;
}

bool check_convergence(const std::vector<double>& train_losses, double threshold) {
    if (train_losses.size() < 2)
        throw std::invalid_argument("check_convergence: need at least 2 epochs");
    const double first = train_losses.front();
    const double last = train_losses.back();
    if (first == 0.0) return true;
    return (first - last) / first >= threshold;
}

double batch_loss_and_gradient(const ConstrainedNet& net, const PointList& xs,
                               const std::vector<int>& ys, Mat* grad_directions,
                               Mat* grad_offsets, Vec* grad_weights) {
    const double out_hi = static_cast<double>(net.num_labels - 1);
    const double inv_n = 1.0 / static_cast<double>(xs.size());
    if (grad_directions) grad_directions->setZero(net.d, net.d);
    if (grad_offsets) grad_offsets->setZero(net.d, net.q);
    if (grad_weights) grad_weights->setZero(net.width());

    double loss = 0.0;
    Vec t(net.d);
    Mat hidden(net.d, net.q);
    Mat gate(net.d, net.q);
    for (std::size_t sample = 0; sample < xs.size(); ++sample) {
        const Vec& x = xs[sample];
        double s = 0.0;
        for (int i = 0; i < net.d; ++i) {
            t[i] = net.directions.row(i).dot(x);
            for (int m = 0; m < net.q; ++m) {
                const double z = t[i] + net.offsets(i, m);
                const bool active = z >= 0.0 && z <= 1.0;
                gate(i, m) = active ? 1.0 : 0.0;
                hidden(i, m) = active ? z : (z < 0.0 ? 0.0 : 1.0);
                s += net.out_weights[i * net.q + m] * hidden(i, m);
            }
        }
        const double out = hardtanh(0.0, out_hi, s);
        const double residual = out - static_cast<double>(ys[sample]);
        loss += residual * residual * inv_n;
        if (!grad_directions && !grad_offsets && !grad_weights) continue;

        const double outer_gate = (s >= 0.0 && s <= out_hi) ? 1.0 : 0.0;
        const double coeff = 2.0 * residual * outer_gate * inv_n;
        if (coeff == 0.0) continue;
        for (int i = 0; i < net.d; ++i) {
            double dir_pull = 0.0;
            for (int m = 0; m < net.q; ++m) {
                const double w = net.out_weights[i * net.q + m];
                if (grad_weights) (*grad_weights)[i * net.q + m] += coeff * hidden(i, m);
                const double through = coeff * w * gate(i, m);
                if (grad_offsets) (*grad_offsets)(i, m) += through;
                dir_pull += through;
            }
            if (grad_directions) grad_directions->row(i) += dir_pull * x.transpose();
        }
    }
    return loss;
}

namespace {

struct AdamState {
    explicit AdamState(Eigen::Index n) : m(Vec::Zero(n)), v(Vec::Zero(n)), step(0) {}
    Vec m, v;
    long step;
};

void adam_update(AdamState& state, Vec& params, const Vec& grad, double lr) {
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    state.step += 1;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
    for (Eigen::Index j = 0; j < params.size(); ++j) {
        state.m[j] = beta1 * state.m[j] + (1.0 - beta1) * grad[j];
        state.v[j] = beta2 * state.v[j] + (1.0 - beta2) * grad[j] * grad[j];
        params[j] -= lr * (state.m[j] / bc1) / (std::sqrt(state.v[j] / bc2) + eps);
    }
}

Vec flatten(const ConstrainedNet& net) {
    Vec p(net.d * net.d + net.d * net.q + net.width());
    Eigen::Index k = 0;
    for (int i = 0; i < net.d; ++i)
        for (int j = 0; j < net.d; ++j) p[k++] = net.directions(i, j);
    for (int i = 0; i < net.d; ++i)
        for (int m = 0; m < net.q; ++m) p[k++] = net.offsets(i, m);
    for (int j = 0; j < net.width(); ++j) p[k++] = net.out_weights[j];
    return p;
}

void unflatten(const Vec& p, ConstrainedNet& net) {
    Eigen::Index k = 0;
    for (int i = 0; i < net.d; ++i)
        for (int j = 0; j < net.d; ++j) net.directions(i, j) = p[k++];
    for (int i = 0; i < net.d; ++i)
        for (int m = 0; m < net.q; ++m) net.offsets(i, m) = p[k++];
    for (int j = 0; j < net.width(); ++j) net.out_weights[j] = p[k++];
}

double dataset_loss(const ConstrainedNet& net, const LabeledDataset& ds,
                    const std::vector<std::size_t>& idx) {
    double acc = 0.0;
    for (std::size_t i : idx) {
        const double r = forward(net, ds.points[i]) - static_cast<double>(ds.labels[i]);
        acc += r * r;
    }
    return acc / static_cast<double>(idx.size());
}

}  // namespace

TrainResult train(const ConstrainedNet& net, const LabeledDataset& data, const TrainConfig& cfg) {
    if (data.points.empty()) throw std::invalid_argument("train: empty dataset");
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0))
        throw std::invalid_argument("train: test_fraction must lie in (0, 1)");

    TrainResult result;
    result.net = net;

    Rng rng(derive_seed(cfg.seed, 0x7A));
    auto perm = rng.permutation(data.points.size());
    const auto n_test = static_cast<std::size_t>(
        std::llround(cfg.test_fraction * static_cast<double>(perm.size())));
    std::vector<std::size_t> train_idx(perm.begin(), perm.end() - static_cast<long>(n_test));
    std::vector<std::size_t> test_idx(perm.end() - static_cast<long>(n_test), perm.end());
    if (train_idx.empty() || test_idx.empty())
        throw std::invalid_argument("train: split leaves an empty partition");

    Vec params = flatten(result.net);
    AdamState adam(params.size());
    Mat g_dir(net.d, net.d), g_off(net.d, net.q);
    Vec g_w(net.width());
    Vec grad(params.size());

    PointList batch_x;
    std::vector<int> batch_y;
    const auto batch = static_cast<std::size_t>(cfg.batchsize);

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        rng.shuffle(train_idx);
        double epoch_sq = 0.0;
        for (std::size_t start = 0; start < train_idx.size(); start += batch) {
            const std::size_t stop = std::min(train_idx.size(), start + batch);
            batch_x.clear();
            batch_y.clear();
            for (std::size_t i = start; i < stop; ++i) {
                batch_x.push_back(data.points[train_idx[i]]);
                batch_y.push_back(data.labels[train_idx[i]]);
            }
            const double loss =
                batch_loss_and_gradient(result.net, batch_x, batch_y, &g_dir, &g_off, &g_w);
            if (!std::isfinite(loss)) {
                result.aborted = true;
                break;
            }
            epoch_sq += loss * static_cast<double>(batch_x.size());

            Eigen::Index k = 0;
            for (int i = 0; i < net.d; ++i)
                for (int j = 0; j < net.d; ++j) grad[k++] = g_dir(i, j);
            for (int i = 0; i < net.d; ++i)
                for (int m = 0; m < net.q; ++m) grad[k++] = g_off(i, m);
            for (int j = 0; j < net.width(); ++j) grad[k++] = g_w[j];
            adam_update(adam, params, grad, cfg.learning_rate);
            unflatten(params, result.net);
        }
        if (result.aborted) break;

        result.train_losses.push_back(epoch_sq / static_cast<double>(train_idx.size()));
        result.test_losses.push_back(dataset_loss(result.net, data, test_idx));
        if (!std::isfinite(result.test_losses.back())) {
            result.aborted = true;
            break;
        }

        // Stop once the patience-window mean of the test loss stops falling.
        const auto t = result.test_losses.size();
        const auto window = static_cast<std::size_t>(cfg.patience);
        if (t >= window + 1) {
            double recent = 0.0, previous = 0.0;
            for (std::size_t i = t - window; i < t; ++i) recent += result.test_losses[i];
            for (std::size_t i = t - window - 1; i < t - 1; ++i) previous += result.test_losses[i];
            if (recent >= previous) break;
        }
    }

    result.spans = check_span(result.net);
    result.converged = !result.aborted && result.train_losses.size() >= 2 &&
                       check_convergence(result.train_losses, cfg.convergence_ratio);
    return result;
}

std::string net_to_json(const ConstrainedNet& net) {
    nlohmann::json j;
    j["d"] = net.d;
    j["q"] = net.q;
    j["L"] = net.num_labels;
    for (int i = 0; i < net.d; ++i) {
        std::vector<double> row(net.directions.row(i).begin(), net.directions.row(i).end());
        j["directions"].push_back(row);
    }
    for (int i = 0; i < net.d; ++i) {
        std::vector<double> row(net.offsets.row(i).begin(), net.offsets.row(i).end());
        j["offsets"].push_back(row);
    }
    j["out_weights"] = std::vector<double>(net.out_weights.begin(), net.out_weights.end());
    return j.dump(2);
}

ConstrainedNet net_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ConstrainedNet net;
    net.d = j.at("d").get<int>();
    net.q = j.at("q").get<int>();
    net.num_labels = j.at("L").get<int>();
    net.directions.resize(net.d, net.d);
    net.offsets.resize(net.d, net.q);
    net.out_weights.resize(net.width());
    for (int i = 0; i < net.d; ++i)
        for (int c = 0; c < net.d; ++c)
            net.directions(i, c) = j.at("directions").at(i).at(c).get<double>();
    for (int i = 0; i < net.d; ++i)
        for (int m = 0; m < net.q; ++m)
            net.offsets(i, m) = j.at("offsets").at(i).at(m).get<double>();
    for (int k = 0; k < net.width(); ++k)
        net.out_weights[k] = j.at("out_weights").at(k).get<double>();
    return net;
}

}  // namespace mlcd

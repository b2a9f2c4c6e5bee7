#ifndef MLCD_NETWORK_HPP
#define MLCD_NETWORK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mlcd/geometry.hpp"
#include "mlcd/labeling.hpp"

namespace mlcd {

/// Clamp x to [a, b].
double hardtanh(double a, double b, double x);

/**
 * Single-hidden-layer regression network whose hidden weight matrix is
 * grouped: the p = q*d hidden rows split into d groups of q identical rows,
 * so every kink hyperplane of group i is perpendicular to directions.row(i).
 * Storing the shared row once keeps the constraint exact by construction.
 */
struct ConstrainedNet {
    int d = 0;
    int q = 0;
    int num_labels = 0;
    Mat directions;   // d x d, row per group
    Mat offsets;      // d x q hidden biases
    Vec out_weights;  // length p, group-major: w[i*q + m]

    int width() const { return d * q; }
};

/// Hidden response before the output clamp; affine on every arrangement cell.
double preclamp_response(const ConstrainedNet& net, const Vec& x);

/// Network output clamp(<w, h01(Ax + b)>, 0, num_labels - 1).
double forward(const ConstrainedNet& net, const Vec& x);

/// Materialized p x d hidden matrix (for tests and export).
Mat materialize_hidden_matrix(const ConstrainedNet& net);

/// Group directions start axis-aligned; offsets put each 0-level kink
/// hyperplane uniformly inside the domain; output weights ~ U(-1/sqrt(p), ..).
ConstrainedNet init_constrained(const HyperRectangle& domain, int q, int num_labels,
                                std::uint64_t seed);

/// True when the d group directions span R^d (relative singular-value
/// threshold 1e-9).
bool check_span(const ConstrainedNet& net);

/// Relative loss reduction (first - last) / first >= threshold.
/// A zero first loss counts as converged.
bool check_convergence(const std::vector<double>& train_losses, double threshold);

struct TrainConfig {
    double learning_rate = 0.01;
    int batchsize = 100;
    int max_epochs = 100;
    int patience = 10;            // epochs in the early-stopping window
    double convergence_ratio = 0.1;
    double test_fraction = 0.5;
    std::uint64_t seed = 0;
};

struct TrainResult {
    ConstrainedNet net;
    std::vector<double> train_losses;  // per-epoch MSE over the training split
    std::vector<double> test_losses;   // per-epoch MSE over the test split
    bool converged = false;
    bool spans = false;
    bool aborted = false;  // non-finite loss encountered

    double final_test_loss() const { return test_losses.empty() ? -1.0 : test_losses.back(); }
};

/**
 * Mean-squared-error regression of integer labels with Adam
 * (beta1 = 0.9, beta2 = 0.999, eps = 1e-8).
 *
 * The data is split into train/test with the config seed. Gradients pass
 * through both clamps with subgradient 1 on the closed identity interval;
 * each shared direction accumulates the row gradients of its whole group.
 * Training stops early once the patience-window moving average of the test
 * loss stops decreasing. Identical (seed, data, config) reproduce the loss
 * history bitwise.
 */
TrainResult train(const ConstrainedNet& net, const LabeledDataset& data, const TrainConfig& cfg);

/// Loss and analytic parameter gradient of the batch MSE at the given net
/// (exposed for finite-difference verification).
double batch_loss_and_gradient(const ConstrainedNet& net, const PointList& xs,
                               const std::vector<int>& ys, Mat* grad_directions,
                               Mat* grad_offsets, Vec* grad_weights);

std::string net_to_json(const ConstrainedNet& net);
ConstrainedNet net_from_json(const std::string& text);

}  // namespace mlcd

#endif

#include "mlcd/regular_grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mlcd/integrate.hpp"
#include "mlcd/parallel.hpp"

namespace mlcd {

Vec RegularGrid::vertex(const std::vector<int>& idx) const {
    const int d = domain.dim();
    Vec x(d);
    for (int i = 0; i < d; ++i) {
        const double frac = static_cast<double>(idx[static_cast<std::size_t>(i)]) /
                            static_cast<double>(n);
        x[i] = domain.lower[i] + frac * (domain.upper[i] - domain.lower[i]);
    }
    return x;
}

VertexLabeler knn_labeler(const LabeledDataset& data, int k) {
    if (data.points.empty()) throw std::invalid_argument("knn_labeler: labeler has no data");
    if (k < 1) throw std::invalid_argument("knn_labeler: k must be >= 1");
    return [data, k](const Vec& x) {
        // distance-ordered k nearest, then majority with nearest as tiebreak
        std::vector<std::pair<double, int>> best;
        for (std::size_t i = 0; i < data.points.size(); ++i) {
            const double d2 = (data.points[i] - x).squaredNorm();
            if (static_cast<int>(best.size()) < k) {
                best.emplace_back(d2, data.labels[i]);
                std::sort(best.begin(), best.end());
            } else if (d2 < best.back().first) {
                best.back() = {d2, data.labels[i]};
                std::sort(best.begin(), best.end());
            }
        }
        std::vector<int> votes(static_cast<std::size_t>(data.num_labels), 0);
        for (const auto& [d2, label] : best) votes[static_cast<std::size_t>(label)]++;
        int winner = best.front().second;
        for (int label = 0; label < data.num_labels; ++label)
            if (votes[static_cast<std::size_t>(label)] >
                votes[static_cast<std::size_t>(winner)])
                winner = label;
        return winner;
    };
}

VertexLabeler direct_labeler(const SystemSpec& sys,
                             const std::vector<PointList>& attractor_samples, int horizon,
                             std::size_t samples_per_label) {
    PointList samples;
    std::vector<int> labels;
    for (std::size_t k = 0; k < attractor_samples.size(); ++k) {
        const auto& pool = attractor_samples[k];
        if (pool.empty()) throw std::invalid_argument("direct_labeler: labeler has no data");
        const std::size_t stride = std::max<std::size_t>(1, pool.size() / samples_per_label);
        for (std::size_t i = 0; i < pool.size(); i += stride) {
            samples.push_back(pool[i]);
            labels.push_back(static_cast<int>(k));
        }
    }
    return [sys, samples, labels, horizon](const Vec& x) {
        auto field = [&sys](const Vec& p) { return eval_field(sys, p); };
        Dopri5<decltype(field)> rk(field, sys.dim);
        Vec y = x;
        double h = 0.0;
        const HyperRectangle guard = sys.domain.inflated(2.0);
        for (int i = 0; i < horizon && guard.contains(y); ++i) rk.advance(y, 1.0, h);

        double best = std::numeric_limits<double>::infinity();
        int label = 0;
        for (std::size_t s = 0; s < samples.size(); ++s) {
            const double d2 = (samples[s] - y).squaredNorm();
            if (d2 < best) {
                best = d2;
                label = labels[s];
            }
        }
        return label;
    };
}

std::vector<int> label_vertices(const VertexLabeler& labeler, const RegularGrid& grid) {
    const int d = grid.domain.dim();
    std::size_t count = 1;
    for (int i = 0; i < d; ++i) count *= static_cast<std::size_t>(grid.n + 1);

    std::vector<int> labels(count);
    parallel_for(count, [&](std::size_t flat) {
        std::vector<int> idx(static_cast<std::size_t>(d));
        std::size_t rem = flat;
        for (int i = d - 1; i >= 0; --i) {
            idx[static_cast<std::size_t>(i)] = static_cast<int>(rem % (grid.n + 1));
            rem /= static_cast<std::size_t>(grid.n + 1);
        }
        labels[flat] = labeler(grid.vertex(idx));
    });
    return labels;
}

RegionAssignment classify_regular(const std::vector<int>& labels, const RegularGrid& grid,
                                  int num_labels) {
    const int d = grid.domain.dim();
    RegionAssignment ra;
    ra.num_labels = num_labels;
    ra.epsilon = 0.0;
    ra.directions = Mat::Identity(d, d);
    ra.cuts.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        for (int c = 0; c <= grid.n; ++c)
            ra.cuts[static_cast<std::size_t>(i)].push_back(
                grid.domain.lower[i] +
                (grid.domain.upper[i] - grid.domain.lower[i]) * c / grid.n);

    std::vector<std::size_t> vertex_stride(static_cast<std::size_t>(d), 1);
    for (int i = d - 2; i >= 0; --i)
        vertex_stride[static_cast<std::size_t>(i)] =
            vertex_stride[static_cast<std::size_t>(i + 1)] * static_cast<std::size_t>(grid.n + 1);

    std::vector<int> cell(static_cast<std::size_t>(d), 0);
    for (;;) {
        std::size_t base = 0;
        for (int i = 0; i < d; ++i)
            base += vertex_stride[static_cast<std::size_t>(i)] *
                    static_cast<std::size_t>(cell[static_cast<std::size_t>(i)]);

        int tag = kUncertain;
        bool uniform = true;
        int first_label = -1;
        for (unsigned mask = 0; mask < (1u << d) && uniform; ++mask) {
            std::size_t v = base;
            for (int i = 0; i < d; ++i)
                if ((mask >> i) & 1u) v += vertex_stride[static_cast<std::size_t>(i)];
            const int label = labels[v];
            if (first_label < 0)
                first_label = label;
            else if (label != first_label)
                uniform = false;
        }
        if (uniform) tag = first_label;
        ra.cells.push_back(cell);
        ra.tags.push_back(tag);

        int axis = d - 1;
        while (axis >= 0 && ++cell[static_cast<std::size_t>(axis)] == grid.n) {
            cell[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
    }
    return ra;
}

GridSearchResult min_grid_search(const HyperRectangle& domain, const VertexLabeler& labeler,
                                 int num_labels, const ExpectedBetti& expected, int n_max,
                                 bool scan_full) {
    if (n_max < 1) throw std::invalid_argument("min_grid_search: n_max must be >= 1");
    GridSearchResult result;
    for (int n = 1; n <= n_max; ++n) {
        RegularGrid grid{domain, n};
        const auto labels = label_vertices(labeler, grid);
        const auto assignment = classify_regular(labels, grid, num_labels);
        const auto check = conley_check(assignment, expected);

        GridSearchEntry entry;
        entry.n = n;
        entry.cubes = 1;
        for (int i = 0; i < domain.dim(); ++i) entry.cubes *= n;
        entry.success = check.success;
        result.profile.push_back(entry);

        if (check.success && !result.min_n) {
            result.min_n = n;
            if (!scan_full) break;
        }
    }
    return result;
}

}  // namespace mlcd

#ifndef MLCD_REGULAR_GRID_HPP
#define MLCD_REGULAR_GRID_HPP

#include <functional>
#include <optional>
#include <vector>

#include "mlcd/arrangement.hpp"
#include "mlcd/conley.hpp"
#include "mlcd/labeling.hpp"
#include "mlcd/systems.hpp"

namespace mlcd {

/// Uniform n-fold subdivision of the domain in every coordinate direction:
/// n^d cubes on an implicit (n+1)^d vertex lattice.
struct RegularGrid {
    HyperRectangle domain;
    int n = 1;

    Vec vertex(const std::vector<int>& idx) const;
};

using VertexLabeler = std::function<int(const Vec&)>;

/// Classify by the label of the nearest dataset initial condition.
VertexLabeler knn_labeler(const LabeledDataset& data, int k = 1);

/// Ground-truth classifier: integrate the time-1 map from the vertex and
/// assign the label of the nearest attractor sample.
VertexLabeler direct_labeler(const SystemSpec& sys,
                             const std::vector<PointList>& attractor_samples, int horizon,
                             std::size_t samples_per_label = 512);

/// Labels for all (n+1)^d lattice vertices, row-major, evaluated in parallel.
std::vector<int> label_vertices(const VertexLabeler& labeler, const RegularGrid& grid);

/// A cube whose vertices all carry label k joins N_k; any disagreement sends
/// it to the uncertain region.
RegionAssignment classify_regular(const std::vector<int>& labels, const RegularGrid& grid,
                                  int num_labels);

struct GridSearchEntry {
    int n = 0;
    long cubes = 0;
    bool success = false;
};

struct GridSearchResult {
    std::optional<int> min_n;
    std::vector<GridSearchEntry> profile;
};

/// Scan n = 1.. n_max for the smallest resolution whose regular decomposition
/// passes the expected-homology check. Success at one resolution does not
/// imply success at the next, so the scan is linear; with scan_full the
/// profile continues past the first success.
GridSearchResult min_grid_search(const HyperRectangle& domain, const VertexLabeler& labeler,
                                 int num_labels, const ExpectedBetti& expected, int n_max,
                                 bool scan_full = false);

}  // namespace mlcd

#endif

#ifndef MLCD_LABELING_HPP
#define MLCD_LABELING_HPP

#include <cstdint>
#include <vector>

#include "mlcd/geometry.hpp"
#include "mlcd/integrate.hpp"

namespace mlcd {

/// Merge scales of single-linkage clustering: the edge weights of a Euclidean
/// minimum spanning tree, sorted descending. The essential class is implicit.
struct PersistenceDiagram0 {
    std::vector<double> deaths;
};

struct MstEdge {
    int a = 0;
    int b = 0;
    double weight = 0.0;
};

/// Euclidean MST of the point set. Kruskal on the complete graph for small
/// inputs, Prim with on-the-fly distances above 2000 points.
std::vector<MstEdge> euclidean_mst(const PointList& points);

PersistenceDiagram0 persistence0(const PointList& points);

/// Number of clusters from the largest multiplicative death gap; 1 when no
/// gap reaches gap_ratio_min.
int choose_num_clusters(const PersistenceDiagram0& diag, int max_clusters,
                        double gap_ratio_min = 3.0);

struct Clustering {
    std::vector<int> labels;
    int num_labels = 0;
};

/// Single-linkage cut with exactly L components. Labels are canonical:
/// descending cluster size, ties broken by ascending centroid lexicographic
/// order.
Clustering cluster_labels(const PointList& points, int num_clusters);

struct LabeledDataset {
    PointList points;                         // initial conditions
    std::vector<int> labels;                  // one per point, in [0, num_labels)
    int num_labels = 0;
    std::vector<PointList> attractor_samples; // terminal-point clusters, per label
};

struct ClusterOptions {
    int fixed_num_labels = 0;  // 0 selects automatically from the diagram
    int max_clusters = 10;
    double gap_ratio_min = 3.0;
    std::size_t subsample = 2000;  // MST size cap; labels extend by nearest sample
    std::uint64_t seed = 0;
};

/// Label the ensemble's initial conditions by the cluster of their terminal
/// iterate. Escaped orbits are dropped. Returns the dataset together with the
/// diagram that drove the cluster count.
LabeledDataset label_by_terminal_cluster(const OrbitEnsemble& ens, const ClusterOptions& opts,
                                         PersistenceDiagram0* diagram_out = nullptr);

enum class BalanceStrategy { None, Oversample, Ratio };

struct BalanceOptions {
    BalanceStrategy strategy = BalanceStrategy::Oversample;
    std::vector<double> ratios;  // Ratio mode: one nonnegative share per label
    std::uint64_t seed = 0;
};

/// Duplicate under-represented classes. Oversample equalizes counts; Ratio
/// grows classes to the requested shares. Never removes a point or changes
/// a label.
LabeledDataset balance(const LabeledDataset& ds, const BalanceOptions& opts);

std::vector<std::size_t> class_counts(const LabeledDataset& ds);

}  // namespace mlcd

#endif

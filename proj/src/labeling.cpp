#include "mlcd/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mlcd/rng.hpp"

namespace mlcd {

namespace {

struct DisjointSet {
    explicit DisjointSet(std::size_t n) : parent(n), rank(n, 0) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank[a] < rank[b]) std::swap(a, b);
        parent[b] = a;
        if (rank[a] == rank[b]) ++rank[a];
        return true;
    }
    std::vector<std::size_t> parent;
    std::vector<unsigned> rank;
};

std::vector<MstEdge> mst_kruskal(const PointList& points) {
    const int n = static_cast<int>(points.size());
    std::vector<MstEdge> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            edges.push_back({i, j, (points[i] - points[j]).norm()});
    std::sort(edges.begin(), edges.end(), [](const MstEdge& x, const MstEdge& y) {
        if (x.weight != y.weight) return x.weight < y.weight;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    DisjointSet dsu(points.size());
    std::vector<MstEdge> tree;
    tree.reserve(points.size() - 1);
    for (const auto& e : edges) {
        if (dsu.unite(static_cast<std::size_t>(e.a), static_cast<std::size_t>(e.b))) {
            tree.push_back(e);
            if (tree.size() + 1 == points.size()) break;
        }
    }
    return tree;
}

std::vector<MstEdge> mst_prim(const PointList& points) {
    const std::size_t n = points.size();
    std::vector<char> in_tree(n, 0);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<int> parent(n, -1);
    best[0] = 0.0;

    std::vector<MstEdge> tree;
    tree.reserve(n - 1);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t next = n;
        double low = std::numeric_limits<double>::infinity();
        for (std::size_t v = 0; v < n; ++v)
            if (!in_tree[v] && best[v] < low) {
                low = best[v];
                next = v;
            }
        in_tree[next] = 1;
        if (parent[next] >= 0)
            tree.push_back({parent[next], static_cast<int>(next), std::sqrt(best[next])});
        for (std::size_t v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            const double d2 = (points[next] - points[v]).squaredNorm();
            if (d2 < best[v]) {
                best[v] = d2;
                parent[v] = static_cast<int>(next);
            }
        }
        best[next] = 0.0;
    }
    return tree;
}

std::size_t count_distinct(const PointList& points) {
    PointList sorted = points;
    std::sort(sorted.begin(), sorted.end(), [](const Vec& a, const Vec& b) {
        for (Eigen::Index i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });
    std::size_t distinct = sorted.empty() ? 0 : 1;
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] != sorted[i - 1]) ++distinct;
    return distinct;
}

/// Component ids after cutting the num_clusters-1 heaviest MST edges,
/// compacted in first-appearance order.
std::vector<int> single_linkage_components(const PointList& points,
                                           const std::vector<MstEdge>& tree, int num_clusters) {
    std::vector<MstEdge> edges = tree;
    std::sort(edges.begin(), edges.end(),
              [](const MstEdge& x, const MstEdge& y) { return x.weight < y.weight; });
    const std::size_t keep = edges.size() + 1 - static_cast<std::size_t>(num_clusters);

    DisjointSet dsu(points.size());
    for (std::size_t i = 0; i < keep; ++i)
        dsu.unite(static_cast<std::size_t>(edges[i].a), static_cast<std::size_t>(edges[i].b));

    std::vector<int> compact(points.size(), -1);
    std::vector<int> ids(points.size());
    int next = 0;
    for (std::size_t v = 0; v < points.size(); ++v) {
        const std::size_t root = dsu.find(v);
        if (compact[root] < 0) compact[root] = next++;
        ids[v] = compact[root];
    }
    return ids;
}

/// Canonical order: descending size, ties by ascending centroid lexicographic
/// order. Returns old-label -> new-label.
std::vector<int> canonical_relabel(const PointList& points, const std::vector<int>& raw,
                                   int num_clusters) {
    const int d = static_cast<int>(points.front().size());
    std::vector<std::size_t> counts(static_cast<std::size_t>(num_clusters), 0);
    std::vector<Vec> centroid(static_cast<std::size_t>(num_clusters), Vec::Zero(d));
    for (std::size_t i = 0; i < points.size(); ++i) {
        counts[static_cast<std::size_t>(raw[i])]++;
        centroid[static_cast<std::size_t>(raw[i])] += points[i];
    }
    for (int k = 0; k < num_clusters; ++k)
        if (counts[static_cast<std::size_t>(k)] > 0)
            centroid[static_cast<std::size_t>(k)] /=
                static_cast<double>(counts[static_cast<std::size_t>(k)]);

    std::vector<int> order(static_cast<std::size_t>(num_clusters));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto ca = counts[static_cast<std::size_t>(a)];
        const auto cb = counts[static_cast<std::size_t>(b)];
        if (ca != cb) return ca > cb;
        const Vec& ma = centroid[static_cast<std::size_t>(a)];
        const Vec& mb = centroid[static_cast<std::size_t>(b)];
        for (int i = 0; i < d; ++i)
            if (ma[i] != mb[i]) return ma[i] < mb[i];
        return a < b;
    });

    std::vector<int> remap(static_cast<std::size_t>(num_clusters));
    for (int rank = 0; rank < num_clusters; ++rank)
        remap[static_cast<std::size_t>(order[static_cast<std::size_t>(rank)])] = rank;
    return remap;
}

}  // namespace

std::vector<MstEdge> euclidean_mst(const PointList& points) {
    if (points.size() < 2) throw std::invalid_argument("euclidean_mst: need at least 2 points");
    return points.size() <= 2000 ? mst_kruskal(points) : mst_prim(points);
}

PersistenceDiagram0 persistence0(const PointList& points) {
    const auto tree = euclidean_mst(points);
    PersistenceDiagram0 diag;
    diag.deaths.reserve(tree.size());
    for (const auto& e : tree) diag.deaths.push_back(e.weight);
    std::sort(diag.deaths.begin(), diag.deaths.end(), std::greater<double>());
    return diag;
}

int choose_num_clusters(const PersistenceDiagram0& diag, int max_clusters, double gap_ratio_min) {
    if (diag.deaths.empty()) throw std::invalid_argument("choose_num_clusters: empty diagram");
    const int limit = std::min<int>(max_clusters, static_cast<int>(diag.deaths.size()));
    int best_m = 0;
    double best_ratio = 0.0;
    for (int m = 1; m < limit; ++m) {
        const double hi = std::max(diag.deaths[static_cast<std::size_t>(m - 1)], 1e-12);
        const double lo = std::max(diag.deaths[static_cast<std::size_t>(m)], 1e-12);
        const double ratio = hi / lo;
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best_m = m;
        }
    }
    if (best_m == 0 || best_ratio < gap_ratio_min) return 1;
    return best_m + 1;
}

Clustering cluster_labels(const PointList& points, int num_clusters) {
    if (num_clusters < 1) throw std::invalid_argument("cluster_labels: need num_clusters >= 1");
    if (static_cast<std::size_t>(num_clusters) > points.size())
        throw std::invalid_argument("cluster_labels: more clusters than points");
    Clustering out;
    out.num_labels = num_clusters;
    if (num_clusters == 1) {
        out.labels.assign(points.size(), 0);
        return out;
    }
    if (count_distinct(points) < static_cast<std::size_t>(num_clusters))
        throw std::invalid_argument("cluster_labels: more clusters than distinct points");

    const auto tree = euclidean_mst(points);
    auto raw = single_linkage_components(points, tree, num_clusters);
    const auto remap = canonical_relabel(points, raw, num_clusters);
    out.labels.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        out.labels[i] = remap[static_cast<std::size_t>(raw[i])];
    return out;
}

LabeledDataset label_by_terminal_cluster(const OrbitEnsemble& ens, const ClusterOptions& opts,
                                         PersistenceDiagram0* diagram_out) {
    PointList initial, terminal;
    for (std::size_t j = 0; j < ens.initial.size(); ++j) {
        if (ens.escaped[j]) continue;
        initial.push_back(ens.initial[j]);
        terminal.push_back(ens.terminal()[j]);
    }
    if (terminal.size() < 2)
        throw std::runtime_error("label_by_terminal_cluster: fewer than 2 surviving orbits");

    // MST on a capped subsample; remaining points adopt the label of their
    // nearest subsampled terminal point.
    std::vector<std::size_t> sample_idx(terminal.size());
    std::iota(sample_idx.begin(), sample_idx.end(), std::size_t{0});
    if (terminal.size() > opts.subsample) {
        Rng rng(derive_seed(opts.seed, 0xC1));
        rng.shuffle(sample_idx);
        sample_idx.resize(opts.subsample);
        std::sort(sample_idx.begin(), sample_idx.end());
    }
    PointList sample(sample_idx.size());
    for (std::size_t i = 0; i < sample_idx.size(); ++i) sample[i] = terminal[sample_idx[i]];

    const auto diag = persistence0(sample);
    if (diagram_out) *diagram_out = diag;
    const int num_labels = opts.fixed_num_labels > 0
                               ? opts.fixed_num_labels
                               : choose_num_clusters(diag, opts.max_clusters, opts.gap_ratio_min);

    std::vector<int> raw(terminal.size());
    if (num_labels == 1) {
        std::fill(raw.begin(), raw.end(), 0);
    } else {
        if (count_distinct(sample) < static_cast<std::size_t>(num_labels))
            throw std::runtime_error("label_by_terminal_cluster: clusters exceed distinct points");
        const auto tree = euclidean_mst(sample);
        const auto sample_raw = single_linkage_components(sample, tree, num_labels);
        if (sample.size() == terminal.size()) {
            raw = sample_raw;
        } else {
            for (std::size_t i = 0; i < terminal.size(); ++i) {
                double best = std::numeric_limits<double>::infinity();
                std::size_t arg = 0;
                for (std::size_t s = 0; s < sample.size(); ++s) {
                    const double d2 = (terminal[i] - sample[s]).squaredNorm();
                    if (d2 < best) {
                        best = d2;
                        arg = s;
                    }
                }
                raw[i] = sample_raw[arg];
            }
        }
    }

    // Canonical order computed over the full terminal set so that the label
    // of a given attractor is stable across realizations.
    const auto remap = canonical_relabel(terminal, raw, num_labels);

    LabeledDataset ds;
    ds.num_labels = num_labels;
    ds.points = std::move(initial);
    ds.labels.resize(terminal.size());
    ds.attractor_samples.assign(static_cast<std::size_t>(num_labels), PointList{});
    for (std::size_t i = 0; i < terminal.size(); ++i) {
        const int label = remap[static_cast<std::size_t>(raw[i])];
        ds.labels[i] = label;
        ds.attractor_samples[static_cast<std::size_t>(label)].push_back(terminal[i]);
    }
    for (int k = 0; k < num_labels; ++k)
        if (ds.attractor_samples[static_cast<std::size_t>(k)].empty())
            throw std::runtime_error("label_by_terminal_cluster: unwitnessed label");
    return ds;
}

std::vector<std::size_t> class_counts(const LabeledDataset& ds) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(ds.num_labels), 0);
    for (int label : ds.labels) counts[static_cast<std::size_t>(label)]++;
    return counts;
}

LabeledDataset balance(const LabeledDataset& ds, const BalanceOptions& opts) {
    const auto counts = class_counts(ds);
    for (std::size_t k = 0; k < counts.size(); ++k)
        if (counts[k] == 0) throw std::invalid_argument("balance: class " + std::to_string(k) +
                                                        " has no points");
    if (opts.strategy == BalanceStrategy::None) return ds;

    std::vector<std::size_t> target(counts.size());
    if (opts.strategy == BalanceStrategy::Oversample) {
        const std::size_t top = *std::max_element(counts.begin(), counts.end());
        std::fill(target.begin(), target.end(), top);
    } else {
        if (opts.ratios.size() != counts.size())
            throw std::invalid_argument("balance: need one ratio per label");
        double total_share = 0.0;
        for (double r : opts.ratios) {
            if (!(r > 0)) throw std::invalid_argument("balance: ratios must be positive");
            total_share += r;
        }
        // Smallest total that lets every class reach its share by growth only.
        double total = 0.0;
        for (std::size_t k = 0; k < counts.size(); ++k)
            total = std::max(total, static_cast<double>(counts[k]) * total_share / opts.ratios[k]);
        for (std::size_t k = 0; k < counts.size(); ++k)
            target[k] = std::max(counts[k], static_cast<std::size_t>(
                                                std::llround(total * opts.ratios[k] / total_share)));
    }

    std::vector<std::vector<std::size_t>> by_class(counts.size());
    for (std::size_t i = 0; i < ds.labels.size(); ++i)
        by_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);

    LabeledDataset out = ds;
    Rng rng(derive_seed(opts.seed, 0xBA));
    for (std::size_t k = 0; k < counts.size(); ++k) {
        for (std::size_t extra = counts[k]; extra < target[k]; ++extra) {
            const std::size_t pick = by_class[k][rng.below(by_class[k].size())];
            out.points.push_back(ds.points[pick]);
            out.labels.push_back(ds.labels[pick]);
        }
    }
    return out;
}

}  // namespace mlcd

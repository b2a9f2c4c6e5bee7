// Independent reference implementations used only by tests. Everything here
// is deliberately brute force and shares no code path with the library.
#ifndef MLCD_TESTS_ORACLES_HPP
#define MLCD_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "mlcd/geometry.hpp"

namespace oracle {

using mlcd::PointList;
using mlcd::Vec;

/// Kruskal on the explicit complete graph with a naive quadratic union-find.
inline std::vector<double> mst_weights(const PointList& points) {
    struct Edge {
        int a, b;
        double w;
    };
    std::vector<Edge> edges;
    const int n = static_cast<int>(points.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, (points[i] - points[j]).norm()});
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.w < y.w; });

    std::vector<int> comp(points.size());
    for (int i = 0; i < n; ++i) comp[static_cast<std::size_t>(i)] = i;
    std::vector<double> weights;
    for (const auto& e : edges) {
        const int ca = comp[static_cast<std::size_t>(e.a)];
        const int cb = comp[static_cast<std::size_t>(e.b)];
        if (ca == cb) continue;
        for (auto& c : comp)
            if (c == cb) c = ca;
        weights.push_back(e.w);
        if (weights.size() + 1 == points.size()) break;
    }
    std::sort(weights.begin(), weights.end(), std::greater<double>());
    return weights;
}

/// Dense GF(2) homology of a simplicial complex given by its maximal
/// simplices (vertex ids). All faces are generated, boundary matrices built
/// densely, ranks taken by plain Gaussian elimination.
class SimplicialHomology {
public:
    void add_simplex(std::vector<int> vertices) {
        std::sort(vertices.begin(), vertices.end());
        insert_with_faces(vertices);
    }

    std::vector<long> betti() const {
        int top = 0;
        for (const auto& s : simplices_) top = std::max(top, static_cast<int>(s.size()) - 1);

        std::vector<std::vector<std::vector<int>>> by_dim(static_cast<std::size_t>(top) + 1);
        for (const auto& s : simplices_)
            by_dim[s.size() - 1].push_back(std::vector<int>(s.begin(), s.end()));
        for (auto& bucket : by_dim) std::sort(bucket.begin(), bucket.end());

        std::vector<long> rank(static_cast<std::size_t>(top) + 2, 0);
        for (int k = 1; k <= top; ++k) {
            const auto& rows = by_dim[static_cast<std::size_t>(k) - 1];
            const auto& cols = by_dim[static_cast<std::size_t>(k)];
            std::vector<std::vector<char>> m(cols.size(), std::vector<char>(rows.size(), 0));
            for (std::size_t c = 0; c < cols.size(); ++c)
                for (std::size_t drop = 0; drop < cols[c].size(); ++drop) {
                    std::vector<int> face = cols[c];
                    face.erase(face.begin() + static_cast<long>(drop));
                    const auto it = std::lower_bound(rows.begin(), rows.end(), face);
                    m[c][static_cast<std::size_t>(it - rows.begin())] = 1;
                }
            rank[static_cast<std::size_t>(k)] = gf2_rank(m);
        }

        std::vector<long> betti(static_cast<std::size_t>(top) + 1);
        for (int k = 0; k <= top; ++k)
            betti[static_cast<std::size_t>(k)] =
                static_cast<long>(by_dim[static_cast<std::size_t>(k)].size()) -
                rank[static_cast<std::size_t>(k)] - rank[static_cast<std::size_t>(k) + 1];
        return betti;
    }

private:
    void insert_with_faces(const std::vector<int>& simplex) {
        const unsigned n = static_cast<unsigned>(simplex.size());
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            std::vector<int> face;
            for (unsigned b = 0; b < n; ++b)
                if ((mask >> b) & 1u) face.push_back(simplex[b]);
            simplices_.insert(face);
        }
    }

    static long gf2_rank(std::vector<std::vector<char>> m) {
        long rank = 0;
        std::size_t row = 0;
        const std::size_t n_rows = m.empty() ? 0 : m.front().size();
        for (std::size_t r = 0; r < n_rows && row < m.size(); ++r) {
            std::size_t pivot = m.size();
            for (std::size_t c = row; c < m.size(); ++c)
                if (m[c][r]) {
                    pivot = c;
                    break;
                }
            if (pivot == m.size()) continue;
            std::swap(m[row], m[pivot]);
            for (std::size_t c = 0; c < m.size(); ++c)
                if (c != row && m[c][r])
                    for (std::size_t i = 0; i < n_rows; ++i) m[c][i] ^= m[row][i];
            ++row;
            ++rank;
        }
        return rank;
    }

    std::set<std::vector<int>> simplices_;
};

/// Homology of a cubical top-cell set via the Kuhn triangulation of every
/// cube (d! simplices along coordinate-sorted vertex chains), shared faces
/// deduplicated through vertex ids.
inline std::vector<long> cubical_betti_via_simplices(
    const std::vector<std::vector<int>>& top_cells, int dim) {
    SimplicialHomology complex;
    std::map<std::vector<int>, int> vertex_ids;
    auto vertex_id = [&](const std::vector<int>& v) {
        const auto it = vertex_ids.find(v);
        if (it != vertex_ids.end()) return it->second;
        const int id = static_cast<int>(vertex_ids.size());
        vertex_ids.emplace(v, id);
        return id;
    };

    std::vector<int> perm(static_cast<std::size_t>(dim));
    for (const auto& cell : top_cells) {
        for (int i = 0; i < dim; ++i) perm[static_cast<std::size_t>(i)] = i;
        std::sort(perm.begin(), perm.end());
        do {
            // chain of dim+1 vertices from the cell's low corner, raising one
            // coordinate at a time in permutation order
            std::vector<int> corner = cell;
            std::vector<int> chain{vertex_id(corner)};
            for (int step : perm) {
                corner[static_cast<std::size_t>(step)]++;
                chain.push_back(vertex_id(corner));
            }
            complex.add_simplex(chain);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return complex.betti();
}

/// High-accuracy solution of the scalar radial equation dr/dt = -r * prod
/// (r - roots_k) by classic RK4 with tiny fixed steps.
inline double radial_flow(const std::vector<double>& roots, double r0, double duration,
                          double dt = 1e-5) {
    auto f = [&roots](double r) {
        double v = -r;
        for (double root : roots) v *= (r - root);
        return v;
    };
    double r = r0;
    double t = 0.0;
    while (t < duration) {
        const double h = std::min(dt, duration - t);
        const double k1 = f(r);
        const double k2 = f(r + 0.5 * h * k1);
        const double k3 = f(r + 0.5 * h * k2);
        const double k4 = f(r + h * k3);
        r += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
    }
    return r;
}

}  // namespace oracle

#endif

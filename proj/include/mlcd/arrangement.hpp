#ifndef MLCD_ARRANGEMENT_HPP
#define MLCD_ARRANGEMENT_HPP

#include <string>
#include <vector>

#include "mlcd/geometry.hpp"
#include "mlcd/network.hpp"

namespace mlcd {

/**
 * Kink hyperplanes of a trained net, reduced to one scalar coordinate per
 * group: direction i contributes cut values in t = <u_i, x> (u_i unit,
 * sign-canonicalized). Cuts are strictly increasing, deduplicated, clipped to
 * the domain projection, and always include both projection endpoints.
 */
struct Arrangement {
    Mat directions;                          // d x d, unit rows
    std::vector<std::vector<double>> cuts;   // per direction
    std::vector<std::vector<char>> is_bound; // parallel to cuts

    int dim() const { return static_cast<int>(directions.rows()); }
};

Arrangement extract_arrangement(const ConstrainedNet& net, const HyperRectangle& domain);

/**
 * Parallelotope grid over the domain: the tensor-product cells of the
 * arrangement that actually meet the domain box. Cell (c_0..c_{d-1}) occupies
 * t-interval [cuts[i][c_i], cuts[i][c_i + 1]] along direction i.
 */
struct CellGrid {
    Arrangement arrangement;
    HyperRectangle domain;
    Mat corner_solver;                   // inverse of the stacked directions
    std::vector<std::vector<int>> cells; // kept index tuples, lexicographic

    std::size_t cell_count() const { return cells.size(); }

    /// Corner of a cell in original coordinates; bit i of corner_mask picks
    /// the upper cut along direction i.
    Vec cell_corner(const std::vector<int>& cell, unsigned corner_mask) const;
};

/// Exact intersection test per cell: a parallelotope misses the box iff some
/// facet normal of their difference zonotope separates it from the origin.
CellGrid enumerate_cells(const Arrangement& arr, const HyperRectangle& domain);

constexpr int kUncertain = -1;

/// Tagged cells; reused by both the learned grid and the regular benchmark
/// grid (identity directions, uniform cuts).
struct RegionAssignment {
    int num_labels = 0;
    double epsilon = 0.0;
    Mat directions;
    std::vector<std::vector<double>> cuts;
    std::vector<std::vector<int>> cells;
    std::vector<int> tags;  // label k, or kUncertain

    std::size_t count_tag(int tag) const;
};

/**
 * Tag a cell with label k iff |forward - k| <= eps at every cell corner
 * (extreme values of the clamped affine response sit on corners); cells that
 * match no label form the uncertain region. Corner evaluations are shared.
 */
RegionAssignment classify_cells(const ConstrainedNet& net, const CellGrid& grid, double eps);

std::string region_to_json(const RegionAssignment& ra);
RegionAssignment region_from_json(const std::string& text);

/// Plot data for 2-D grids: one row per cell corner, columns
/// cell,corner,x1,x2,tag.
std::string region_cells_csv(const RegionAssignment& ra);

}  // namespace mlcd

#endif

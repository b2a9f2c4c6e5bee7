#ifndef MLCD_CUBICAL_HPP
#define MLCD_CUBICAL_HPP

#include <vector>

#include "mlcd/arrangement.hpp"

namespace mlcd {

/// Closed cubical complex described by its full-dimensional cells; grid
/// coordinates are integer index tuples and every face is implied.
struct CubicalComplex {
    int dim = 0;
    std::vector<std::vector<int>> top_cells;

    bool empty() const { return top_cells.empty(); }
};

struct BettiVector {
    std::vector<long> betti;  // beta_0 .. beta_dim

    bool operator==(const BettiVector& other) const = default;
};

/// Top cells carrying the given tag (a label index or kUncertain); geometry
/// is dropped since homology is invariant under the grid's linear coordinate
/// change.
CubicalComplex to_cubical(const RegionAssignment& assignment, int tag);

/**
 * Homology ranks of the closed complex over GF(2): every face of every top
 * cell is enumerated and the boundary matrices are reduced by Gaussian
 * elimination (left-to-right column reduction with clearing). Aborts above
 * 10^7 faces. The complex must be nonempty.
 */
BettiVector betti(const CubicalComplex& cx);

}  // namespace mlcd

#endif

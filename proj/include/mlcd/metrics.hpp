#ifndef MLCD_METRICS_HPP
#define MLCD_METRICS_HPP

#include <optional>

#include "mlcd/geometry.hpp"
#include "mlcd/integrate.hpp"

namespace mlcd {

/// Hausdorff distance max(sup_a dist(a, B), sup_b dist(b, A)) under the
/// Euclidean metric. Both sets must be nonempty and share a dimension.
double hausdorff(const PointList& a, const PointList& b);

/// Smallest i such that every consecutive snapshot pair from i on is within
/// tol in Hausdorff distance; nullopt if the tail never settles.
std::optional<int> stabilization_index(const OrbitEnsemble& ens, double tol);

}  // namespace mlcd

#endif

#include "mlcd/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mlcd {

namespace {

double directed_sq(const PointList& from, const PointList& to) {
    double worst = 0.0;
    for (const Vec& a : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec& b : to) {
            const double d2 = (a - b).squaredNorm();
            if (d2 < best) {
                best = d2;
                if (best <= worst) break;  // cannot raise the supremum
            }
        }
        if (best > worst) worst = best;
    }
    return worst;
}

}  // namespace

double hausdorff(const PointList& a, const PointList& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: empty point set");
    if (a.front().size() != b.front().size())
        throw std::invalid_argument("hausdorff: dimension mismatch");
    return std::sqrt(std::max(directed_sq(a, b), directed_sq(b, a)));
}

std::optional<int> stabilization_index(const OrbitEnsemble& ens, double tol) {
    if (ens.horizon < 2) throw std::invalid_argument("stabilization_index: horizon must be >= 2");
    int first = ens.horizon;  // index after the last violation
    for (int i = ens.horizon - 1; i >= 0; --i) {
        const double d = hausdorff(ens.snapshots[static_cast<std::size_t>(i)],
                                   ens.snapshots[static_cast<std::size_t>(i) + 1]);
        if (d > tol) break;
        first = i;
    }
    if (first == ens.horizon) return std::nullopt;
    return first;
}

}  // namespace mlcd

#include "mlcd/sampling.hpp"

#include <stdexcept>

#include "mlcd/rng.hpp"

namespace mlcd {

PointList latin_hypercube(const HyperRectangle& domain, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("latin_hypercube: n must be >= 1");
    const int d = domain.dim();
    Rng rng(seed);

    PointList points(n, Vec(d));
    for (int axis = 0; axis < d; ++axis) {
        const double width = (domain.upper[axis] - domain.lower[axis]) / static_cast<double>(n);
        const auto slab = rng.permutation(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double jitter = rng.uniform();
            points[j][axis] =
                domain.lower[axis] + width * (static_cast<double>(slab[j]) + jitter);
        }
    }
    return points;
}

}  // namespace mlcd

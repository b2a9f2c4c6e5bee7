#ifndef MLCD_SAMPLING_HPP
#define MLCD_SAMPLING_HPP

#include <cstdint>

#include "mlcd/geometry.hpp"

namespace mlcd {

/// Latin hypercube design: n points such that every axis is stratified into
/// n equal-width slabs each holding exactly one point. Deterministic in seed.
PointList latin_hypercube(const HyperRectangle& domain, std::size_t n, std::uint64_t seed);

}  // namespace mlcd

#endif

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sigmaflow/curvature.hpp"

namespace sigmaflow {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

// Deterministic low-discrepancy probe points inside a coordinate box:
// a Halton sequence with a seeded Cranley-Patterson rotation, mapped into
// each interval shrunk by `margin` (fraction of its width) on both sides.
std::vector<std::vector<double>> probe_points(std::span<const Interval> domain, int count,
                                              std::uint64_t seed = kDefaultSeed,
                                              double margin = 0.05);

}  // namespace sigmaflow

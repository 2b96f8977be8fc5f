#pragma once

#include "ghostfd/grid.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ghostfd {

enum class ProfilePointKind { Node, Barrier };

struct ProfilePoint {
    ProfilePointKind kind = ProfilePointKind::Node;
    std::size_t node = 0;  ///< grid index for Node points, u for the barrier point
    double s = 0.0;
    double value = 0.0;
};

/// Values on nodes u - window .. u - 1 followed by (L+, rebate).
[[nodiscard]] std::vector<ProfilePoint> barrier_profile(std::span<const double> values, const SpatialGrid& grid,
                                                        double rebate, std::size_t window);

/// Sign changes between successive differences of the profile values.
/// Differences with magnitude <= tolerance are treated as flat and skipped.
[[nodiscard]] std::size_t count_sign_changes(std::span<const ProfilePoint> profile, double tolerance = 1e-12);

}  // namespace ghostfd

#include "ghostfd/profile.hpp"

#include "ghostfd/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ghostfd {

std::vector<ProfilePoint> barrier_profile(std::span<const double> values, const SpatialGrid& grid, double rebate,
                                          std::size_t window) {
    if (values.size() != grid.size()) throw InvalidArgument("barrier_profile: size mismatch");
    const std::size_t u = grid.barrier_index();
    const std::size_t first = u > window ? u - window : 0;
    std::vector<ProfilePoint> out;
    out.reserve(u - first + 1);
    for (std::size_t i = first; i < u; ++i) out.push_back({ProfilePointKind::Node, i, grid.node(i), values[i]});
    out.push_back({ProfilePointKind::Barrier, u, grid.barrier(), rebate});
    return out;
}

std::size_t count_sign_changes(std::span<const ProfilePoint> profile, double tolerance) {
    std::size_t changes = 0;
    int last_sign = 0;
    for (std::size_t i = 1; i < profile.size(); ++i) {
        const double d = profile[i].value - profile[i - 1].value;
        if (std::abs(d) <= tolerance) continue;
        const int sign = d > 0.0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) ++changes;
        last_sign = sign;
    }
    return changes;
}

}  // namespace ghostfd

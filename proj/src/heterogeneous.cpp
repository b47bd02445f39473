#include "qdburst/heterogeneous.hpp"

#include "qdburst/homogeneous.hpp"

namespace qdburst {

namespace {

std::int64_t group_extent(const FlowGroupSpec& group, const Rational& quantum) {
    if (group.count < 1 || sgn(group.packet_size) <= 0) fail(ErrorKind::InvalidArg, "invalid flow group");
    if (sgn(quantum) <= 0) fail(ErrorKind::InvalidArg, "quantum must be > 0");
    return to_int64(ceil_of(group.burst() / quantum));
}

}  // namespace

GroupBound build_group_bound(const FlowGroupSpec& group, const Rational& quantum, BoundMethod method) {
    if (method == BoundMethod::Exact) {
        const auto exact = build_exact_group_bound(group, quantum);
        return group_bound_from_curve(group, quantum, to_double_curve(exact.curve));
    }
    const std::int64_t extent = group_extent(group, quantum);
    std::vector<double> eps(static_cast<std::size_t>(extent + 1));
    for (std::int64_t k = 0; k <= extent; ++k) {
        eps[static_cast<std::size_t>(k)] = dkw_tail_bound(group.count, group.packet_size, quantum * k);
    }
    return group_bound_from_curve(group, quantum, unit_grid_curve(std::move(eps)));
}

ExactGroupBound build_exact_group_bound(const FlowGroupSpec& group, const Rational& quantum) {
    const std::int64_t extent = group_extent(group, quantum);
    std::vector<Rational> eps(static_cast<std::size_t>(extent + 1));
    for (std::int64_t k = 0; k <= extent; ++k) {
        eps[static_cast<std::size_t>(k)] = exact_tail_bound(group.count, group.packet_size, quantum * k);
    }
    return group_bound_from_curve(group, quantum, unit_grid_curve(std::move(eps)));
}

}  // namespace qdburst

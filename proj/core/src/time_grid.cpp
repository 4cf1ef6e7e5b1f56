#include "specdec/time_grid.hpp"

#include <cmath>
#include <string>

#include "specdec/errors.hpp"

namespace specdec {

TimeGrid::TimeGrid(GridKind kind, std::vector<double> nodes)
    : kind_(kind), nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) throw ParameterError("time grid needs at least 2 nodes");
    if (!(nodes_.front() >= 0.0)) throw ParameterError("time grid nodes must be >= 0");
    for (std::size_t k = 0; k + 1 < nodes_.size(); ++k)
        if (!(nodes_[k] < nodes_[k + 1]) || !std::isfinite(nodes_[k + 1]))
            throw ParameterError("time grid nodes must be finite and strictly increasing");

    if (kind_ == GridKind::uniform) {
        const double h = (nodes_.back() - nodes_.front()) / double(nodes_.size() - 1);
        for (std::size_t k = 0; k + 1 < nodes_.size(); ++k)
            if (std::abs((nodes_[k + 1] - nodes_[k]) - h) > 1e-9 * h)
                throw ParameterError("grid tagged uniform has non-constant step");
    } else {
        if (!(nodes_.front() > 0.0))
            throw ParameterError("geometric grid needs t_0 > 0");
        const double r = std::pow(nodes_.back() / nodes_.front(),
                                  1.0 / double(nodes_.size() - 1));
        for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) {
            const double rk = nodes_[k + 1] / nodes_[k];
            if (std::abs(rk - r) > 1e-9 * r)
                throw ParameterError("grid tagged geometric has non-constant ratio");
        }
    }
}

TimeGrid TimeGrid::uniform(double t_first, double t_last, std::size_t count) {
    if (count < 2) throw ParameterError("time grid needs at least 2 nodes");
    if (!(t_first >= 0.0) || !(t_last > t_first))
        throw ParameterError("uniform grid needs 0 <= t_first < t_last");
    std::vector<double> nodes(count);
    const double h = (t_last - t_first) / double(count - 1);
    for (std::size_t k = 0; k < count; ++k) nodes[k] = t_first + h * double(k);
    nodes.back() = t_last;
    return TimeGrid(GridKind::uniform, std::move(nodes));
}

TimeGrid TimeGrid::geometric(double t_first, double t_last, std::size_t count) {
    if (count < 2) throw ParameterError("time grid needs at least 2 nodes");
    if (!(t_first > 0.0) || !(t_last > t_first))
        throw ParameterError("geometric grid needs 0 < t_first < t_last");
    std::vector<double> nodes(count);
    const double lr = (std::log(t_last) - std::log(t_first)) / double(count - 1);
    for (std::size_t k = 0; k < count; ++k)
        nodes[k] = std::exp(std::log(t_first) + lr * double(k));
    nodes.front() = t_first;
    nodes.back() = t_last;
    return TimeGrid(GridKind::geometric, std::move(nodes));
}

double TimeGrid::step() const {
    if (kind_ != GridKind::uniform)
        throw ParameterError("step() requires a uniform grid");
    return (nodes_.back() - nodes_.front()) / double(nodes_.size() - 1);
}

TimeGrid make_time_grid(GridKind kind, double t_min, double t_max, std::size_t count) {
    if (!(t_min > 0.0) || !(t_max > t_min) || !std::isfinite(t_max))
        throw ParameterError("make_time_grid needs 0 < t_min < t_max, got [" +
                             std::to_string(t_min) + ", " + std::to_string(t_max) + "]");
    return kind == GridKind::uniform ? TimeGrid::uniform(t_min, t_max, count)
                                     : TimeGrid::geometric(t_min, t_max, count);
}

} // namespace specdec

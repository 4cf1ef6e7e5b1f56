#pragma once

#include <cstddef>
#include <vector>

namespace specdec {

enum class GridKind { uniform, geometric };

/// Strictly increasing scale nodes t_0 < t_1 < ... < t_{N-1}, t_0 >= 0.
/// Uniform grids have constant step; geometric grids constant ratio
/// (and therefore t_0 > 0).
class TimeGrid {
public:
    TimeGrid(GridKind kind, std::vector<double> nodes);

    /// Uniform nodes from t_first to t_last inclusive; t_first == 0 allowed.
    static TimeGrid uniform(double t_first, double t_last, std::size_t count);

    /// Geometric nodes, t_first > 0.
    static TimeGrid geometric(double t_first, double t_last, std::size_t count);

    GridKind kind() const { return kind_; }
    const std::vector<double>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    double operator[](std::size_t k) const { return nodes_[k]; }
    double front() const { return nodes_.front(); }
    double back() const { return nodes_.back(); }

    bool is_uniform() const { return kind_ == GridKind::uniform; }

    /// Constant step of a uniform grid; ParameterError otherwise.
    double step() const;

private:
    GridKind kind_;
    std::vector<double> nodes_;
};

/// Build a grid with 0 < t_min < t_max and count >= 2 nodes.
/// Flows that start at scale zero construct TimeGrid::uniform(0, ...) directly.
TimeGrid make_time_grid(GridKind kind, double t_min, double t_max, std::size_t count);

} // namespace specdec

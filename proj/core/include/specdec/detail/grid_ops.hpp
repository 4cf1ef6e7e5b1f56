#pragma once

#include <cstddef>
#include <vector>

namespace specdec::detail {

// Forward differences scaled by 1/spacing. 1-D versions shrink the array
// by one; the 2-D versions keep the shape and put zeros in the last
// column/row (replicate boundary). Adjoints are exact with respect to the
// plain Euclidean dot product: dot(D u, y) == dot(u, Dt y) for all u, y.

/// out[i] = (u[i+1] - u[i]) / h, size n-1.
void diff1d(const std::vector<double>& u, std::vector<double>& out, double h);

/// Adjoint of diff1d: out[j] = (y[j-1] - y[j]) / h with y out of range = 0.
void diff1d_adjoint(const std::vector<double>& y, std::vector<double>& out, double h);

/// Column differences, zero in the last column.
void diff_x(const std::vector<double>& u, std::vector<double>& out, std::size_t rows,
            std::size_t cols, double h);
void diff_x_adjoint(const std::vector<double>& y, std::vector<double>& out,
                    std::size_t rows, std::size_t cols, double h);

/// Row differences, zero in the last row.
void diff_y(const std::vector<double>& u, std::vector<double>& out, std::size_t rows,
            std::size_t cols, double h);
void diff_y_adjoint(const std::vector<double>& y, std::vector<double>& out,
                    std::size_t rows, std::size_t cols, double h);

/// Projection of v onto the l1 ball of radius r.
std::vector<double> project_l1_ball(const std::vector<double>& v, double r);
void project_l1_ball_inplace(double* v, std::size_t n, double r,
                             std::vector<double>& scratch);

} // namespace specdec::detail

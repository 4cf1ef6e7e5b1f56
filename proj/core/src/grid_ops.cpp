#include "specdec/detail/grid_ops.hpp"

#include <algorithm>
#include <cmath>

namespace specdec::detail {

void diff1d(const std::vector<double>& u, std::vector<double>& out, double h) {
    const std::size_t n = u.size();
    out.resize(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i + 1 < n; ++i) out[i] = (u[i + 1] - u[i]) / h;
}

void diff1d_adjoint(const std::vector<double>& y, std::vector<double>& out, double h) {
    const std::size_t n = y.size() + 1;
    out.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double v = 0.0;
        if (j > 0) v += y[j - 1];
        if (j < n - 1) v -= y[j];
        out[j] = v / h;
    }
}

void diff_x(const std::vector<double>& u, std::vector<double>& out, std::size_t rows,
            std::size_t cols, double h) {
    out.assign(rows * cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j + 1 < cols; ++j)
            out[i * cols + j] = (u[i * cols + j + 1] - u[i * cols + j]) / h;
}

void diff_x_adjoint(const std::vector<double>& y, std::vector<double>& out,
                    std::size_t rows, std::size_t cols, double h) {
    out.assign(rows * cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            double v = 0.0;
            if (j > 0) v += y[i * cols + j - 1];
            if (j + 1 < cols) v -= y[i * cols + j];
            out[i * cols + j] = v / h;
        }
}

void diff_y(const std::vector<double>& u, std::vector<double>& out, std::size_t rows,
            std::size_t cols, double h) {
    out.assign(rows * cols, 0.0);
    for (std::size_t i = 0; i + 1 < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            out[i * cols + j] = (u[(i + 1) * cols + j] - u[i * cols + j]) / h;
}

void diff_y_adjoint(const std::vector<double>& y, std::vector<double>& out,
                    std::size_t rows, std::size_t cols, double h) {
    out.assign(rows * cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            double v = 0.0;
            if (i > 0) v += y[(i - 1) * cols + j];
            if (i + 1 < rows) v -= y[i * cols + j];
            out[i * cols + j] = v / h;
        }
}

void project_l1_ball_inplace(double* v, std::size_t n, double r,
                             std::vector<double>& scratch) {
    double a1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) a1 += std::abs(v[i]);
    if (a1 <= r) return;
    if (r <= 0.0) {
        std::fill(v, v + n, 0.0);
        return;
    }
    // Threshold theta with sum_i max(|v_i| - theta, 0) = r, via the sorted
    // magnitudes.
    scratch.resize(n);
    for (std::size_t i = 0; i < n; ++i) scratch[i] = std::abs(v[i]);
    std::sort(scratch.begin(), scratch.end(), std::greater<double>());
    double cum = 0.0, theta = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        cum += scratch[k];
        const double cand = (cum - r) / double(k + 1);
        if (k + 1 == n || scratch[k + 1] <= cand) {
            theta = cand;
            break;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double m = std::abs(v[i]) - theta;
        v[i] = m > 0.0 ? (v[i] > 0.0 ? m : -m) : 0.0;
    }
}

std::vector<double> project_l1_ball(const std::vector<double>& v, double r) {
    std::vector<double> out = v, scratch;
    project_l1_ball_inplace(out.data(), out.size(), r, scratch);
    return out;
}

} // namespace specdec::detail

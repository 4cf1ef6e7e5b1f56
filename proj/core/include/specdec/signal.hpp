#pragma once

#include <cstddef>
#include <vector>

namespace specdec {

/// A sampled signal on a uniform grid, one- or two-dimensional.
///
/// Two-dimensional signals are stored row-major.  For collaborative
/// (ensemble) data the rows are the shared positions and each column is
/// one member signal.  All quadrature-like quantities (inner product,
/// norms) carry the cell volume spacing^dim so that values are
/// resolution-consistent discretizations of their continuum counterparts.
class Signal {
public:
    Signal() = default;

    /// 1-D signal. Values must be finite, spacing positive.
    explicit Signal(std::vector<double> values, double spacing = 1.0);

    /// 2-D signal, row-major, rows*cols == values.size().
    Signal(std::vector<double> values, std::size_t rows, std::size_t cols,
           double spacing = 1.0);

    static Signal zeros(std::size_t n, double spacing = 1.0);
    static Signal zeros(std::size_t rows, std::size_t cols, double spacing = 1.0);
    static Signal zeros_like(const Signal& other);

    int dim() const { return dim_; }
    std::size_t size() const { return values_.size(); }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double spacing() const { return spacing_; }

    /// Quadrature weight of one grid cell: spacing^dim.
    double cell() const;

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
    double& at(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    bool same_shape(const Signal& other) const;

    /// Throws ParameterError if any entry is NaN or infinite.
    void check_finite(const char* context) const;

    Signal& operator+=(const Signal& other);
    Signal& operator-=(const Signal& other);
    Signal& operator*=(double c);

private:
    std::vector<double> values_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    int dim_ = 1;
    double spacing_ = 1.0;
};

Signal operator+(Signal a, const Signal& b);
Signal operator-(Signal a, const Signal& b);
Signal operator*(double c, Signal a);
Signal operator*(Signal a, double c);

/// <a,b> = spacing^dim * sum_i a_i b_i.
double inner(const Signal& a, const Signal& b);

/// L2 norm induced by inner().
double norm2(const Signal& a);

/// L1 norm: spacing^dim * sum_i |a_i|.
double norm1(const Signal& a);

/// max_i |a_i| (no cell weight).
double sup_norm(const Signal& a);

} // namespace specdec

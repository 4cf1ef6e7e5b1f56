#include "specdec/signal.hpp"

#include <cmath>
#include <string>

#include "specdec/errors.hpp"

namespace specdec {

namespace {

void check_spacing(double spacing) {
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw ParameterError("signal spacing must be positive and finite, got " +
                             std::to_string(spacing));
}

} // namespace

Signal::Signal(std::vector<double> values, double spacing)
    : values_(std::move(values)), rows_(1), cols_(values_.size()), dim_(1),
      spacing_(spacing) {
    check_spacing(spacing);
    if (values_.empty()) throw ParameterError("signal must not be empty");
    rows_ = 1;
    cols_ = values_.size();
    check_finite("Signal");
}

Signal::Signal(std::vector<double> values, std::size_t rows, std::size_t cols,
               double spacing)
    : values_(std::move(values)), rows_(rows), cols_(cols), dim_(2), spacing_(spacing) {
    check_spacing(spacing);
    if (rows == 0 || cols == 0 || values_.size() != rows * cols)
        throw ParameterError("2-D signal shape mismatch: " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " vs " +
                             std::to_string(values_.size()) + " values");
    check_finite("Signal");
}

Signal Signal::zeros(std::size_t n, double spacing) {
    return Signal(std::vector<double>(n, 0.0), spacing);
}

Signal Signal::zeros(std::size_t rows, std::size_t cols, double spacing) {
    return Signal(std::vector<double>(rows * cols, 0.0), rows, cols, spacing);
}

Signal Signal::zeros_like(const Signal& other) {
    Signal s = other;
    std::fill(s.values_.begin(), s.values_.end(), 0.0);
    return s;
}

double Signal::cell() const {
    return dim_ == 1 ? spacing_ : spacing_ * spacing_;
}

bool Signal::same_shape(const Signal& other) const {
    return dim_ == other.dim_ && rows_ == other.rows_ && cols_ == other.cols_ &&
           spacing_ == other.spacing_;
}

void Signal::check_finite(const char* context) const {
    for (double v : values_)
        if (!std::isfinite(v))
            throw ParameterError(std::string(context) + ": non-finite sample");
}

namespace {

void require_same_shape(const Signal& a, const Signal& b) {
    if (!a.same_shape(b)) throw ParameterError("signal shape mismatch");
}

} // namespace

Signal& Signal::operator+=(const Signal& other) {
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

Signal& Signal::operator-=(const Signal& other) {
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

Signal& Signal::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

Signal operator+(Signal a, const Signal& b) { return a += b; }
Signal operator-(Signal a, const Signal& b) { return a -= b; }
Signal operator*(double c, Signal a) { return a *= c; }
Signal operator*(Signal a, double c) { return a *= c; }

double inner(const Signal& a, const Signal& b) {
    if (!a.same_shape(b)) throw ParameterError("inner: signal shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return a.cell() * s;
}

double norm2(const Signal& a) { return std::sqrt(inner(a, a)); }

double norm1(const Signal& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i]);
    return a.cell() * s;
}

double sup_norm(const Signal& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i]));
    return m;
}

} // namespace specdec

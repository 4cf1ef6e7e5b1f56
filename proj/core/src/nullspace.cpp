#include "specdec/nullspace.hpp"

#include "specdec/errors.hpp"

namespace specdec {

namespace {

NullspaceSplit split_constant(const Signal& f) {
    double mean = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) mean += f[i];
    mean /= double(f.size());
    Signal n0 = Signal::zeros_like(f);
    Signal f0 = f;
    for (std::size_t i = 0; i < f.size(); ++i) {
        n0[i] = mean;
        f0[i] -= mean;
    }
    return {std::move(f0), std::move(n0)};
}

// Least-squares fit of a + b*x, x_i = i*spacing; the residual is
// orthogonal to both the constants and the linear ramp.
NullspaceSplit split_affine_1d(const Signal& f) {
    if (f.dim() != 1) throw ParameterError("affine nullspace split needs a 1-D signal");
    const std::size_t n = f.size();
    const double s = f.spacing();
    double xbar = 0.5 * s * double(n - 1);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += f[i];
    mean /= double(n);
    double sxx = 0.0, sxf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = s * double(i) - xbar;
        sxx += dx * dx;
        sxf += dx * (f[i] - mean);
    }
    const double b = sxx > 0.0 ? sxf / sxx : 0.0;
    Signal n0 = Signal::zeros_like(f);
    Signal f0 = f;
    for (std::size_t i = 0; i < n; ++i) {
        n0[i] = mean + b * (s * double(i) - xbar);
        f0[i] -= n0[i];
    }
    return {std::move(f0), std::move(n0)};
}

NullspaceSplit split_per_column(const Signal& f) {
    if (f.dim() != 2) throw ParameterError("per-column nullspace split needs a 2-D signal");
    Signal n0 = Signal::zeros_like(f);
    Signal f0 = f;
    for (std::size_t j = 0; j < f.cols(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < f.rows(); ++i) mean += f.at(i, j);
        mean /= double(f.rows());
        for (std::size_t i = 0; i < f.rows(); ++i) {
            n0.at(i, j) = mean;
            f0.at(i, j) -= mean;
        }
    }
    return {std::move(f0), std::move(n0)};
}

} // namespace

NullspaceSplit remove_nullspace(const Signal& f, NullspaceKind kind) {
    switch (kind) {
        case NullspaceKind::none: return {f, Signal::zeros_like(f)};
        case NullspaceKind::constants: return split_constant(f);
        case NullspaceKind::affine_1d: return split_affine_1d(f);
        case NullspaceKind::per_column_constants: return split_per_column(f);
    }
    throw ParameterError("unknown nullspace kind");
}

} // namespace specdec

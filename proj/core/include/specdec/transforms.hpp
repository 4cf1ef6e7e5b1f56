#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "specdec/signal.hpp"

namespace specdec {

/// Orthonormal analysis operator V: signal -> coefficient vector of the
/// same length, with V^T V = I (plain Euclidean orthonormality).
class Transform {
public:
    virtual ~Transform() = default;
    virtual std::string name() const = 0;
    virtual std::vector<double> forward(const Signal& u) const = 0;
    /// Adjoint/inverse V^T z, shaped like `like`.
    virtual Signal inverse(const std::vector<double>& z, const Signal& like) const = 0;
};

/// V = identity.
std::shared_ptr<const Transform> identity_transform();

/// Orthonormal DCT-II; applied separably along rows and columns for 2-D
/// signals.
std::shared_ptr<const Transform> dct_transform();

/// max over seeded random probes u of
///   max(| ||Vu||/||u|| - 1 |, ||V^T V u - u|| / ||u||)
/// using plain Euclidean norms. Zero for an exactly orthonormal pair.
double orthonormality_defect(const Transform& V, const Signal& like,
                             std::uint64_t seed = 1234, int probes = 3);

} // namespace specdec

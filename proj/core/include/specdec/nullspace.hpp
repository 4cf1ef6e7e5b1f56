#pragma once

#include "specdec/signal.hpp"

namespace specdec {

/// Shape of the set {u : J(u) = 0} of a regularizer, which scale-space
/// transforms cannot see and therefore split off before running.
enum class NullspaceKind {
    none,                  // J(u) = 0 only for u = 0
    constants,             // constant signals
    affine_1d,             // a + b*x on a 1-D grid
    per_column_constants,  // ensemble data: one constant per member signal
};

struct NullspaceSplit {
    Signal f0;  // component orthogonal to the nullspace
    Signal n0;  // nullspace component, f = f0 + n0
};

/// Orthogonal projection split f = f0 + n0 with <f0, n0> = 0.
/// Idempotent: applying it to f0 returns n0 = 0.
NullspaceSplit remove_nullspace(const Signal& f, NullspaceKind kind);

} // namespace specdec

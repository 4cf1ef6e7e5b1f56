#pragma once

#include <memory>
#include <string>

#include "specdec/nullspace.hpp"
#include "specdec/signal.hpp"
#include "specdec/transforms.hpp"

namespace specdec {

/// The one-homogeneous convex regularizers the scale-space transforms are
/// built on. All are absolutely one-homogeneous: J(c u) = |c| J(u).
enum class FunctionalKind {
    tv1d,               // total variation of a 1-D signal
    tv2d_aniso,         // anisotropic total variation of an image
    tv2d_iso,           // isotropic total variation of an image
    l1_analysis,        // ||V u||_1 for an orthonormal transform V
    tgv2,               // second-order total generalized variation
    collab_linf1,       // sum over positions of max_j |u_{i,j}| (ensembles)
    grad_collab_linf1,  // same group norm applied to the position gradient
};

struct SolverOptions {
    /// Iterative proxes stop when the duality gap drops below
    /// tol * ||f||^2 of their datum.
    double tol = 1e-8;
    long max_iterations = 50000;
};

class FunctionalSpec {
public:
    static FunctionalSpec tv1d();
    static FunctionalSpec tv2d_aniso();
    static FunctionalSpec tv2d_iso();
    static FunctionalSpec l1_analysis(std::shared_ptr<const Transform> transform);
    /// beta in (0, 1) balances the first- and second-order penalties:
    /// J(u) = min_w beta ||grad u - w||_1 + (1 - beta) ||grad w||_1.
    static FunctionalSpec tgv2(double beta);
    static FunctionalSpec collab_linf1();
    static FunctionalSpec grad_collab_linf1();

    FunctionalKind kind() const { return kind_; }
    double beta() const;
    const Transform& transform() const;
    std::shared_ptr<const Transform> transform_ptr() const;
    std::string name() const;

    NullspaceKind nullspace_kind(const Signal& like) const;

    /// Throws ParameterError when the signal shape is not admissible for
    /// this functional.
    void validate_shape(const Signal& f) const;

private:
    explicit FunctionalSpec(FunctionalKind kind) : kind_(kind) {}

    FunctionalKind kind_;
    double beta_ = 0.0;
    std::shared_ptr<const Transform> transform_;
};

/// J(u). Exact for all kinds except tgv2, whose inner minimization is
/// solved to the given tolerance.
double evaluate(const FunctionalSpec& J, const Signal& u,
                const SolverOptions& options = {});

struct ProxResult {
    Signal u;         // argmin 1/2 ||u - f||^2 + t J(u)
    Signal p;         // (f - u) / t, a subgradient of J at u
    long iterations;  // 0 for closed-form solutions
    double residual;  // final duality gap (cell-weighted), 0 for closed forms
};

/// Proximal map of t*J at f, t > 0. Iterative backends stop at duality gap
/// <= tol * ||f||^2 and throw SolverError when the iteration budget runs
/// out first.
ProxResult prox(const FunctionalSpec& J, const Signal& f, double t,
                const SolverOptions& options = {});

/// Subgradient of J near the datum itself, taken as the p of a prox at a
/// small probe scale. Used to seed p(0) for flows.
Signal subgradient_at_zero_scale(const FunctionalSpec& J, const Signal& f,
                                 double t_probe, const SolverOptions& options = {});

/// Split f into nullspace-free part and nullspace part for this J.
NullspaceSplit remove_nullspace(const FunctionalSpec& J, const Signal& f);

} // namespace specdec

#pragma once

#include <vector>

#include "specdec/flows.hpp"
#include "specdec/functionals.hpp"
#include "specdec/signal.hpp"
#include "specdec/spectral.hpp"
#include "specdec/time_grid.hpp"

namespace specdec {

/// Reference implementations that are independent of the generic solver
/// machinery: analytic soft-threshold paths in DCT coordinates, the exact
/// step eigenfunction of 1-D total variation, and a derivative-free
/// brute-force prox for tiny instances.

/// Scale path of the l1-in-DCT-coordinates functional computed entirely
/// from the closed forms, mapped back through the inverse transform:
///   GF/VM:  z_i(t) = sign(z_i) max(|z_i| - t, 0)
///   IS:     z_i(s) = z_i when s |z_i| >= 1, else 0
/// with z = DCT(f). No iterative solver involved. IS jumps are sharp here,
/// so Bregman iterates may differ within one grid step of a jump.
ScalePath dct_closed_form_path(const Signal& f, Method method, const TimeGrid& grid);

/// Exact peak list of the transform-domain spectrum: one entry per
/// distinct nonzero coefficient magnitude m with multiplicity c, located
/// at t = m, carrying S = sqrt(c * cell) * m (energy) or S = cell * c * m
/// (l1). Widths are zero: entries are peak areas, not densities.
Spectrum dct_spectrum(const Signal& f, SpectrumKind kind = SpectrumKind::energy);

struct EigenpairCertificate {
    Signal f;
    double lambda;    // J(f) / ||f||^2
    double residual;  // max_tau ||prox(J,f,tau).u - (1 - lambda tau) f|| / ||f||
    bool accepted;
};

/// Checks lambda u in dJ(u) through the prox: an eigenfunction's prox is
/// the pure shrinkage (1 - lambda tau)+ f. Probes tau in {0.1, 0.5, 0.9}/lambda.
EigenpairCertificate verify_eigenfunction(const FunctionalSpec& J, const Signal& f,
                                          double tol,
                                          const SolverOptions& options = {});

/// The zero-mean step [1,...,1,-1,...,-1] (n even, n >= 4), an exact
/// eigenfunction of 1-D total variation with lambda = 2/(n * spacing),
/// certified by verify_eigenfunction at tolerance 1e-8.
EigenpairCertificate make_tv_eigenfunction(std::size_t n, double spacing = 1.0);

/// Second-order penalty min_w beta ||Du - w||_1 + (1-beta) ||Dw||_1 for a
/// small 1-D signal, computed exactly by enumerating the vertices of the
/// kink hyperplane arrangement (needs u.size() <= 10).
double tgv2_value_bruteforce(const Signal& u, double beta);

/// Derivative-free minimization of 1/2 ||u - f||^2 + t J(u) for signals of
/// total dimension <= 4: seeded multi-start subgradient descent followed
/// by a shrinking 7^d pattern search down to the given radius. Accuracy
/// around 1e-4 in u. t = 0 returns f.
Signal bruteforce_prox(const FunctionalSpec& J, const Signal& f, double t,
                       double resolution = 1e-6);

} // namespace specdec

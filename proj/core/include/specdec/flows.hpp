#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specdec/functionals.hpp"
#include "specdec/signal.hpp"
#include "specdec/time_grid.hpp"

namespace specdec {

enum class Method { gradient_flow, variational, inverse_scale };

/// Short tokens "gf", "vm", "is" used in manifests and on the command line.
std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& token);

/// Nodes past the first k with ||u_k|| <= eps * ||f|| are padded instead
/// of solved; grids stay rectangular and the telescoping band sums keep
/// their exactness.
inline constexpr double extinction_threshold = 1e-8;

/// A sampled scale path: iterates u_k and subgradients p_k in ∂J(u_k) at
/// the grid nodes. For the inverse scale space method u holds v_k and p
/// holds the accumulated q_k; the grid then lives on the s axis.
struct ScalePath {
    Method method;
    TimeGrid grid;
    std::vector<Signal> u;
    std::vector<Signal> p;
    Signal f;
    std::optional<std::size_t> extinction_index;
};

/// Backward Euler for du/dt = -p, p in ∂J(u), u(0) = f:
/// u_{k+1} = prox(J, u_k, tau).u and p_{k+1} = (u_k - u_{k+1}) / tau.
///
/// Needs a uniform grid starting at t = 0 and a datum with no component
/// in the nullspace of J (the flow would never extinguish otherwise).
/// p_0 is seeded from a prox at the tiny probe scale 1e-3 * tau.
ScalePath run_gradient_flow(const Signal& f, const FunctionalSpec& J,
                            const TimeGrid& grid, const SolverOptions& options = {});

/// Independent minimizers u_k = prox(J, f, t_k).u with p_k = (f - u_k)/t_k.
/// Every node must be positive; uniform and geometric grids both work.
ScalePath run_variational_path(const Signal& f, const FunctionalSpec& J,
                               const TimeGrid& grid, const SolverOptions& options = {});

/// Bregman iteration for the inverse scale space flow dq/ds = f - v,
/// q in ∂J(v), v(0) = 0: with step ds,
///   v_{k+1} = prox(J, f + q_k/ds, 1/ds).u,  q_{k+1} = q_k + ds (f - v_{k+1}).
/// Needs a uniform grid starting at s = 0. v climbs from 0 toward f; once
/// ||f - v_k|| <= 1e-12 ||f|| the remaining nodes reuse v_k.
ScalePath run_inverse_scale_space(const Signal& f, const FunctionalSpec& J,
                                  const TimeGrid& grid,
                                  const SolverOptions& options = {});

} // namespace specdec

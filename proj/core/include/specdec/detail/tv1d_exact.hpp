#pragma once

#include <vector>

namespace specdec::detail {

/// Exact minimizer of
///   1/2 sum_i (u_i - f_i)^2 + gamma sum_i |u_{i+1} - u_i|
/// by the taut string construction: the solution is the discrete
/// derivative of the shortest path through the tube of width 2*gamma
/// around the running sums of f, pinned at both ends.
std::vector<double> tv1d_prox_exact(const std::vector<double>& f, double gamma);

} // namespace specdec::detail

#include "specdec/detail/pdhg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specdec::detail {

PdhgResult run_pdhg(const PdhgProblem& problem, const std::vector<double>& x0,
                    double gap_target, long max_iterations) {
    const double step = 0.99 / problem.operator_norm_bound;
    const double sigma = step, tau = step;

    std::vector<double> x = x0;
    std::vector<double> xbar = x0;
    std::vector<double> y(problem.dual_size, 0.0);
    std::vector<double> kx(problem.dual_size, 0.0);
    std::vector<double> kty(problem.primal_size, 0.0);

    PdhgResult res;
    const long check_every = 16;
    double gap = std::numeric_limits<double>::infinity();

    long it = 0;
    for (; it < max_iterations; ++it) {
        // y <- prox_{sigma F*}(y + sigma K xbar)
        problem.apply_K(xbar, kx);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += sigma * kx[i];
        problem.project_dual(y, sigma);

        // x <- prox_{tau G}(x - tau K^T y), xbar <- 2 x_new - x_old
        problem.apply_Kt(y, kty);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double xold = x[i];
            x[i] -= tau * kty[i];
            xbar[i] = xold;  // stash, finished after the prox
        }
        problem.prox_primal(x, tau);
        for (std::size_t i = 0; i < x.size(); ++i) xbar[i] = 2.0 * x[i] - xbar[i];

        if ((it + 1) % check_every == 0 || it + 1 == max_iterations) {
            gap = problem.primal_value(x) - problem.dual_value(y);
            if (gap <= gap_target) {
                ++it;
                break;
            }
        }
    }

    res.x = std::move(x);
    res.y = std::move(y);
    res.iterations = it;
    res.gap = gap;
    res.converged = gap <= gap_target;
    return res;
}

} // namespace specdec::detail

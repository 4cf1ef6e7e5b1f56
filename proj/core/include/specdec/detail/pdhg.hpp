#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace specdec::detail {

/// First-order primal-dual (Chambolle-Pock) problem
///   min_x G(x) + F(K x)
/// posed through callbacks. `dual_value` must return the value of a FEASIBLE
/// dual point constructed from the iterate y (so that primal - dual is a true
/// optimality gap); `project_dual` is the proximal step of F*, `prox_primal`
/// the one of G.
struct PdhgProblem {
    std::size_t primal_size = 0;
    std::size_t dual_size = 0;
    double operator_norm_bound = 0.0;  // L >= ||K||

    std::function<void(const std::vector<double>& x, std::vector<double>& y)> apply_K;
    std::function<void(const std::vector<double>& y, std::vector<double>& x)> apply_Kt;
    std::function<void(std::vector<double>& x, double tau)> prox_primal;
    std::function<void(std::vector<double>& y, double sigma)> project_dual;
    std::function<double(const std::vector<double>& x)> primal_value;
    std::function<double(const std::vector<double>& y)> dual_value;
};

struct PdhgResult {
    std::vector<double> x;
    std::vector<double> y;
    long iterations = 0;
    double gap = 0.0;
    bool converged = false;
};

/// Runs sigma = tau = 0.99 / L steps until primal_value - dual_value <=
/// gap_target (absolute) or max_iterations is hit. The gap is evaluated
/// periodically; the returned gap is the last one measured.
PdhgResult run_pdhg(const PdhgProblem& problem, const std::vector<double>& x0,
                    double gap_target, long max_iterations);

} // namespace specdec::detail

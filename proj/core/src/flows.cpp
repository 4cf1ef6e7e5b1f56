#include "specdec/flows.hpp"

#include <cmath>
#include <utility>

#include "specdec/errors.hpp"

namespace specdec {

std::string method_name(Method m) {
    switch (m) {
        case Method::gradient_flow: return "gf";
        case Method::variational: return "vm";
        case Method::inverse_scale: return "is";
    }
    return "?";
}

std::optional<Method> parse_method(const std::string& token) {
    if (token == "gf") return Method::gradient_flow;
    if (token == "vm") return Method::variational;
    if (token == "is") return Method::inverse_scale;
    return std::nullopt;
}

namespace {

double plain_sumsq(const Signal& s) {
    double acc = 0.0;
    for (double v : s.values()) acc += v * v;
    return acc;
}

/// Keeps the duality gap of every prox along a path at or below
/// tol * ||f||^2 of the path datum, whatever the per-step datum norm is.
SolverOptions path_options(const SolverOptions& base, double sumsq_f,
                           double sumsq_datum) {
    SolverOptions out = base;
    if (sumsq_f > 0.0 && sumsq_datum > 0.0) out.tol = base.tol * sumsq_f / sumsq_datum;
    return out;
}

[[noreturn]] void rethrow_with_step(const SolverError& e, const char* what,
                                    std::size_t k) {
    throw SolverError(std::string(what) + " at node " + std::to_string(k) + ": " +
                          e.what(),
                      e.residual, e.iterations);
}

} // namespace

ScalePath run_gradient_flow(const Signal& f, const FunctionalSpec& J,
                            const TimeGrid& grid, const SolverOptions& options) {
    J.validate_shape(f);
    if (grid.kind() != GridKind::uniform)
        throw ParameterError("gradient flow needs a uniform time grid");
    if (grid.nodes().front() != 0.0)
        throw ParameterError("gradient flow grid must start at t = 0");
    NullspaceSplit split = remove_nullspace(J, f);
    const double fnorm = norm2(f);
    if (norm2(split.n0) > 1e-8 * fnorm)
        throw ParameterError("gradient flow needs a nullspace-free datum; "
                             "call remove_nullspace first");

    const double tau = grid.step();
    const std::size_t m = grid.nodes().size();
    const double sumsq_f = plain_sumsq(f);

    ScalePath path{Method::gradient_flow, grid, {}, {}, f, std::nullopt};
    path.u.reserve(m);
    path.p.reserve(m);

    path.u.push_back(f);
    if (sumsq_f == 0.0) {
        path.p.push_back(Signal::zeros_like(f));
        path.extinction_index = 0;
    } else {
        try {
            path.p.push_back(prox(J, f, 1e-3 * tau, options).p);
        } catch (const SolverError& e) {
            rethrow_with_step(e, "gradient flow p(0) probe", 0);
        }
    }

    Signal prev = f;
    for (std::size_t k = 1; k < m; ++k) {
        if (path.extinction_index) {
            path.u.push_back(Signal::zeros_like(f));
            path.p.push_back(Signal::zeros_like(f));
            continue;
        }
        ProxResult r;
        try {
            r = prox(J, prev, tau, path_options(options, sumsq_f, plain_sumsq(prev)));
        } catch (const SolverError& e) {
            rethrow_with_step(e, "gradient flow", k);
        }
        if (norm2(r.u) <= extinction_threshold * fnorm) path.extinction_index = k;
        path.u.push_back(r.u);
        path.p.push_back(std::move(r.p));
        prev = std::move(r.u);
    }
    return path;
}

ScalePath run_variational_path(const Signal& f, const FunctionalSpec& J,
                               const TimeGrid& grid, const SolverOptions& options) {
    J.validate_shape(f);
    if (!(grid.nodes().front() > 0.0))
        throw ParameterError("variational path needs strictly positive nodes");
    const double fnorm = norm2(f);

    ScalePath path{Method::variational, grid, {}, {}, f, std::nullopt};
    const std::size_t m = grid.nodes().size();
    path.u.reserve(m);
    path.p.reserve(m);
    if (fnorm == 0.0) path.extinction_index = 0;

    for (std::size_t k = 0; k < m; ++k) {
        const double t = grid.nodes()[k];
        if (path.extinction_index) {
            path.u.push_back(Signal::zeros_like(f));
            path.p.push_back(f * (1.0 / t));
            continue;
        }
        ProxResult r;
        try {
            r = prox(J, f, t, options);
        } catch (const SolverError& e) {
            rethrow_with_step(e, "variational path", k);
        }
        if (norm2(r.u) <= extinction_threshold * fnorm) path.extinction_index = k;
        path.u.push_back(std::move(r.u));
        path.p.push_back(std::move(r.p));
    }
    return path;
}

ScalePath run_inverse_scale_space(const Signal& f, const FunctionalSpec& J,
                                  const TimeGrid& grid,
                                  const SolverOptions& options) {
    J.validate_shape(f);
    if (grid.kind() != GridKind::uniform)
        throw ParameterError("inverse scale space needs a uniform s grid");
    if (grid.nodes().front() != 0.0)
        throw ParameterError("inverse scale space grid must start at s = 0");

    const double ds = grid.step();
    const std::size_t m = grid.nodes().size();
    const double fnorm = norm2(f);
    const double sumsq_f = plain_sumsq(f);

    ScalePath path{Method::inverse_scale, grid, {}, {}, f, std::nullopt};
    path.u.reserve(m);
    path.p.reserve(m);

    Signal v = Signal::zeros_like(f);
    Signal q = Signal::zeros_like(f);
    path.u.push_back(v);
    path.p.push_back(q);
    bool saturated = norm2(f - v) <= 1e-12 * fnorm;

    for (std::size_t k = 1; k < m; ++k) {
        if (!saturated) {
            Signal d = f + q * (1.0 / ds);
            const double sumsq_d = plain_sumsq(d);
            if (sumsq_d == 0.0) {
                v = Signal::zeros_like(f);
            } else {
                try {
                    v = prox(J, d, 1.0 / ds, path_options(options, sumsq_f, sumsq_d)).u;
                } catch (const SolverError& e) {
                    rethrow_with_step(e, "inverse scale space", k);
                }
            }
        }
        q += ds * (f - v);
        path.u.push_back(v);
        path.p.push_back(q);
        if (!saturated && norm2(f - v) <= 1e-12 * fnorm) saturated = true;
    }
    return path;
}

} // namespace specdec

#include "specdec/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "specdec/detail/grid_ops.hpp"
#include "specdec/detail/pdhg.hpp"
#include "specdec/detail/tv1d_exact.hpp"
#include "specdec/errors.hpp"

namespace specdec {

using detail::PdhgProblem;
using detail::PdhgResult;

// ---------------------------------------------------------------------------
// FunctionalSpec

FunctionalSpec FunctionalSpec::tv1d() { return FunctionalSpec(FunctionalKind::tv1d); }
FunctionalSpec FunctionalSpec::tv2d_aniso() {
    return FunctionalSpec(FunctionalKind::tv2d_aniso);
}
FunctionalSpec FunctionalSpec::tv2d_iso() {
    return FunctionalSpec(FunctionalKind::tv2d_iso);
}

FunctionalSpec FunctionalSpec::l1_analysis(std::shared_ptr<const Transform> transform) {
    if (!transform) throw ParameterError("l1_analysis needs a transform");
    FunctionalSpec spec(FunctionalKind::l1_analysis);
    spec.transform_ = std::move(transform);
    return spec;
}

FunctionalSpec FunctionalSpec::tgv2(double beta) {
    if (!(beta > 0.0) || !(beta < 1.0))
        throw ParameterError("tgv2 needs beta in (0, 1), got " + std::to_string(beta));
    FunctionalSpec spec(FunctionalKind::tgv2);
    spec.beta_ = beta;
    return spec;
}

FunctionalSpec FunctionalSpec::collab_linf1() {
    return FunctionalSpec(FunctionalKind::collab_linf1);
}
FunctionalSpec FunctionalSpec::grad_collab_linf1() {
    return FunctionalSpec(FunctionalKind::grad_collab_linf1);
}

double FunctionalSpec::beta() const {
    if (kind_ != FunctionalKind::tgv2) throw ParameterError("beta: not a tgv2 functional");
    return beta_;
}

const Transform& FunctionalSpec::transform() const {
    if (!transform_) throw ParameterError("transform: not an l1_analysis functional");
    return *transform_;
}

std::shared_ptr<const Transform> FunctionalSpec::transform_ptr() const {
    return transform_;
}

std::string FunctionalSpec::name() const {
    switch (kind_) {
        case FunctionalKind::tv1d: return "tv1d";
        case FunctionalKind::tv2d_aniso: return "tv2d_aniso";
        case FunctionalKind::tv2d_iso: return "tv2d_iso";
        case FunctionalKind::l1_analysis:
            return "l1_analysis(" + transform_->name() + ")";
        case FunctionalKind::tgv2: return "tgv2(beta=" + std::to_string(beta_) + ")";
        case FunctionalKind::collab_linf1: return "collab_linf1";
        case FunctionalKind::grad_collab_linf1: return "grad_collab_linf1";
    }
    return "?";
}

NullspaceKind FunctionalSpec::nullspace_kind(const Signal& like) const {
    switch (kind_) {
        case FunctionalKind::tv1d:
        case FunctionalKind::tv2d_aniso:
        case FunctionalKind::tv2d_iso: return NullspaceKind::constants;
        case FunctionalKind::l1_analysis: return NullspaceKind::none;
        case FunctionalKind::tgv2:
            return like.dim() == 1 ? NullspaceKind::affine_1d : NullspaceKind::constants;
        case FunctionalKind::collab_linf1: return NullspaceKind::none;
        case FunctionalKind::grad_collab_linf1: return NullspaceKind::per_column_constants;
    }
    return NullspaceKind::none;
}

void FunctionalSpec::validate_shape(const Signal& f) const {
    switch (kind_) {
        case FunctionalKind::tv1d:
            if (f.dim() != 1 || f.size() < 2)
                throw ParameterError("tv1d needs a 1-D signal with >= 2 samples");
            return;
        case FunctionalKind::tv2d_aniso:
        case FunctionalKind::tv2d_iso:
            if (f.dim() != 2 || f.rows() < 2 || f.cols() < 2)
                throw ParameterError("tv2d needs a 2-D signal, at least 2x2");
            return;
        case FunctionalKind::l1_analysis: {
            const double defect = orthonormality_defect(*transform_, f);
            if (defect > 1e-10)
                throw ParameterError("l1_analysis transform failed the orthonormality "
                                     "probe, defect " + std::to_string(defect));
            return;
        }
        case FunctionalKind::tgv2:
            if (f.dim() == 1) {
                if (f.size() < 3) throw ParameterError("tgv2 needs >= 3 samples in 1-D");
            } else if (f.rows() < 3 || f.cols() < 3) {
                throw ParameterError("tgv2 needs at least 3x3 in 2-D");
            }
            return;
        case FunctionalKind::collab_linf1:
            return;  // rows are groups; a 1-D signal is a single group
        case FunctionalKind::grad_collab_linf1:
            if (f.dim() != 2 || f.rows() < 2)
                throw ParameterError(
                    "grad_collab_linf1 needs a 2-D ensemble with >= 2 positions");
            return;
    }
    throw ParameterError("unknown functional kind");
}

// ---------------------------------------------------------------------------
// evaluate

namespace {

double sum_abs(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

double tv1d_value(const Signal& u) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) s += std::abs(u[i + 1] - u[i]);
    return s;
}

double tv2d_value(const Signal& u, bool iso) {
    const std::size_t h = u.rows(), w = u.cols();
    double s = 0.0;
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j) {
            const double dx = j + 1 < w ? u.at(i, j + 1) - u.at(i, j) : 0.0;
            const double dy = i + 1 < h ? u.at(i + 1, j) - u.at(i, j) : 0.0;
            s += iso ? std::hypot(dx, dy) : std::abs(dx) + std::abs(dy);
        }
    return u.spacing() * s;  // spacing^2 * |grad| with grad = raw / spacing
}

double collab_value(const Signal& u) {
    const std::size_t groups = u.dim() == 2 ? u.rows() : 1;
    const std::size_t m = u.dim() == 2 ? u.cols() : u.size();
    double s = 0.0;
    for (std::size_t i = 0; i < groups; ++i) {
        double mx = 0.0;
        for (std::size_t j = 0; j < m; ++j) mx = std::max(mx, std::abs(u[i * m + j]));
        s += mx;
    }
    return u.cell() * s;
}

double grad_collab_value(const Signal& u) {
    const std::size_t n = u.rows(), m = u.cols();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double mx = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            mx = std::max(mx, std::abs(u.at(i + 1, j) - u.at(i, j)));
        s += mx;
    }
    return u.spacing() * s;  // spacing^2 * max|grad| with grad = raw / spacing
}

double l1_analysis_value(const FunctionalSpec& J, const Signal& u) {
    return u.cell() * sum_abs(J.transform().forward(u));
}

// Inner minimization of the second-order penalty:
//   m(a) = min_w beta ||a - w||_1 + (1 - beta) ||D w||_1
// with a = grad u. Solved by the same primal-dual scheme as the proxes; the
// dual candidate rho * y with rho = min(1, beta / ||D^T y||_inf) is feasible,
// so the reported gap is a true optimality gap.
double tgv2_inner_min(const std::vector<double>& a, double beta, double h,
                      const SolverOptions& options) {
    const std::size_t n = a.size();
    if (n <= 1) {
        // w = a is feasible and makes both terms vanish when D has no rows.
        return 0.0;
    }

    PdhgProblem prob;
    prob.primal_size = n;
    prob.dual_size = n - 1;
    prob.operator_norm_bound = 2.0 / h;
    prob.apply_K = [h](const std::vector<double>& w, std::vector<double>& y) {
        detail::diff1d(w, y, h);
    };
    prob.apply_Kt = [h](const std::vector<double>& y, std::vector<double>& w) {
        detail::diff1d_adjoint(y, w, h);
    };
    prob.prox_primal = [&a, beta](std::vector<double>& w, double tau) {
        // prox of tau * beta ||a - .||_1
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double e = a[i] - w[i];
            const double shrunk = e > 0.0 ? std::max(e - tau * beta, 0.0)
                                          : std::min(e + tau * beta, 0.0);
            w[i] = a[i] - shrunk;
        }
    };
    const double dual_bound = 1.0 - beta;
    prob.project_dual = [dual_bound](std::vector<double>& y, double) {
        for (double& v : y) v = std::clamp(v, -dual_bound, dual_bound);
    };
    prob.primal_value = [&a, beta, dual_bound, h](const std::vector<double>& w) {
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += std::abs(a[i] - w[i]);
        std::vector<double> dw;
        detail::diff1d(w, dw, h);
        return beta * s + dual_bound * sum_abs(dw);
    };
    prob.dual_value = [&a, beta, h](const std::vector<double>& y) {
        std::vector<double> c;
        detail::diff1d_adjoint(y, c, h);
        double cinf = 0.0;
        for (double v : c) cinf = std::max(cinf, std::abs(v));
        const double rho = cinf > beta ? beta / cinf : 1.0;
        double val = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) val += rho * c[i] * a[i];
        return val;
    };

    double p0 = 0.0;
    for (double v : a) p0 += std::abs(v);
    const double target = options.tol * std::max(1.0, beta * p0);
    PdhgResult res = detail::run_pdhg(prob, a, target, options.max_iterations);
    if (!res.converged)
        throw SolverError("tgv2 inner minimization did not converge", res.gap,
                          res.iterations);
    return prob.primal_value(res.x);
}

double tgv2_value_1d(const Signal& u, double beta, const SolverOptions& options) {
    std::vector<double> a;
    detail::diff1d(u.values(), a, u.spacing());
    return u.cell() * tgv2_inner_min(a, beta, u.spacing(), options);
}

// 2-D analogue with a two-component displacement field on the collocated
// grid (zero padding in the last column/row).
double tgv2_value_2d(const Signal& u, double beta, const SolverOptions& options);

} // namespace

double evaluate(const FunctionalSpec& J, const Signal& u, const SolverOptions& options) {
    J.validate_shape(u);
    switch (J.kind()) {
        case FunctionalKind::tv1d: return tv1d_value(u);
        case FunctionalKind::tv2d_aniso: return tv2d_value(u, false);
        case FunctionalKind::tv2d_iso: return tv2d_value(u, true);
        case FunctionalKind::l1_analysis: return l1_analysis_value(J, u);
        case FunctionalKind::tgv2:
            return u.dim() == 1 ? tgv2_value_1d(u, J.beta(), options)
                                : tgv2_value_2d(u, J.beta(), options);
        case FunctionalKind::collab_linf1: return collab_value(u);
        case FunctionalKind::grad_collab_linf1: return grad_collab_value(u);
    }
    throw ParameterError("unknown functional kind");
}

// ---------------------------------------------------------------------------
// prox

namespace {

ProxResult finish_prox(const FunctionalSpec&, const Signal& f, double t, Signal u,
                       long iterations, double residual) {
    Signal p = f;
    p -= u;
    p *= 1.0 / t;
    return ProxResult{std::move(u), std::move(p), iterations, residual};
}

ProxResult prox_tv1d(const Signal& f, double t) {
    std::vector<double> u = detail::tv1d_prox_exact(f.values(), t / f.spacing());
    Signal out = f;
    out.values() = std::move(u);
    return ProxResult{std::move(out), Signal{}, 0, 0.0};
}

ProxResult prox_l1_analysis(const FunctionalSpec& J, const Signal& f, double t) {
    std::vector<double> z = J.transform().forward(f);
    for (double& v : z)
        v = v > 0.0 ? std::max(v - t, 0.0) : std::min(v + t, 0.0);
    return ProxResult{J.transform().inverse(z, f), Signal{}, 0, 0.0};
}

ProxResult prox_collab(const Signal& f, double t) {
    const std::size_t groups = f.dim() == 2 ? f.rows() : 1;
    const std::size_t m = f.dim() == 2 ? f.cols() : f.size();
    Signal u = f;
    std::vector<double> row(m), scratch;
    for (std::size_t i = 0; i < groups; ++i) {
        for (std::size_t j = 0; j < m; ++j) row[j] = f[i * m + j];
        detail::project_l1_ball_inplace(row.data(), m, t, scratch);
        for (std::size_t j = 0; j < m; ++j) u[i * m + j] = f[i * m + j] - row[j];
    }
    return ProxResult{std::move(u), Signal{}, 0, 0.0};
}

double plain_sq_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

// Shared pieces of the primal-dual prox problems: G(u) = 1/2 ||u - g||^2 on
// the leading block of the primal vector, with any trailing blocks free.
void shrink_toward(std::vector<double>& x, const std::vector<double>& g, double tau) {
    for (std::size_t i = 0; i < g.size(); ++i) x[i] = (x[i] + tau * g[i]) / (1.0 + tau);
}

double fidelity(const std::vector<double>& x, const std::vector<double>& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += (x[i] - g[i]) * (x[i] - g[i]);
    return 0.5 * s;
}

double quadratic_dual(const std::vector<double>& v, const std::vector<double>& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += (-0.5 * v[i] + g[i]) * v[i];
    return s;
}

ProxResult run_prox_pdhg(const FunctionalSpec& J, const Signal& f,
                         const PdhgProblem& prob, const std::vector<double>& x0,
                         const SolverOptions& options) {
    const double target = options.tol * plain_sq_norm(f.values());
    PdhgResult res = detail::run_pdhg(prob, x0, target, options.max_iterations);
    if (!res.converged)
        throw SolverError("prox of " + J.name() + " did not reach the gap target " +
                              std::to_string(target),
                          res.gap * f.cell(), res.iterations);
    Signal u = f;
    std::copy(res.x.begin(), res.x.begin() + long(f.size()), u.values().begin());
    return ProxResult{std::move(u), Signal{}, res.iterations, res.gap * f.cell()};
}

ProxResult prox_tv2d(const FunctionalSpec& J, const Signal& f, double t, bool iso,
                     const SolverOptions& options) {
    const std::size_t h = f.rows(), w = f.cols(), n = h * w;
    const double sp = f.spacing();
    const std::vector<double>& g = f.values();

    PdhgProblem prob;
    prob.primal_size = n;
    prob.dual_size = 2 * n;
    prob.operator_norm_bound = std::sqrt(8.0) / sp;
    prob.apply_K = [=](const std::vector<double>& u, std::vector<double>& y) {
        y.resize(2 * n);
        std::vector<double> tmp(n);
        detail::diff_x(u, tmp, h, w, sp);
        std::copy(tmp.begin(), tmp.end(), y.begin());
        detail::diff_y(u, tmp, h, w, sp);
        std::copy(tmp.begin(), tmp.end(), y.begin() + long(n));
    };
    prob.apply_Kt = [=](const std::vector<double>& y, std::vector<double>& u) {
        u.assign(n, 0.0);
        std::vector<double> part(n), block(y.begin(), y.begin() + long(n));
        detail::diff_x_adjoint(block, part, h, w, sp);
        for (std::size_t i = 0; i < n; ++i) u[i] += part[i];
        std::copy(y.begin() + long(n), y.end(), block.begin());
        detail::diff_y_adjoint(block, part, h, w, sp);
        for (std::size_t i = 0; i < n; ++i) u[i] += part[i];
    };
    prob.prox_primal = [&g](std::vector<double>& x, double tau) {
        shrink_toward(x, g, tau);
    };
    prob.project_dual = [=](std::vector<double>& y, double) {
        if (!iso) {
            for (double& v : y) v = std::clamp(v, -t, t);
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                const double r = std::hypot(y[i], y[i + n]);
                if (r > t) {
                    const double c = t / r;
                    y[i] *= c;
                    y[i + n] *= c;
                }
            }
        }
    };
    prob.primal_value = [=, &g](const std::vector<double>& u) {
        std::vector<double> dx(n), dy(n);
        detail::diff_x(u, dx, h, w, sp);
        detail::diff_y(u, dy, h, w, sp);
        double reg = 0.0;
        if (!iso) {
            reg = sum_abs(dx) + sum_abs(dy);
        } else {
            for (std::size_t i = 0; i < n; ++i) reg += std::hypot(dx[i], dy[i]);
        }
        return fidelity(u, g) + t * reg;
    };
    prob.dual_value = [&prob, &g](const std::vector<double>& y) {
        std::vector<double> v;
        prob.apply_Kt(y, v);
        return quadratic_dual(v, g);
    };

    return run_prox_pdhg(J, f, prob, g, options);
}

ProxResult prox_tgv2_1d(const FunctionalSpec& J, const Signal& f, double t,
                        const SolverOptions& options) {
    const std::size_t n = f.size();
    const double sp = f.spacing();
    const double beta = J.beta();
    const std::vector<double>& g = f.values();
    const double b1 = t * beta, b2 = t * (1.0 - beta);

    PdhgProblem prob;
    prob.primal_size = n + (n - 1);
    prob.dual_size = (n - 1) + (n - 2);
    const double ld2 = 4.0 / (sp * sp);
    prob.operator_norm_bound = std::sqrt(std::max(2.0 * ld2, 2.0 + ld2));
    prob.apply_K = [=](const std::vector<double>& x, std::vector<double>& y) {
        y.resize((n - 1) + (n - 2));
        // y1 = D u - w
        for (std::size_t i = 0; i + 1 < n; ++i)
            y[i] = (x[i + 1] - x[i]) / sp - x[n + i];
        // y2 = D w
        for (std::size_t i = 0; i + 2 < n; ++i)
            y[(n - 1) + i] = (x[n + i + 1] - x[n + i]) / sp;
    };
    prob.apply_Kt = [=](const std::vector<double>& y, std::vector<double>& x) {
        x.assign(n + (n - 1), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            double v = 0.0;
            if (j > 0) v += y[j - 1];
            if (j + 1 < n) v -= y[j];
            x[j] = v / sp;
        }
        for (std::size_t j = 0; j + 1 < n; ++j) {
            double v = -y[j] * sp;  // -y1 contribution, unscaled by h
            if (j > 0) v += y[(n - 1) + j - 1];
            if (j + 2 < n) v -= y[(n - 1) + j];
            x[n + j] = v / sp;
        }
    };
    prob.prox_primal = [&g](std::vector<double>& x, double tau) {
        shrink_toward(x, g, tau);  // only the u block; w is free
    };
    prob.project_dual = [=](std::vector<double>& y, double) {
        for (std::size_t i = 0; i + 1 < n; ++i) y[i] = std::clamp(y[i], -b1, b1);
        for (std::size_t i = 0; i + 2 < n; ++i)
            y[(n - 1) + i] = std::clamp(y[(n - 1) + i], -b2, b2);
    };
    prob.primal_value = [=, &g](const std::vector<double>& x) {
        double reg1 = 0.0, reg2 = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i)
            reg1 += std::abs((x[i + 1] - x[i]) / sp - x[n + i]);
        for (std::size_t i = 0; i + 2 < n; ++i)
            reg2 += std::abs((x[n + i + 1] - x[n + i]) / sp);
        double fid = 0.0;
        for (std::size_t i = 0; i < n; ++i) fid += (x[i] - g[i]) * (x[i] - g[i]);
        return 0.5 * fid + b1 * reg1 + b2 * reg2;
    };
    prob.dual_value = [=, &g](const std::vector<double>& y) {
        // Feasible dual candidate: y1 := rho D2^T y2 (so the w-block
        // optimality holds exactly), rho <= 1 restoring the y1 box.
        std::vector<double> y2(y.begin() + long(n - 1), y.end());
        std::vector<double> c;
        detail::diff1d_adjoint(y2, c, sp);  // length n-1
        double cinf = 0.0;
        for (double v : c) cinf = std::max(cinf, std::abs(v));
        const double rho = cinf > b1 ? b1 / cinf : 1.0;
        std::vector<double> v;
        detail::diff1d_adjoint(c, v, sp);  // D^T c, length n
        for (double& vv : v) vv *= rho;
        return quadratic_dual(v, g);
    };

    std::vector<double> x0(n + (n - 1), 0.0);
    std::copy(g.begin(), g.end(), x0.begin());
    return run_prox_pdhg(J, f, prob, x0, options);
}

ProxResult prox_tgv2_2d(const FunctionalSpec& J, const Signal& f, double t,
                        const SolverOptions& options);

ProxResult prox_grad_collab(const FunctionalSpec& J, const Signal& f, double t,
                            const SolverOptions& options) {
    const std::size_t n = f.rows(), m = f.cols();
    const double sp = f.spacing();
    const std::vector<double>& g = f.values();
    const std::size_t ny = (n - 1) * m;

    PdhgProblem prob;
    prob.primal_size = n * m;
    prob.dual_size = ny;
    prob.operator_norm_bound = 2.0 / sp;
    prob.apply_K = [=](const std::vector<double>& u, std::vector<double>& y) {
        y.resize(ny);
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = 0; j < m; ++j)
                y[i * m + j] = (u[(i + 1) * m + j] - u[i * m + j]) / sp;
    };
    prob.apply_Kt = [=](const std::vector<double>& y, std::vector<double>& u) {
        u.assign(n * m, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                double v = 0.0;
                if (i > 0) v += y[(i - 1) * m + j];
                if (i + 1 < n) v -= y[i * m + j];
                u[i * m + j] = v / sp;
            }
    };
    prob.prox_primal = [&g](std::vector<double>& x, double tau) {
        shrink_toward(x, g, tau);
    };
    prob.project_dual = [=](std::vector<double>& y, double) {
        std::vector<double> scratch;
        for (std::size_t i = 0; i + 1 < n; ++i)
            detail::project_l1_ball_inplace(y.data() + i * m, m, t, scratch);
    };
    prob.primal_value = [=, &g](const std::vector<double>& u) {
        double reg = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            double mx = 0.0;
            for (std::size_t j = 0; j < m; ++j)
                mx = std::max(mx, std::abs(u[(i + 1) * m + j] - u[i * m + j]) / sp);
            reg += mx;
        }
        return fidelity(u, g) + t * reg;
    };
    prob.dual_value = [&prob, &g](const std::vector<double>& y) {
        std::vector<double> v;
        prob.apply_Kt(y, v);
        return quadratic_dual(v, g);
    };

    return run_prox_pdhg(J, f, prob, g, options);
}

} // namespace

ProxResult prox(const FunctionalSpec& J, const Signal& f, double t,
                const SolverOptions& options) {
    J.validate_shape(f);
    if (!(t > 0.0) || !std::isfinite(t))
        throw ParameterError("prox needs t > 0, got " + std::to_string(t));

    ProxResult raw = [&]() -> ProxResult {
        switch (J.kind()) {
            case FunctionalKind::tv1d: return prox_tv1d(f, t);
            case FunctionalKind::tv2d_aniso: return prox_tv2d(J, f, t, false, options);
            case FunctionalKind::tv2d_iso: return prox_tv2d(J, f, t, true, options);
            case FunctionalKind::l1_analysis: return prox_l1_analysis(J, f, t);
            case FunctionalKind::tgv2:
                return f.dim() == 1 ? prox_tgv2_1d(J, f, t, options)
                                    : prox_tgv2_2d(J, f, t, options);
            case FunctionalKind::collab_linf1: return prox_collab(f, t);
            case FunctionalKind::grad_collab_linf1:
                return prox_grad_collab(J, f, t, options);
        }
        throw ParameterError("unknown functional kind");
    }();

    return finish_prox(J, f, t, std::move(raw.u), raw.iterations, raw.residual);
}

Signal subgradient_at_zero_scale(const FunctionalSpec& J, const Signal& f,
                                 double t_probe, const SolverOptions& options) {
    if (!(t_probe > 0.0)) throw ParameterError("t_probe must be positive");
    return prox(J, f, t_probe, options).p;
}

NullspaceSplit remove_nullspace(const FunctionalSpec& J, const Signal& f) {
    J.validate_shape(f);
    return remove_nullspace(f, J.nullspace_kind(f));
}

// ---------------------------------------------------------------------------
// 2-D TGV pieces (kept together at the end; same scheme as 1-D with a
// two-component displacement field and collocated, zero-padded stencils)

namespace {

double tgv2_value_2d_impl(const Signal& u, double beta, const SolverOptions& options) {
    const std::size_t h = u.rows(), w = u.cols(), n = h * w;
    const double sp = u.spacing();
    std::vector<double> ax(n), ay(n);
    detail::diff_x(u.values(), ax, h, w, sp);
    detail::diff_y(u.values(), ay, h, w, sp);

    // min over (wx, wy) of beta ||a - w||_1 + (1 - beta) ||grad w||_1
    PdhgProblem prob;
    prob.primal_size = 2 * n;
    prob.dual_size = 4 * n;
    prob.operator_norm_bound = std::sqrt(8.0) / sp;
    prob.apply_K = [=](const std::vector<double>& x, std::vector<double>& y) {
        y.resize(4 * n);
        std::vector<double> part(n);
        const std::vector<double> wx(x.begin(), x.begin() + long(n));
        const std::vector<double> wy(x.begin() + long(n), x.end());
        detail::diff_x(wx, part, h, w, sp);
        std::copy(part.begin(), part.end(), y.begin());
        detail::diff_y(wx, part, h, w, sp);
        std::copy(part.begin(), part.end(), y.begin() + long(n));
        detail::diff_x(wy, part, h, w, sp);
        std::copy(part.begin(), part.end(), y.begin() + long(2 * n));
        detail::diff_y(wy, part, h, w, sp);
        std::copy(part.begin(), part.end(), y.begin() + long(3 * n));
    };
    prob.apply_Kt = [=](const std::vector<double>& y, std::vector<double>& x) {
        x.assign(2 * n, 0.0);
        std::vector<double> part(n), block(n);
        auto add_adj = [&](std::size_t y_off, bool xdir, std::size_t x_off) {
            std::copy(y.begin() + long(y_off), y.begin() + long(y_off + n), block.begin());
            if (xdir)
                detail::diff_x_adjoint(block, part, h, w, sp);
            else
                detail::diff_y_adjoint(block, part, h, w, sp);
            for (std::size_t i = 0; i < n; ++i) x[x_off + i] += part[i];
        };
        add_adj(0, true, 0);
        add_adj(n, false, 0);
        add_adj(2 * n, true, n);
        add_adj(3 * n, false, n);
    };
    prob.prox_primal = [&ax, &ay, beta, n](std::vector<double>& x, double tau) {
        auto soft = [&](double a, double v) {
            const double e = a - v;
            const double s = e > 0.0 ? std::max(e - tau * beta, 0.0)
                                     : std::min(e + tau * beta, 0.0);
            return a - s;
        };
        for (std::size_t i = 0; i < n; ++i) x[i] = soft(ax[i], x[i]);
        for (std::size_t i = 0; i < n; ++i) x[n + i] = soft(ay[i], x[n + i]);
    };
    const double dual_bound = 1.0 - beta;
    prob.project_dual = [dual_bound](std::vector<double>& y, double) {
        for (double& v : y) v = std::clamp(v, -dual_bound, dual_bound);
    };
    prob.primal_value = [=, &ax, &ay](const std::vector<double>& x) {
        double s1 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s1 += std::abs(ax[i] - x[i]) + std::abs(ay[i] - x[n + i]);
        std::vector<double> y;
        prob.apply_K(x, y);
        return beta * s1 + dual_bound * sum_abs(y);
    };
    prob.dual_value = [=, &ax, &ay](const std::vector<double>& y) {
        std::vector<double> c;
        prob.apply_Kt(y, c);
        double cinf = 0.0;
        for (double v : c) cinf = std::max(cinf, std::abs(v));
        const double rho = cinf > beta ? beta / cinf : 1.0;
        double val = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            val += rho * (c[i] * ax[i] + c[n + i] * ay[i]);
        return val;
    };

    double p0 = sum_abs(ax) + sum_abs(ay);
    const double target = options.tol * std::max(1.0, beta * p0);
    std::vector<double> x0(2 * n);
    std::copy(ax.begin(), ax.end(), x0.begin());
    std::copy(ay.begin(), ay.end(), x0.begin() + long(n));
    PdhgResult res = detail::run_pdhg(prob, x0, target, options.max_iterations);
    if (!res.converged)
        throw SolverError("tgv2 inner minimization did not converge", res.gap,
                          res.iterations);
    return u.cell() * prob.primal_value(res.x);
}

ProxResult prox_tgv2_2d_impl(const FunctionalSpec& J, const Signal& f, double t,
                             const SolverOptions& options) {
    const std::size_t h = f.rows(), w = f.cols(), n = h * w;
    const double sp = f.spacing();
    const double beta = J.beta();
    const std::vector<double>& g = f.values();
    const double b1 = t * beta, b2 = t * (1.0 - beta);

    PdhgProblem prob;
    prob.primal_size = 3 * n;   // u, wx, wy
    prob.dual_size = 6 * n;     // grad u - w (2), grad wx (2), grad wy (2)
    const double lg2 = 8.0 / (sp * sp);
    prob.operator_norm_bound = std::sqrt(std::max(2.0 * lg2, 2.0 + lg2));
    prob.apply_K = [=](const std::vector<double>& x, std::vector<double>& y) {
        y.resize(6 * n);
        std::vector<double> part(n);
        const std::vector<double> u(x.begin(), x.begin() + long(n));
        const std::vector<double> wx(x.begin() + long(n), x.begin() + long(2 * n));
        const std::vector<double> wy(x.begin() + long(2 * n), x.end());
        detail::diff_x(u, part, h, w, sp);
        for (std::size_t i = 0; i < n; ++i) y[i] = part[i] - wx[i];
        detail::diff_y(u, part, h, w, sp);
        for (std::size_t i = 0; i < n; ++i) y[n + i] = part[i] - wy[i];
        detail::diff_x(wx, part, h, w, sp);
        std::copy(part.begin(), part.end(), y.begin() + long(2 * n));
        detail::diff_y(wx, part, h, w, sp);
        std::copy(part.begin(), part.end(), y.begin() + long(3 * n));
        detail::diff_x(wy, part, h, w, sp);
        std::copy(part.begin(), part.end(), y.begin() + long(4 * n));
        detail::diff_y(wy, part, h, w, sp);
        std::copy(part.begin(), part.end(), y.begin() + long(5 * n));
    };
    prob.apply_Kt = [=](const std::vector<double>& y, std::vector<double>& x) {
        x.assign(3 * n, 0.0);
        std::vector<double> part(n), block(n);
        auto add_adj = [&](std::size_t y_off, bool xdir, std::size_t x_off) {
            std::copy(y.begin() + long(y_off), y.begin() + long(y_off + n), block.begin());
            if (xdir)
                detail::diff_x_adjoint(block, part, h, w, sp);
            else
                detail::diff_y_adjoint(block, part, h, w, sp);
            for (std::size_t i = 0; i < n; ++i) x[x_off + i] += part[i];
        };
        add_adj(0, true, 0);
        add_adj(n, false, 0);
        for (std::size_t i = 0; i < n; ++i) x[n + i] -= y[i];
        for (std::size_t i = 0; i < n; ++i) x[2 * n + i] -= y[n + i];
        add_adj(2 * n, true, n);
        add_adj(3 * n, false, n);
        add_adj(4 * n, true, 2 * n);
        add_adj(5 * n, false, 2 * n);
    };
    prob.prox_primal = [&g, n](std::vector<double>& x, double tau) {
        for (std::size_t i = 0; i < n; ++i) x[i] = (x[i] + tau * g[i]) / (1.0 + tau);
    };
    prob.project_dual = [=](std::vector<double>& y, double) {
        for (std::size_t i = 0; i < 2 * n; ++i) y[i] = std::clamp(y[i], -b1, b1);
        for (std::size_t i = 2 * n; i < 6 * n; ++i) y[i] = std::clamp(y[i], -b2, b2);
    };
    prob.primal_value = [=, &g](const std::vector<double>& x) {
        std::vector<double> y;
        prob.apply_K(x, y);
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < 2 * n; ++i) s1 += std::abs(y[i]);
        for (std::size_t i = 2 * n; i < 6 * n; ++i) s2 += std::abs(y[i]);
        double fid = 0.0;
        for (std::size_t i = 0; i < n; ++i) fid += (x[i] - g[i]) * (x[i] - g[i]);
        return 0.5 * fid + b1 * s1 + b2 * s2;
    };
    prob.dual_value = [=, &g](const std::vector<double>& y) {
        std::vector<double> part(n), block(n), cx(n, 0.0), cy(n, 0.0);
        auto add_adj = [&](std::size_t y_off, bool xdir, std::vector<double>& c) {
            std::copy(y.begin() + long(y_off), y.begin() + long(y_off + n), block.begin());
            if (xdir)
                detail::diff_x_adjoint(block, part, h, w, sp);
            else
                detail::diff_y_adjoint(block, part, h, w, sp);
            for (std::size_t i = 0; i < n; ++i) c[i] += part[i];
        };
        add_adj(2 * n, true, cx);
        add_adj(3 * n, false, cx);
        add_adj(4 * n, true, cy);
        add_adj(5 * n, false, cy);
        double cinf = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            cinf = std::max({cinf, std::abs(cx[i]), std::abs(cy[i])});
        const double rho = cinf > b1 ? b1 / cinf : 1.0;
        std::vector<double> v(n, 0.0);
        detail::diff_x_adjoint(cx, part, h, w, sp);
        for (std::size_t i = 0; i < n; ++i) v[i] += rho * part[i];
        detail::diff_y_adjoint(cy, part, h, w, sp);
        for (std::size_t i = 0; i < n; ++i) v[i] += rho * part[i];
        return quadratic_dual(v, g);
    };

    std::vector<double> x0(3 * n, 0.0);
    std::copy(g.begin(), g.end(), x0.begin());
    return run_prox_pdhg(J, f, prob, x0, options);
}

double tgv2_value_2d(const Signal& u, double beta, const SolverOptions& options) {
    return tgv2_value_2d_impl(u, beta, options);
}

ProxResult prox_tgv2_2d(const FunctionalSpec& J, const Signal& f, double t,
                        const SolverOptions& options) {
    return prox_tgv2_2d_impl(J, f, t, options);
}

} // namespace

} // namespace specdec

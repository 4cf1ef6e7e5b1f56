#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "specdec/detail/rng.hpp"
#include "specdec/errors.hpp"
#include "specdec/functionals.hpp"
#include "specdec/oracles.hpp"
#include "specdec/signal.hpp"
#include "specdec/transforms.hpp"
#include "test_util.hpp"

using namespace specdec;
using testutil::sig;
using testutil::sig2d;

namespace {

struct Case {
    FunctionalSpec J;
    Signal f;
    bool iterative; // prox runs a primal-dual loop rather than a closed form
};

// One representative (functional, admissible signal) pair per kind.
std::vector<Case> make_cases(std::uint64_t seed) {
    std::vector<Case> cases;
    cases.push_back({FunctionalSpec::tv1d(), testutil::random_signal(9, seed), false});
    cases.push_back(
        {FunctionalSpec::tv2d_aniso(), testutil::random_signal_2d(4, 5, seed + 1), true});
    cases.push_back(
        {FunctionalSpec::tv2d_iso(), testutil::random_signal_2d(5, 4, seed + 2), true});
    cases.push_back({FunctionalSpec::l1_analysis(dct_transform()),
                     testutil::random_signal(8, seed + 3), false});
    cases.push_back({FunctionalSpec::tgv2(0.3), testutil::random_signal(7, seed + 4), true});
    cases.push_back(
        {FunctionalSpec::collab_linf1(), testutil::random_signal_2d(3, 4, seed + 5), false});
    cases.push_back({FunctionalSpec::grad_collab_linf1(),
                     testutil::random_signal_2d(6, 3, seed + 6), true});
    return cases;
}

} // namespace

TEST_CASE("evaluate: pinned values") {
    CHECK(evaluate(FunctionalSpec::tv1d(), sig({1, 1, -1, -1})) == doctest::Approx(2.0));
    CHECK(evaluate(FunctionalSpec::collab_linf1(), sig2d({3, -1, 0, 2}, 2, 2)) ==
          doctest::Approx(5.0));

    // Anisotropic vs isotropic on a single corner pixel.
    Signal corner = sig2d({1, 0, 0, 0}, 2, 2);
    CHECK(evaluate(FunctionalSpec::tv2d_aniso(), corner) == doctest::Approx(2.0));
    CHECK(evaluate(FunctionalSpec::tv2d_iso(), corner) ==
          doctest::Approx(std::sqrt(2.0)));

    // A shared jump across two stacked signals costs its largest magnitude.
    Signal jump = sig2d({0, 0, 1, 2}, 2, 2);
    CHECK(evaluate(FunctionalSpec::grad_collab_linf1(), jump) == doctest::Approx(2.0));

    // l1 in an orthonormal basis: sum of coefficient magnitudes.
    auto id = identity_transform();
    CHECK(evaluate(FunctionalSpec::l1_analysis(id), sig({3, -1, 0.5})) ==
          doctest::Approx(4.5));
}

TEST_CASE("evaluate: zero in, zero out") {
    for (const Case& c : make_cases(1000)) {
        const std::string kind_name = c.J.name();
        CAPTURE(kind_name);
        CHECK(evaluate(c.J, Signal::zeros_like(c.f)) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("one-homogeneity") {
    for (const Case& c : make_cases(2000)) {
        const std::string kind_name = c.J.name();
        CAPTURE(kind_name);
        const double base = evaluate(c.J, c.f);
        REQUIRE(base > 0.0);
        for (double scale : {-2.0, -1.0, 0.5, 3.0}) {
            const double got = evaluate(c.J, scale * c.f);
            const double want = std::abs(scale) * base;
            // The tgv2 value comes from an inner minimization solved to
            // tolerance; everything else is a closed-form sum.
            const double tol = c.J.name().rfind("tgv2", 0) == 0 ? 1e-6 : 1e-12;
            CHECK(std::abs(got - want) <= tol * want);
        }
    }
}

TEST_CASE("prox: pinned values") {
    SUBCASE("soft shrinkage in an orthonormal basis") {
        ProxResult r = prox(FunctionalSpec::l1_analysis(identity_transform()),
                            sig({3, 1, 0.5}), 2.0);
        CHECK(r.u[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(r.u[1] == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(r.u[2] == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(r.iterations == 0);
        CHECK(r.residual == 0.0);
    }

    SUBCASE("two-level step dies at its extinction scale") {
        ProxResult r = prox(FunctionalSpec::tv1d(), sig({1, 1, -1, -1}), 2.0);
        CHECK(norm2(r.u) <= 1e-14);
    }

    SUBCASE("single-group sup norm prox clips the peak") {
        ProxResult r = prox(FunctionalSpec::collab_linf1(), sig({3, -1}), 1.0);
        CHECK(r.u[0] == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(r.u[1] == doctest::Approx(-1.0).epsilon(1e-14));
    }

    SUBCASE("scale must be positive and finite") {
        Signal f = sig({1, 2, 3});
        CHECK_THROWS_AS(prox(FunctionalSpec::tv1d(), f, 0.0), ParameterError);
        CHECK_THROWS_AS(prox(FunctionalSpec::tv1d(), f, -1.0), ParameterError);
        CHECK_THROWS_AS(prox(FunctionalSpec::tv1d(), f,
                             std::numeric_limits<double>::infinity()),
                        ParameterError);
    }
}

TEST_CASE("prox result invariants") {
    SolverOptions tight;
    tight.tol = 1e-10;
    for (const Case& c : make_cases(3000)) {
        const std::string kind_name = c.J.name();
        CAPTURE(kind_name);
        const double t = 0.35;
        ProxResult r = prox(c.J, c.f, t, tight);

        // u + t p rebuilds the datum by construction.
        Signal rebuilt = r.u + t * r.p;
        CHECK(testutil::max_abs_diff(rebuilt, c.f) <= 1e-12 * (1.0 + sup_norm(c.f)));

        // p is a subgradient at u: J(u) = <p, u> for one-homogeneous J.
        const double ju = evaluate(c.J, r.u, tight);
        const double pu = inner(r.p, r.u);
        const double scale = 1.0 + inner(c.f, c.f);
        CHECK(std::abs(ju - pu) <= (c.iterative ? 2e-4 : 1e-10) * scale);

        if (!c.iterative) {
            CHECK(r.iterations == 0);
            CHECK(r.residual == 0.0);
        } else {
            CHECK(r.iterations > 0);
        }
    }
}

TEST_CASE("subgradient inequality on random probes") {
    SolverOptions tight;
    tight.tol = 1e-10;
    for (const Case& c : make_cases(4000)) {
        const std::string kind_name = c.J.name();
        CAPTURE(kind_name);
        ProxResult r = prox(c.J, c.f, 0.5, tight);
        const double ju = evaluate(c.J, r.u, tight);
        const double slack = (c.iterative ? 2e-4 : 1e-9) * (1.0 + inner(c.f, c.f));

        detail::Rng rng(4711);
        for (int probe = 0; probe < 100; ++probe) {
            Signal w = Signal::zeros_like(c.f);
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = 2.0 * rng.normal();
            const double lhs = inner(r.p, w - r.u);
            const double rhs = evaluate(c.J, w, tight) - ju;
            CHECK(lhs <= rhs + slack);
        }
    }
}

TEST_CASE("prox scaling law") {
    for (const Case& c : make_cases(5000)) {
        const std::string kind_name = c.J.name();
        CAPTURE(kind_name);
        const double t = 0.4, scale = 2.5;
        SolverOptions tight;
        tight.tol = 1e-11;
        Signal a = prox(c.J, scale * c.f, scale * t, tight).u;
        Signal b = scale * prox(c.J, c.f, t, tight).u;
        const double tol = c.iterative ? 1e-5 : 1e-12;
        CHECK(norm2(a - b) <= tol * (1.0 + norm2(b)));
    }
}

TEST_CASE("monotone shrinkage in scale") {
    for (const Case& c : make_cases(6000)) {
        const std::string kind_name = c.J.name();
        CAPTURE(kind_name);
        double prev = norm2(c.f);
        for (double t : {0.1, 0.2, 0.4, 0.8, 1.6}) {
            double cur = norm2(prox(c.J, c.f, t).u);
            CHECK(cur <= prev + 1e-6 * (1.0 + prev));
            prev = cur;
        }
    }
}

TEST_CASE("soft shrinkage composes as a semigroup") {
    for (auto transform : {identity_transform(), dct_transform()}) {
        FunctionalSpec J = FunctionalSpec::l1_analysis(transform);
        Signal f = testutil::random_signal(10, 321);
        Signal two_step = prox(J, prox(J, f, 0.3).u, 0.45).u;
        Signal one_step = prox(J, f, 0.75).u;
        CHECK(testutil::max_abs_diff(two_step, one_step) <= 1e-12);
    }
}

TEST_CASE("prox matches the bruteforce oracle in low dimension") {
    SolverOptions tight;
    tight.tol = 1e-12;
    tight.max_iterations = 200000;
    detail::Rng rng(8080);

    auto check_kind = [&](const FunctionalSpec& J, const Signal& shape_like) {
        const std::string kind_name = J.name();
        CAPTURE(kind_name);
        for (int trial = 0; trial < 3; ++trial) {
            Signal f = Signal::zeros_like(shape_like);
            for (std::size_t i = 0; i < f.size(); ++i) f[i] = 1.5 * rng.normal();
            const double t = rng.uniform(0.2, 0.8);
            Signal exact = prox(J, f, t, tight).u;
            Signal rough = bruteforce_prox(J, f, t, 1e-7);
            CHECK(testutil::max_abs_diff(exact, rough) <= 1e-4);
        }
    };

    check_kind(FunctionalSpec::tv1d(), Signal::zeros(4));
    check_kind(FunctionalSpec::tv2d_aniso(), Signal::zeros(std::size_t{2}, std::size_t{2}));
    check_kind(FunctionalSpec::tv2d_iso(), Signal::zeros(std::size_t{2}, std::size_t{2}));
    check_kind(FunctionalSpec::l1_analysis(dct_transform()), Signal::zeros(4));
    check_kind(FunctionalSpec::l1_analysis(identity_transform()), Signal::zeros(3));
    check_kind(FunctionalSpec::tgv2(0.4), Signal::zeros(4));
    check_kind(FunctionalSpec::collab_linf1(), Signal::zeros(std::size_t{2}, std::size_t{2}));
    check_kind(FunctionalSpec::grad_collab_linf1(), Signal::zeros(std::size_t{2}, std::size_t{2}));
}

TEST_CASE("tgv2 inner minimization matches its enumeration oracle") {
    detail::Rng rng(616);
    for (double beta : {0.1, 0.5, 0.9}) {
        for (std::size_t n : {3u, 5u, 7u}) {
            std::vector<double> v(n);
            for (auto& x : v) x = rng.normal();
            Signal u(v, 0.5);
            SolverOptions tight;
            tight.tol = 1e-11;
            tight.max_iterations = 400000;
            const double got = evaluate(FunctionalSpec::tgv2(beta), u, tight);
            const double want = tgv2_value_bruteforce(u, beta);
            CHECK(got == doctest::Approx(want).epsilon(1e-6));
        }
    }
}

TEST_CASE("tgv2 kills affine signals in 1d and constants in 2d") {
    std::vector<double> ramp(8);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 1.5 - 0.3 * double(i);
    CHECK(evaluate(FunctionalSpec::tgv2(0.25), sig(ramp)) <= 1e-10);

    Signal flat = sig2d(std::vector<double>(12, 2.0), 3, 4);
    CHECK(evaluate(FunctionalSpec::tgv2(0.25), flat) <= 1e-10);
}

TEST_CASE("subgradient at the datum") {
    SUBCASE("zero signal has the zero subgradient") {
        Signal p = subgradient_at_zero_scale(FunctionalSpec::tv1d(), Signal::zeros(6), 0.1);
        CHECK(norm2(p) == 0.0);
    }

    SUBCASE("two-level step") {
        Signal p =
            subgradient_at_zero_scale(FunctionalSpec::tv1d(), sig({1, 1, -1, -1}), 0.1);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(p[i] == doctest::Approx(i < 2 ? 0.5 : -0.5).epsilon(1e-12));
    }

    SUBCASE("sign pattern for separable l1") {
        Signal p = subgradient_at_zero_scale(
            FunctionalSpec::l1_analysis(identity_transform()), sig({3, 1, 0.5}), 0.1);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(p[i] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("construction and shape validation") {
    CHECK_THROWS_AS(FunctionalSpec::tgv2(0.0), ParameterError);
    CHECK_THROWS_AS(FunctionalSpec::tgv2(1.0), ParameterError);
    CHECK_THROWS_AS(FunctionalSpec::tgv2(1.5), ParameterError);
    CHECK_THROWS_AS(FunctionalSpec::l1_analysis(nullptr), ParameterError);

    Signal one_d = sig({1, 2, 3});
    Signal two_d = sig2d({1, 2, 3, 4}, 2, 2);
    CHECK_THROWS_AS(evaluate(FunctionalSpec::tv1d(), two_d), ParameterError);
    CHECK_THROWS_AS(evaluate(FunctionalSpec::tv2d_aniso(), one_d), ParameterError);
    CHECK_THROWS_AS(evaluate(FunctionalSpec::tgv2(0.3), sig({1, 2})), ParameterError);
    CHECK_THROWS_AS(
        evaluate(FunctionalSpec::grad_collab_linf1(), sig2d({1, 2}, 1, 2)),
        ParameterError);
}

namespace {

// Deliberately non-orthonormal analysis operator.
class DoubledIdentity final : public Transform {
public:
    std::string name() const override { return "doubled"; }
    std::vector<double> forward(const Signal& u) const override {
        std::vector<double> z = u.values();
        for (auto& x : z) x *= 2.0;
        return z;
    }
    Signal inverse(const std::vector<double>& z, const Signal& like) const override {
        Signal out = Signal::zeros_like(like);
        for (std::size_t i = 0; i < z.size(); ++i) out[i] = 2.0 * z[i];
        return out;
    }
};

} // namespace

TEST_CASE("non-orthonormal transforms are rejected") {
    FunctionalSpec J = FunctionalSpec::l1_analysis(std::make_shared<DoubledIdentity>());
    CHECK_THROWS_AS(evaluate(J, sig({1, 2, 3})), ParameterError);
    CHECK_THROWS_AS(prox(J, sig({1, 2, 3}), 0.5), ParameterError);
}

TEST_CASE("nullspace kinds per functional") {
    Signal one_d = sig({1, 2, 3, 4});
    Signal two_d = sig2d({1, 2, 3, 4, 5, 6}, 3, 2);

    CHECK(FunctionalSpec::tv1d().nullspace_kind(one_d) == NullspaceKind::constants);
    CHECK(FunctionalSpec::tv2d_iso().nullspace_kind(two_d) == NullspaceKind::constants);
    CHECK(FunctionalSpec::l1_analysis(dct_transform()).nullspace_kind(one_d) ==
          NullspaceKind::none);
    CHECK(FunctionalSpec::tgv2(0.5).nullspace_kind(one_d) == NullspaceKind::affine_1d);
    CHECK(FunctionalSpec::tgv2(0.5).nullspace_kind(two_d) == NullspaceKind::constants);
    CHECK(FunctionalSpec::collab_linf1().nullspace_kind(two_d) == NullspaceKind::none);
    CHECK(FunctionalSpec::grad_collab_linf1().nullspace_kind(two_d) ==
          NullspaceKind::per_column_constants);
}

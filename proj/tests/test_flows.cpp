#include <cmath>
#include <vector>

#include "doctest.h"
#include "specdec/errors.hpp"
#include "specdec/flows.hpp"
#include "specdec/functionals.hpp"
#include "specdec/signal.hpp"
#include "specdec/time_grid.hpp"
#include "specdec/transforms.hpp"
#include "test_util.hpp"

using namespace specdec;
using testutil::sig;

namespace {

const Signal kStep({1.0, 1.0, -1.0, -1.0}); // lambda f in dJ_TV(f), lambda = 1/2

} // namespace

TEST_CASE("gradient flow shrinks an eigenvector linearly to extinction") {
    TimeGrid grid = TimeGrid::uniform(0.0, 3.0, 13); // step 0.25
    ScalePath path = run_gradient_flow(kStep, FunctionalSpec::tv1d(), grid);

    REQUIRE(path.u.size() == 13);
    for (std::size_t k = 0; k < 13; ++k) {
        const double t = grid[k];
        const double c = std::max(1.0 - 0.5 * t, 0.0);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(path.u[k][i] == doctest::Approx(c * kStep[i]).epsilon(1e-12));
        if (k >= 1 && t <= 2.0) {
            for (std::size_t i = 0; i < 4; ++i)
                CHECK(path.p[k][i] == doctest::Approx(0.5 * kStep[i]).epsilon(1e-12));
        }
    }
    REQUIRE(path.extinction_index.has_value());
    CHECK(*path.extinction_index == 8); // t = 2
}

TEST_CASE("variational path evaluates the prox at each node independently") {
    TimeGrid grid = TimeGrid::geometric(0.1, 6.0, 24);
    ScalePath path = run_variational_path(kStep, FunctionalSpec::tv1d(), grid);

    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double c = std::max(1.0 - 0.5 * grid[k], 0.0);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(path.u[k][i] == doctest::Approx(c * kStep[i]).epsilon(1e-12));
    }
    REQUIRE(path.extinction_index.has_value());
    CHECK(grid[*path.extinction_index] >= 2.0);
    CHECK((*path.extinction_index == 0 ||
           grid[*path.extinction_index - 1] < 2.0));

    // Past extinction the subgradient is the datum over the scale.
    for (std::size_t k = *path.extinction_index; k < grid.size(); ++k)
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(path.p[k][i] == doctest::Approx(kStep[i] / grid[k]).epsilon(1e-12));
}

TEST_CASE("variational path tends to the datum as the scale vanishes") {
    Signal f = testutil::random_signal(20, 2024);
    TimeGrid grid(GridKind::geometric, {1e-6, 1e-5, 1e-4});
    ScalePath path = run_variational_path(f, FunctionalSpec::tv1d(), grid);
    CHECK(norm2(path.u[0] - f) <= 1e-4 * (1.0 + norm2(f)));
}

TEST_CASE("variational path shrinks transform coefficients") {
    auto dct = dct_transform();
    Signal f = dct->inverse({3.0, 1.0, 0.5}, Signal::zeros(3));
    TimeGrid grid(GridKind::uniform, {0.25, 0.5, 0.75});
    ScalePath path =
        run_variational_path(f, FunctionalSpec::l1_analysis(dct), grid);

    std::vector<double> z = dct->forward(path.u[2]); // t = 0.75
    CHECK(z[0] == doctest::Approx(2.25).epsilon(1e-12));
    CHECK(z[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(z[2]) <= 1e-12);
}

TEST_CASE("inverse scale space builds an eigenvector up as a staircase") {
    TimeGrid grid = TimeGrid::uniform(0.0, 1.5, 16); // ds = 0.1, lambda = 0.5 on-node
    ScalePath path = run_inverse_scale_space(kStep, FunctionalSpec::tv1d(), grid);

    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double s = grid[k];
        for (std::size_t i = 0; i < 4; ++i) {
            const double want_v = s <= 0.5 + 1e-12 ? 0.0 : kStep[i];
            const double want_q = std::min(s, 0.5) * kStep[i];
            CHECK(path.u[k][i] == doctest::Approx(want_v).epsilon(1e-12));
            CHECK(path.p[k][i] == doctest::Approx(want_q).epsilon(1e-12));
        }
    }
    CHECK(!path.extinction_index.has_value());
}

TEST_CASE("inverse scale space recovers separable components at s = 1/|coef|") {
    FunctionalSpec J = FunctionalSpec::l1_analysis(identity_transform());
    Signal f({2.0, -1.0});
    TimeGrid grid = TimeGrid::uniform(0.0, 1.25, 26); // ds = 0.05
    ScalePath path = run_inverse_scale_space(f, J, grid);

    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double s = grid[k];
        if (s < 0.5 - 1e-12) CHECK(std::abs(path.u[k][0]) <= 1e-12);
        if (s > 0.5 + 0.05 + 1e-12)
            CHECK(path.u[k][0] == doctest::Approx(2.0).epsilon(1e-12));
        if (s < 1.0 - 1e-12) CHECK(std::abs(path.u[k][1]) <= 1e-12);
        if (s > 1.0 + 0.05 + 1e-12)
            CHECK(path.u[k][1] == doctest::Approx(-1.0).epsilon(1e-12));
    }
}

TEST_CASE("gradient flow dissipates both the functional and the norm") {
    Signal f = testutil::zero_mean(testutil::random_signal(32, 515));
    FunctionalSpec J = FunctionalSpec::tv1d();
    TimeGrid grid = TimeGrid::uniform(0.0, 8.0, 161);
    ScalePath path = run_gradient_flow(f, J, grid);

    double prev_j = evaluate(J, path.u[0]);
    double prev_n = norm2(path.u[0]);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double jk = evaluate(J, path.u[k]);
        const double nk = norm2(path.u[k]);
        CHECK(jk <= prev_j + 1e-10);
        CHECK(nk <= prev_n + 1e-10);
        prev_j = jk;
        prev_n = nk;

        // p is a subgradient at u: one-homogeneity ties them together.
        CHECK(std::abs(inner(path.p[k], path.u[k]) - jk) <= 1e-10 * (1.0 + jk));
    }
}

TEST_CASE("gradient flow dissipation rate matches the subgradient norm") {
    // Backward Euler satisfies
    //   0 <= J(u_k) - J(u_{k+1}) - tau ||p_{k+1}||^2
    //      <= tau ||p_{k+1}|| (||p_k|| - ||p_{k+1}||),
    // so the aggregated defect telescopes to at most tau ||p_1||^2.
    Signal f = testutil::zero_mean(testutil::random_signal(24, 99));
    FunctionalSpec J = FunctionalSpec::tv1d();
    const double tau = 0.05;
    TimeGrid grid = TimeGrid::uniform(0.0, 10.0, 201);
    ScalePath path = run_gradient_flow(f, J, grid);

    double aggregate = 0.0;
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
        const double jk = evaluate(J, path.u[k]);
        const double jk1 = evaluate(J, path.u[k + 1]);
        const double rate = inner(path.p[k + 1], path.p[k + 1]);
        aggregate += std::abs(jk1 - jk + tau * rate);
    }
    const double p1_sq = inner(path.p[1], path.p[1]);
    CHECK(aggregate <= tau * p1_sq + 1e-8);
}

TEST_CASE("inverse scale space converges to the datum monotonically") {
    Signal f = testutil::random_signal(16, 77); // mean not removed on purpose
    FunctionalSpec J = FunctionalSpec::tv1d();
    TimeGrid grid = TimeGrid::uniform(0.0, 60.0, 601);
    ScalePath path = run_inverse_scale_space(f, J, grid);

    const double fnorm = norm2(f);
    double prev = fnorm;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double res = norm2(path.u[k] - f);
        CHECK(res <= prev + 1e-10);
        prev = res;
    }
    CHECK(prev <= 0.01 * fnorm);
}

TEST_CASE("flow path of a shrinkage semigroup equals the per-node prox") {
    auto dct = dct_transform();
    FunctionalSpec J = FunctionalSpec::l1_analysis(dct);
    Signal f = testutil::random_signal(12, 3141);

    TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 11);
    ScalePath gf = run_gradient_flow(f, J, grid);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        Signal direct = prox(J, f, grid[k]).u;
        CHECK(testutil::max_abs_diff(gf.u[k], direct) <= 1e-12);
    }
}

TEST_CASE("zero datum short-circuits every flow") {
    Signal z = Signal::zeros(6);
    FunctionalSpec J = FunctionalSpec::tv1d();

    ScalePath gf = run_gradient_flow(z, J, TimeGrid::uniform(0.0, 1.0, 5));
    REQUIRE(gf.extinction_index.has_value());
    CHECK(*gf.extinction_index == 0);
    for (const Signal& u : gf.u) CHECK(norm2(u) == 0.0);

    ScalePath is = run_inverse_scale_space(z, J, TimeGrid::uniform(0.0, 1.0, 5));
    for (const Signal& v : is.u) CHECK(norm2(v) == 0.0);
}

TEST_CASE("flow preconditions") {
    Signal f = testutil::zero_mean(testutil::random_signal(8, 5));
    FunctionalSpec J = FunctionalSpec::tv1d();

    CHECK_THROWS_AS(run_gradient_flow(f, J, TimeGrid::geometric(0.1, 1.0, 5)),
                    ParameterError);
    CHECK_THROWS_AS(run_gradient_flow(f, J, TimeGrid::uniform(0.5, 1.0, 5)),
                    ParameterError);
    CHECK_THROWS_AS(
        run_gradient_flow(f + sig({1, 1, 1, 1, 1, 1, 1, 1}), J,
                          TimeGrid::uniform(0.0, 1.0, 5)),
        ParameterError);
    CHECK_THROWS_AS(run_variational_path(f, J, TimeGrid::uniform(0.0, 1.0, 5)),
                    ParameterError);
    CHECK_THROWS_AS(run_inverse_scale_space(f, J, TimeGrid::geometric(0.1, 1.0, 5)),
                    ParameterError);
    CHECK_THROWS_AS(run_inverse_scale_space(f, J, TimeGrid::uniform(0.5, 1.0, 5)),
                    ParameterError);
}

TEST_CASE("iterative prox backends survive a full path to extinction") {
    Signal f = testutil::random_signal_2d(8, 8, 404);
    NullspaceSplit split = remove_nullspace(FunctionalSpec::tv2d_aniso(), f);
    TimeGrid grid = TimeGrid::uniform(0.0, 12.0, 49);
    ScalePath path = run_gradient_flow(split.f0, FunctionalSpec::tv2d_aniso(), grid);
    CHECK(norm2(path.u.back()) <= 0.5 * norm2(split.f0));
}

#include "sobex/error.hpp"
#include "sobex/field.hpp"
#include "sobex/radial.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace sobex;

namespace {

constexpr double pi = std::numbers::pi;

Mask full_block(int m, double h) {
    Mask mk;
    mk.nx = mk.ny = m;
    mk.h = h;
    mk.inside.assign(static_cast<size_t>(m) * m, 1);
    mk.count = m * m;
    return mk;
}

} // namespace

TEST_CASE("rasterize counts and areas") {
    const Mask sq = rasterize(Domain::rectangle(1.0, 1.0), 0.25);
    CHECK(sq.count == 16);
    CHECK(sq.area() == doctest::Approx(1.0));

    const Mask disk = rasterize(Domain::ball(2, 1.0), 1.0 / 64);
    CHECK(std::abs(disk.area() - pi) <= 0.05 * pi);

    const Mask ell = rasterize(Domain::ellipse(2.0, 1.0), 1.0 / 64);
    CHECK(std::abs(ell.area() - 2.0 * pi) <= 0.05 * 2.0 * pi);

    CHECK_THROWS_AS(rasterize(Domain::rectangle(1.0, 0.01), 1.0), Error);
    CHECK_THROWS_AS(rasterize(Domain::ball(3, 1.0), 0.25), Error);
}

TEST_CASE("square ground state at moderate resolution") {
    std::vector<double> trace;
    FlowParams fp;
    fp.trace = &trace;
    const ScalarField f = minimize_quotient(rasterize(Domain::rectangle(1.0, 1.0), 1.0 / 64), 2.0, fp);
    CHECK(std::abs(f.quotient - 2.0 * pi * pi) <= 0.002 * 2.0 * pi * pi);

    // the quotient is non-increasing across accepted steps
    for (size_t i = 1; i < trace.size(); ++i)
        CHECK(trace[i] <= trace[i - 1] * (1.0 + 1e-13));

    // reported value is the quotient of the returned field
    CHECK(f.quotient == doctest::Approx(quotient_value(f, 2.0)).epsilon(1e-13));

    // 8-fold symmetry of the ground state
    const int m = f.mask.nx;
    double worst = 0.0, mx = f.max_value();
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            worst = std::max(worst, std::abs(f.at(i, j) - f.at(j, i)));
            worst = std::max(worst, std::abs(f.at(i, j) - f.at(m - 1 - i, j)));
        }
    CHECK(worst <= 1e-3 * mx);

    // homogeneity of the quotient
    ScalarField g = f;
    for (double& v : g.values)
        v *= 3.0;
    CHECK(quotient_value(g, 2.0) == doctest::Approx(f.quotient).epsilon(1e-12));
    for (double& v : g.values)
        v /= 6.0;
    CHECK(quotient_value(g, 2.0) == doctest::Approx(f.quotient).epsilon(1e-12));
}

TEST_CASE("disk ground state matches the Bessel constant") {
    const ScalarField f = solve_field(Domain::ball(2, 1.0), 2.0, 1.0 / 64);
    const double j01 = oracle::first_j0_zero();
    CHECK(std::abs(f.quotient - j01 * j01) <= 0.01 * j01 * j01);
}

TEST_CASE("hand-computed quotient on a 3x3 block") {
    ScalarField f;
    f.mask = full_block(3, 1.0 / 3);
    f.p = 2.0;
    f.values.assign(25, 0.0);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            f.at(i, j) = 1.0;
    f.at(1, 1) = 2.0;
    // interior pairs contribute 4, boundary edges 2*12, denominator 12 h^2
    CHECK(quotient_value(f, 2.0) == doctest::Approx(21.0).epsilon(1e-13));
}

TEST_CASE("exact discrete eigenvector has zero residual") {
    const int m = 24;
    ScalarField f;
    f.mask = full_block(m, 1.0 / m);
    f.p = 2.0;
    f.values.assign(static_cast<size_t>(m + 2) * (m + 2), 0.0);
    const double h = 1.0 / m;
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            f.at(i, j) = std::sin(pi * (i + 0.5) * h) * std::sin(pi * (j + 0.5) * h);
    const double mu = (2.0 - 2.0 * std::cos(pi * h)) / (h * h);
    CHECK(pde_residual(f, 2.0 * mu, 2.0) <= 1e-10);

    // random positive field is far from solving the equation
    ScalarField g = f;
    unsigned s = 12345;
    for (double& v : g.values)
        if (v != 0.0)
            v = 0.5 + (s = s * 1664525u + 1013904223u) * 2.3e-10;
    CHECK(pde_residual(g, 2.0 * mu, 2.0) > 0.1);
}

TEST_CASE("converged field has small residual") {
    const ScalarField f = solve_field(Domain::rectangle(1.0, 1.0), 2.0, 1.0 / 64);
    CHECK(pde_residual(f, f.lambda, 2.0) <= 2e-2);
}

TEST_CASE("mesh refinement shrinks the eigenvalue gap") {
    const double exact = 2.0 * pi * pi;
    const ScalarField a = solve_field(Domain::rectangle(1.0, 1.0), 2.0, 1.0 / 32);
    const ScalarField b = solve_field(Domain::rectangle(1.0, 1.0), 2.0, 1.0 / 64);
    const double ea = std::abs(a.quotient - exact);
    const double eb = std::abs(b.quotient - exact);
    CHECK(ea / eb >= 2.0);
}

TEST_CASE("faber-krahn direction at equal area") {
    const ScalarField sq = solve_field(Domain::rectangle(1.0, 1.0), 2.0, 1.0 / 64);
    const ScalarField dk = solve_field(Domain::ball(2, 1.0 / std::sqrt(pi)), 2.0, 1.0 / 64);
    CHECK(sq.quotient > dk.quotient);
}

TEST_CASE("p = 3 solve and general-exponent path") {
    const ScalarField f = solve_field(Domain::rectangle(1.0, 1.0), 3.0, 1.0 / 32);
    CHECK(f.quotient > 0.0);
    CHECK(f.integral_pow(3.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(f.lambda == doctest::Approx(f.quotient * std::pow(f.integral_pow(3.0), -1.0 / 3.0))
                          .epsilon(1e-12));
    CHECK(pde_residual(f, f.lambda, 3.0) <= 5e-2);
}

TEST_CASE("flow error paths") {
    FlowParams fp;
    fp.max_iters = 3;
    CHECK_THROWS_AS(minimize_quotient(rasterize(Domain::rectangle(1.0, 1.0), 1.0 / 16), 2.0, fp),
                    Error);
    ScalarField empty;
    empty.mask = full_block(4, 0.25);
    empty.p = 2.0;
    empty.values.assign(36, 0.0);
    CHECK_THROWS_AS(quotient_value(empty, 2.0), Error);
}

#include <cmath>
#include <limits>

#include "doctest.h"

#include "bdar/optim.hpp"

using Eigen::VectorXd;

TEST_CASE("quadratic bowl is solved to tight tolerance") {
    // f = 0.5 (x - c)' A (x - c) with A = diag(1, 10, 100).
    VectorXd c(3);
    c << 1.0, -2.0, 3.0;
    VectorXd diag(3);
    diag << 1.0, 10.0, 100.0;
    auto fg = [&](const VectorXd& x, VectorXd& g) {
        g = diag.asDiagonal() * (x - c);
        return 0.5 * (x - c).dot(g);
    };
    const auto res = bdar::minimize_bfgs(fg, VectorXd::Zero(3));
    CHECK(res.converged);
    CHECK((res.x - c).lpNorm<Eigen::Infinity>() < 1e-6);
    CHECK(res.f < 1e-10);
}

TEST_CASE("rosenbrock valley") {
    auto fg = [](const VectorXd& x, VectorXd& g) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        g.resize(2);
        g[0] = -2.0 * a - 400.0 * x[0] * b;
        g[1] = 200.0 * b;
        return a * a + 100.0 * b * b;
    };
    VectorXd x0(2);
    x0 << -1.2, 1.0;
    bdar::OptimOptions opts;
    opts.max_iters = 500;
    const auto res = bdar::minimize_bfgs(fg, x0, opts);
    CHECK(res.converged);
    CHECK(std::abs(res.x[0] - 1.0) < 1e-5);
    CHECK(std::abs(res.x[1] - 1.0) < 1e-5);
}

TEST_CASE("optimization is deterministic") {
    auto fg = [](const VectorXd& x, VectorXd& g) {
        g.resize(2);
        g[0] = std::cos(x[0]) + 0.2 * x[0];
        g[1] = 2.0 * x[1];
        return std::sin(x[0]) + 0.1 * x[0] * x[0] + x[1] * x[1];
    };
    VectorXd x0(2);
    x0 << 2.0, -1.0;
    const auto a = bdar::minimize_bfgs(fg, x0);
    const auto b = bdar::minimize_bfgs(fg, x0);
    CHECK(a.f == b.f);
    CHECK(a.x == b.x);
    CHECK(a.iters == b.iters);
}

TEST_CASE("non-finite start is reported, not propagated") {
    auto fg = [](const VectorXd& x, VectorXd& g) {
        g = 2.0 * x;
        return std::numeric_limits<double>::quiet_NaN();
    };
    const auto res = bdar::minimize_bfgs(fg, VectorXd::Ones(2));
    CHECK_FALSE(res.converged);
    CHECK(std::isinf(res.f));
}

TEST_CASE("line search stays inside the finite region") {
    // log(x) + 1/x is finite only for x > 0; minimum at x = 1.
    auto fg = [](const VectorXd& x, VectorXd& g) {
        if (x[0] <= 0.0) {
            g.resize(1);
            g[0] = 0.0;
            return std::numeric_limits<double>::infinity();
        }
        g.resize(1);
        g[0] = 1.0 / x[0] - 1.0 / (x[0] * x[0]);
        return std::log(x[0]) + 1.0 / x[0];
    };
    VectorXd x0(1);
    x0 << 5.0;
    const auto res = bdar::minimize_bfgs(fg, x0);
    CHECK(res.converged);
    CHECK(std::abs(res.x[0] - 1.0) < 1e-6);
}

TEST_CASE("iteration budget is honoured") {
    auto fg = [](const VectorXd& x, VectorXd& g) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        g.resize(2);
        g[0] = -2.0 * a - 400.0 * x[0] * b;
        g[1] = 200.0 * b;
        return a * a + 100.0 * b * b;
    };
    VectorXd x0(2);
    x0 << -1.2, 1.0;
    bdar::OptimOptions opts;
    opts.max_iters = 3;
    const auto res = bdar::minimize_bfgs(fg, x0, opts);
    CHECK(res.iters <= 3);
    CHECK_FALSE(res.converged);
}

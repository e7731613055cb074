#ifndef BDAR_OPTIM_HPP
#define BDAR_OPTIM_HPP

#include <Eigen/Dense>
#include <functional>

namespace bdar {

struct OptimOptions {
    int max_iters = 200;
    /// Stop when the gradient infinity norm falls below tolerance * (1 + |f|).
    double tolerance = 1e-8;
};

struct OptimResult {
    Eigen::VectorXd x;
    double f = 0.0;
    Eigen::VectorXd grad;
    int iters = 0;
    bool converged = false;
};

/// Objective callback: returns f(x) and fills grad (same size as x).
using ObjectiveFn = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Dense BFGS with Armijo backtracking.  Fully deterministic: no randomness,
/// fixed evaluation order, curvature updates skipped when s'y is too small.
/// Non-finite trial values are rejected by the line search, so the method
/// stays inside the finite region around a finite start.
OptimResult minimize_bfgs(const ObjectiveFn& fg, const Eigen::VectorXd& x0,
                          const OptimOptions& opts = {});

} // namespace bdar

#endif

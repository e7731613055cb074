#include "bdar/optim.hpp"

#include <cmath>
#include <limits>

namespace bdar {

namespace {
constexpr double kArmijoSlope = 1e-4;
constexpr double kBacktrack = 0.5;
constexpr int kMaxBacktracks = 60;
} // namespace

OptimResult minimize_bfgs(const ObjectiveFn& fg, const Eigen::VectorXd& x0,
                          const OptimOptions& opts) {
    const Eigen::Index dim = x0.size();
    OptimResult res;
    res.x = x0;
    res.grad.resize(dim);
    res.f = fg(res.x, res.grad);
    if (!std::isfinite(res.f)) {
        res.f = std::numeric_limits<double>::infinity();
        return res;
    }

    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(dim, dim);
    Eigen::VectorXd dir(dim), x_new(dim), g_new(dim), s(dim), yv(dim);

    for (int it = 0; it < opts.max_iters; ++it) {
        res.iters = it;
        if (res.grad.lpNorm<Eigen::Infinity>() <= opts.tolerance * (1.0 + std::abs(res.f))) {
            res.converged = true;
            return res;
        }

        dir.noalias() = -(H * res.grad);
        double slope = dir.dot(res.grad);
        if (!(slope < 0.0)) {
            H.setIdentity();
            dir = -res.grad;
            slope = dir.dot(res.grad);
            if (!(slope < 0.0)) break;  // gradient numerically zero
        }

        double step = 1.0;
        double f_new = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            x_new = res.x + step * dir;
            f_new = fg(x_new, g_new);
            if (std::isfinite(f_new) && f_new <= res.f + kArmijoSlope * step * slope) {
                accepted = true;
                break;
            }
            step *= kBacktrack;
        }
        if (!accepted) break;  // descent direction exhausted at machine scale

        s = x_new - res.x;
        yv = g_new - res.grad;
        const double sy = s.dot(yv);

        const bool stalled =
            std::abs(res.f - f_new) <= 1e-14 * (1.0 + std::abs(res.f)) &&
            s.lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + res.x.lpNorm<Eigen::Infinity>());

        res.x = x_new;
        res.f = f_new;
        res.grad = g_new;
        if (stalled) break;

        if (sy > 1e-10 * s.norm() * yv.norm()) {
            const double rho = 1.0 / sy;
            // H <- (I - rho s y') H (I - rho y s') + rho s s'
            Eigen::VectorXd Hy = H * yv;
            const double yHy = yv.dot(Hy);
            H.noalias() -= rho * (Hy * s.transpose() + s * Hy.transpose());
            H.noalias() += (rho * rho * yHy + rho) * (s * s.transpose());
        }
    }

    res.converged =
        res.grad.lpNorm<Eigen::Infinity>() <= opts.tolerance * (1.0 + std::abs(res.f));
    return res;
}

} // namespace bdar

#include "bdar/inference.hpp"

#include <cmath>
#include <string>

#include "bdar/errors.hpp"
#include "bdar/likelihood.hpp"
#include "bdar/regime.hpp"

namespace bdar {

MomentEstimates estimate_moments(const std::vector<double>& std_residuals) {
    if (std_residuals.size() < 30)
        throw InsufficientDataError("moment estimation needs at least 30 residuals, got " +
                                    std::to_string(std_residuals.size()));
    double m3 = 0.0;
    double m4 = 0.0;
    for (const double e : std_residuals) {
        const double e2 = e * e;
        m3 += e2 * e;
        m4 += e2 * e2;
    }
    const double n = static_cast<double>(std_residuals.size());
    return {m3 / n, m4 / n};
}

namespace {

// Inverts a symmetric positive-definite block, rejecting near-singular ones.
Eigen::MatrixXd invert_spd_block(const Eigen::MatrixXd& block, const char* name) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
    if (es.info() != Eigen::Success)
        throw SingularityError(std::string("eigendecomposition failed for block ") + name);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double lo = ev.minCoeff();
    const double hi = ev.maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e12)
        throw SingularityError(std::string("block ") + name +
                               " is singular or ill-conditioned (condition number above 1e12)");
    return es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

} // namespace

AsymptoticCovariance asymptotic_se(const FitResult& fit, const TimeSeries& y) {
    const BdarParams& params = fit.params;
    const int p = params.p;
    const int q = p + 1;
    if (fit.n1 == 0 || fit.n2 == 0)
        throw InsufficientDataError("asymptotic covariance needs both regimes nonempty");

    const LikelihoodWorkspace ws = make_workspace(y, p);
    const RegimePath path = compute_regime_path(y, params.r_lower, params.r_upper, params.d);
    const double n = static_cast<double>(ws.n);

    Eigen::MatrixXd A1 = Eigen::MatrixXd::Zero(q, q), A2 = Eigen::MatrixXd::Zero(q, q);
    Eigen::MatrixXd B1 = Eigen::MatrixXd::Zero(q, q), B2 = Eigen::MatrixXd::Zero(q, q);
    Eigen::MatrixXd D1 = Eigen::MatrixXd::Zero(q, q), D2 = Eigen::MatrixXd::Zero(q, q);
    Eigen::VectorXd Yrow(q), Xrow(q);

    for (std::size_t t = 1; t <= ws.n; ++t) {
        const bool lower = path.labels[ws.n0 + t - 1] != 0;
        const double* mrow = ws.mean_row(t);
        const double* vrow = ws.var_row(t);
        for (int j = 0; j < q; ++j) {
            Yrow[j] = mrow[j];
            Xrow[j] = vrow[j];
        }
        const Eigen::VectorXd& alpha = lower ? params.alpha1 : params.alpha2;
        double h = alpha[0];
        for (int j = 1; j <= p; ++j) h += alpha[j] * vrow[j];
        const double invh = 1.0 / h;
        Eigen::MatrixXd& A = lower ? A1 : A2;
        Eigen::MatrixXd& B = lower ? B1 : B2;
        Eigen::MatrixXd& D = lower ? D1 : D2;
        A.noalias() += (Yrow * Yrow.transpose()) * invh;
        B.noalias() += (Xrow * Xrow.transpose()) * (invh * invh);
        D.noalias() += (Yrow * Xrow.transpose()) * (invh * std::sqrt(invh));
    }
    A1 /= n; A2 /= n; B1 /= n; B2 /= n; D1 /= n; D2 /= n;

    const MomentEstimates mom = estimate_moments(fit.standardized_residuals);

    AsymptoticCovariance out;
    out.kappa3 = mom.kappa3;
    out.kappa4 = mom.kappa4;

    const int dim = 4 * q;
    out.omega = Eigen::MatrixXd::Zero(dim, dim);
    out.omega.block(0, 0, q, q) = A1;
    out.omega.block(q, q, q, q) = 0.5 * B1;
    out.omega.block(2 * q, 2 * q, q, q) = A2;
    out.omega.block(3 * q, 3 * q, q, q) = 0.5 * B2;

    const double c3 = 0.5 * mom.kappa3;
    const double c4 = 0.25 * (mom.kappa4 - 1.0);
    out.sigma = Eigen::MatrixXd::Zero(dim, dim);
    out.sigma.block(0, 0, q, q) = A1;
    out.sigma.block(0, q, q, q) = c3 * D1;
    out.sigma.block(q, 0, q, q) = c3 * D1.transpose();
    out.sigma.block(q, q, q, q) = c4 * B1;
    out.sigma.block(2 * q, 2 * q, q, q) = A2;
    out.sigma.block(2 * q, 3 * q, q, q) = c3 * D2;
    out.sigma.block(3 * q, 2 * q, q, q) = c3 * D2.transpose();
    out.sigma.block(3 * q, 3 * q, q, q) = c4 * B2;

    Eigen::MatrixXd omega_inv = Eigen::MatrixXd::Zero(dim, dim);
    omega_inv.block(0, 0, q, q) = invert_spd_block(A1, "A1");
    omega_inv.block(q, q, q, q) = invert_spd_block(0.5 * B1, "B1");
    omega_inv.block(2 * q, 2 * q, q, q) = invert_spd_block(A2, "A2");
    omega_inv.block(3 * q, 3 * q, q, q) = invert_spd_block(0.5 * B2, "B2");

    out.cov_lambda = omega_inv * out.sigma * omega_inv / n;
    // Exact symmetry keeps the diagonal clean for the square roots below.
    out.cov_lambda = 0.5 * (out.cov_lambda + out.cov_lambda.transpose()).eval();

    out.se.resize(dim);
    for (int i = 0; i < dim; ++i) out.se[i] = std::sqrt(std::max(0.0, out.cov_lambda(i, i)));
    return out;
}

} // namespace bdar

#ifndef BDAR_INFERENCE_HPP
#define BDAR_INFERENCE_HPP

#include <Eigen/Dense>
#include <vector>

#include "bdar/estimator.hpp"
#include "bdar/types.hpp"

namespace bdar {

struct MomentEstimates {
    double kappa3 = 0.0;
    double kappa4 = 0.0;
};

/// Raw third and fourth sample moments of standardized residuals.
/// Requires at least 30 residuals.
MomentEstimates estimate_moments(const std::vector<double>& std_residuals);

/// Plug-in large-sample covariance of the regression coefficients, ordered
/// (phi1, alpha1, phi2, alpha2).  The thresholds and delay get no standard
/// errors: they converge at rate n with a non-Gaussian limit.
struct AsymptoticCovariance {
    /// diag(A1, 0.5 B1, A2, 0.5 B2), blocks of size p+1.
    Eigen::MatrixXd omega;
    /// diag(Sigma1, Sigma2) with the kappa3 cross blocks.
    Eigen::MatrixXd sigma;
    /// omega^{-1} sigma omega^{-1} / n.
    Eigen::MatrixXd cov_lambda;
    double kappa3 = 0.0;
    double kappa4 = 0.0;
    /// sqrt of cov_lambda's diagonal, length 4p+4.
    Eigen::VectorXd se;
};

/// Estimates A_i, B_i, D_i by sample averages weighted by the fitted regime
/// indicator, assembles the sandwich, and returns per-coefficient SEs.
/// Throws SingularityError naming the block when an omega block is not
/// positive definite enough to invert (condition number above 1e12).
AsymptoticCovariance asymptotic_se(const FitResult& fit, const TimeSeries& y);

} // namespace bdar

#endif

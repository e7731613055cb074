#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "bdar/errors.hpp"
#include "bdar/estimator.hpp"
#include "bdar/inference.hpp"
#include "bdar/likelihood.hpp"
#include "bdar/rng.hpp"
#include "bdar/simulate.hpp"

namespace {

bdar::BdarParams reference_dgp() {
    bdar::BdarParams pr;
    pr.p = 2;
    pr.d = 4;
    pr.phi1.resize(3);
    pr.alpha1.resize(3);
    pr.phi2.resize(3);
    pr.alpha2.resize(3);
    pr.phi1 << -0.1, 0.2, 0.1;
    pr.alpha1 << 0.1, 0.3, 0.05;
    pr.phi2 << 0.1, -0.2, 0.3;
    pr.alpha2 << 0.05, 0.2, 0.1;
    pr.r_lower = -0.1;
    pr.r_upper = 0.15;
    return pr;
}

// Fit the inner problem at the true thresholds: covariance tests do not
// need the profile search.
bdar::FitResult fit_at_truth(const bdar::TimeSeries& y, const bdar::BdarParams& truth) {
    const auto cell = bdar::fit_lambda_given_thresholds(y, truth.p, truth.r_lower,
                                                        truth.r_upper, truth.d);
    bdar::FitResult out;
    out.params = truth;
    out.params.phi1 = cell.phi1;
    out.params.alpha1 = cell.alpha1;
    out.params.phi2 = cell.phi2;
    out.params.alpha2 = cell.alpha2;
    const auto ll = bdar::neg2_loglik(out.params, y);
    out.neg2_loglik = ll.total;
    out.per_term = ll.per_term;
    out.n1 = ll.n1;
    out.n2 = ll.n2;
    out.converged = cell.converged;
    bdar::RegimePath path =
        bdar::compute_regime_path(y, out.params.r_lower, out.params.r_upper, out.params.d);
    out.standardized_residuals.resize(y.sample_size());
    for (std::size_t t = 1; t <= y.sample_size(); ++t) {
        const auto cm = bdar::conditional_moments(out.params, y, path, t);
        out.standardized_residuals[t - 1] =
            (y.values[y.pre_sample_len + t - 1] - cm.mu) / std::sqrt(cm.h);
    }
    return out;
}

}  // namespace

TEST_CASE("moment estimates recover gaussian skew and kurtosis") {
    bdar::Rng rng(11);
    std::vector<double> z(200000);
    for (auto& v : z) v = rng.normal();
    const auto m = bdar::estimate_moments(z);
    CHECK(std::abs(m.kappa3) < 0.05);
    CHECK(m.kappa4 == doctest::Approx(3.0).epsilon(0.05));

    std::vector<double> tiny(10, 0.5);
    CHECK_THROWS_AS(bdar::estimate_moments(tiny), bdar::InsufficientDataError);
}

TEST_CASE("sandwich covariance matches a numerical-derivative cross-check") {
    const auto truth = reference_dgp();
    bdar::Rng rng(424242, 0);
    const auto y = bdar::simulate(truth, 2000, bdar::InnovationSpec::standard_normal(), rng);
    const auto fit = fit_at_truth(y, truth);
    const auto cov = bdar::asymptotic_se(fit, y);

    const int dim = truth.n_lambda();
    REQUIRE(cov.cov_lambda.rows() == dim);
    REQUIRE(cov.se.size() == dim);

    // Numerical Hessian H and per-term score outer product V of the loss at
    // the optimum, labels held fixed; the large-sample covariance is then
    // H^{-1} V H^{-1}.  Independent of the analytic A/B/D assembly.
    const auto ws = bdar::make_workspace(y, truth.p);
    const auto path =
        bdar::compute_regime_path(y, truth.r_lower, truth.r_upper, truth.d);
    auto loss_at = [&](const std::vector<double>& lam) {
        auto pr = fit.params;
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v[i] = lam[i];
        pr.set_lambda(v);
        return bdar::neg2_loglik_given_labels(pr, ws, path.labels, false).total;
    };
    std::vector<double> lam0(dim);
    {
        const auto v = fit.params.lambda();
        for (int i = 0; i < dim; ++i) lam0[i] = v[i];
    }
    const auto Hn = oracles::fd_hessian(loss_at, lam0, 1e-4);

    Eigen::MatrixXd H(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) H(i, j) = Hn[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(dim, dim);
    const std::size_t n = y.sample_size();
    for (std::size_t t = 1; t <= n; ++t) {
        auto term_at = [&](const std::vector<double>& lam) {
            auto pr = fit.params;
            Eigen::VectorXd v(dim);
            for (int i = 0; i < dim; ++i) v[i] = lam[i];
            pr.set_lambda(v);
            const auto cm = bdar::conditional_moments(pr, y, path, t);
            const double u = y.values[y.pre_sample_len + t - 1] - cm.mu;
            return std::log(cm.h) + u * u / cm.h;
        };
        const auto g = oracles::fd_gradient(term_at, lam0, 1e-6);
        Eigen::VectorXd gv(dim);
        for (int i = 0; i < dim; ++i) gv[i] = g[static_cast<std::size_t>(i)];
        V += gv * gv.transpose();
    }

    const Eigen::MatrixXd Hinv = H.inverse();
    const Eigen::MatrixXd cov_num = Hinv * V * Hinv;

    for (int i = 0; i < dim; ++i) {
        const double got = cov.cov_lambda(i, i);
        const double want = cov_num(i, i);
        CHECK(got == doctest::Approx(want).epsilon(0.10));
        CHECK(cov.se[i] == doctest::Approx(std::sqrt(want)).epsilon(0.05));
    }
}

TEST_CASE("standard errors shrink like one over root n") {
    const auto truth = reference_dgp();
    bdar::Rng r1(7, 1), r2(7, 2);
    const auto y1 = bdar::simulate(truth, 1000, bdar::InnovationSpec::standard_normal(), r1);
    const auto y2 = bdar::simulate(truth, 4000, bdar::InnovationSpec::standard_normal(), r2);
    const auto c1 = bdar::asymptotic_se(fit_at_truth(y1, truth), y1);
    const auto c2 = bdar::asymptotic_se(fit_at_truth(y2, truth), y2);
    // Quadrupling n should roughly halve each SE.
    for (int i = 0; i < truth.n_lambda(); ++i) {
        const double ratio = c2.se[i] / c1.se[i];
        CHECK(ratio > 0.3);
        CHECK(ratio < 0.8);
    }
}

TEST_CASE("gaussian innovations give block-diagonal sigma") {
    const auto truth = reference_dgp();
    bdar::Rng rng(99, 5);
    const auto y = bdar::simulate(truth, 3000, bdar::InnovationSpec::standard_normal(), rng);
    const auto cov = bdar::asymptotic_se(fit_at_truth(y, truth), y);
    // kappa3 ~ 0 for symmetric innovations: the mean/variance cross blocks
    // of sigma are O(kappa3) and must be comparatively small.
    CHECK(std::abs(cov.kappa3) < 0.15);
    const int b = truth.p + 1;
    const double on_diag = cov.sigma.topLeftCorner(b, b).cwiseAbs().maxCoeff();
    const double off_diag = cov.sigma.block(0, b, b, b).cwiseAbs().maxCoeff();
    CHECK(off_diag < 0.25 * on_diag);
}

TEST_CASE("covariance matrix is symmetric positive semidefinite") {
    const auto truth = reference_dgp();
    bdar::Rng rng(13, 3);
    const auto y = bdar::simulate(truth, 1500, bdar::InnovationSpec::standard_normal(), rng);
    const auto cov = bdar::asymptotic_se(fit_at_truth(y, truth), y);
    CHECK((cov.cov_lambda - cov.cov_lambda.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov.cov_lambda);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("an empty regime cannot be given standard errors") {
    const auto truth = reference_dgp();
    bdar::Rng rng(5, 5);
    const auto y = bdar::simulate(truth, 500, bdar::InnovationSpec::standard_normal(), rng);
    auto fit = fit_at_truth(y, truth);
    fit.n2 = 0;  // simulate a degenerate fitted path
    CHECK_THROWS_AS(bdar::asymptotic_se(fit, y), bdar::Error);
}

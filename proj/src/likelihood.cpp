#include "bdar/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bdar/errors.hpp"

namespace bdar {

LikelihoodWorkspace make_workspace(const TimeSeries& y, int p) {
    if (p < 0) throw InvalidParamsError("autoregressive order must be >= 0");
    y.validate();
    if (y.pre_sample_len < static_cast<std::size_t>(p))
        throw InsufficientDataError("pre-sample of length " + std::to_string(y.pre_sample_len) +
                                    " cannot supply " + std::to_string(p) + " lags");
    const std::size_t n = y.sample_size();
    if (n == 0) throw InsufficientDataError("no observations beyond the pre-sample");

    LikelihoodWorkspace ws;
    ws.p = p;
    ws.n = n;
    ws.n0 = y.pre_sample_len;
    ws.targets.resize(n);
    const std::size_t stride = static_cast<std::size_t>(p) + 1;
    ws.mean_reg.resize(n * stride);
    ws.var_reg.resize(n * stride);
    for (std::size_t t = 1; t <= n; ++t) {
        const std::size_t i = ws.n0 + t - 1;
        ws.targets[t - 1] = y.values[i];
        double* mrow = ws.mean_reg.data() + (t - 1) * stride;
        double* vrow = ws.var_reg.data() + (t - 1) * stride;
        mrow[0] = 1.0;
        vrow[0] = 1.0;
        for (int j = 1; j <= p; ++j) {
            const double lag = y.values[i - static_cast<std::size_t>(j)];
            mrow[j] = lag;
            vrow[j] = lag * lag;
        }
    }
    return ws;
}

ConditionalMoments conditional_moments(const BdarParams& params, const TimeSeries& y,
                                       const RegimePath& regime, std::size_t t) {
    const std::size_t n = y.sample_size();
    if (t < 1 || t > n)
        throw InvalidParamsError("term index " + std::to_string(t) + " outside [1, " +
                                 std::to_string(n) + "]");
    if (y.pre_sample_len < static_cast<std::size_t>(params.p))
        throw InsufficientDataError("pre-sample too short for order " + std::to_string(params.p));
    if (regime.labels.size() != y.size())
        throw InvalidParamsError("regime path length does not match series length");

    const std::size_t i = y.pre_sample_len + t - 1;
    const bool lower = regime.labels[i] != 0;
    const Eigen::VectorXd& phi = lower ? params.phi1 : params.phi2;
    const Eigen::VectorXd& alpha = lower ? params.alpha1 : params.alpha2;
    ConditionalMoments m;
    m.mu = phi[0];
    m.h = alpha[0];
    for (int j = 1; j <= params.p; ++j) {
        const double lag = y.values[i - static_cast<std::size_t>(j)];
        m.mu += phi[j] * lag;
        m.h += alpha[j] * lag * lag;
    }
    if (!(m.h > 0.0))
        throw InvalidParamsError("conditional variance not positive at term " + std::to_string(t));
    return m;
}

Neg2LogLik neg2_loglik_given_labels(const BdarParams& params, const LikelihoodWorkspace& ws,
                                    const std::vector<std::uint8_t>& labels,
                                    bool want_per_term) {
    if (params.p != ws.p) throw InvalidParamsError("workspace order does not match parameters");
    if (labels.size() != ws.n0 + ws.n)
        throw InvalidParamsError("label vector length does not match workspace");

    Neg2LogLik out;
    if (want_per_term) out.per_term.resize(ws.n);
    const int p = ws.p;
    const double* phi1 = params.phi1.data();
    const double* phi2 = params.phi2.data();
    const double* al1 = params.alpha1.data();
    const double* al2 = params.alpha2.data();

    double total = 0.0;
    for (std::size_t t = 1; t <= ws.n; ++t) {
        const bool low = labels[ws.n0 + t - 1] != 0;
        const double* phi = low ? phi1 : phi2;
        const double* alpha = low ? al1 : al2;
        const double* mrow = ws.mean_row(t);
        const double* vrow = ws.var_row(t);
        double mu = phi[0];
        double h = alpha[0];
        for (int j = 1; j <= p; ++j) {
            mu += phi[j] * mrow[j];
            h += alpha[j] * vrow[j];
        }
        if (!(h > 0.0))
            throw InvalidParamsError("conditional variance not positive at term " +
                                     std::to_string(t));
        const double u = ws.targets[t - 1] - mu;
        const double term = std::log(h) + u * u / h;
        total += term;
        if (want_per_term) out.per_term[t - 1] = term;
        if (low) ++out.n1; else ++out.n2;
    }
    out.total = total;
    return out;
}

Neg2LogLik neg2_loglik(const BdarParams& params, const TimeSeries& y) {
    params.validate();
    const std::size_t need = static_cast<std::size_t>(std::max(params.p, params.d));
    if (y.pre_sample_len < need)
        throw InsufficientDataError("pre-sample of length " + std::to_string(y.pre_sample_len) +
                                    " below max(p, d) = " + std::to_string(need));
    const RegimePath path = compute_regime_path(y, params.r_lower, params.r_upper, params.d);
    const LikelihoodWorkspace ws = make_workspace(y, params.p);
    Neg2LogLik out = neg2_loglik_given_labels(params, ws, path.labels, true);
    out.degenerate_regime = path.first_identified_index >= y.size();
    return out;
}

} // namespace bdar

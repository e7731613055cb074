#include "bdar/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bdar/errors.hpp"

namespace bdar {

namespace {
constexpr double kExplosionBound = 1e10;
}

SimulationOutput simulate_with_labels(const BdarParams& params, std::size_t n,
                                      const InnovationSpec& innov, Rng& rng,
                                      const SimulateOptions& opts) {
    params.validate();
    if (n == 0) throw InvalidParamsError("requested sample size must be positive");

    const int p = params.p;
    const int d = params.d;
    const std::size_t n0_default = static_cast<std::size_t>(std::max(p, d));
    std::size_t n0 = n0_default;
    if (opts.n0_override >= 0) {
        n0 = static_cast<std::size_t>(opts.n0_override);
        if (n0 < n0_default)
            throw InvalidParamsError("pre-sample override " + std::to_string(n0) +
                                     " below required max(p, d) = " + std::to_string(n0_default));
    }

    // Virtual zero history of length maxlag precedes the generated block, so
    // every generated index has p autoregressive lags and the delay-d
    // threshold observation available.
    const std::size_t maxlag = std::max<std::size_t>(n0_default, 1);
    const std::size_t total = maxlag + opts.burn_in + n0 + n;
    std::vector<double> y(total, 0.0);
    std::vector<std::uint8_t> lab(total, 1);

    std::uint8_t regime = 1;
    for (std::size_t t = maxlag; t < total; ++t) {
        const double x = y[t - static_cast<std::size_t>(d)];
        if (x <= params.r_lower) regime = 1;
        else if (x > params.r_upper) regime = 0;
        lab[t] = regime;

        const Eigen::VectorXd& phi = regime ? params.phi1 : params.phi2;
        const Eigen::VectorXd& alpha = regime ? params.alpha1 : params.alpha2;
        double mean = phi[0];
        double var = alpha[0];
        for (int j = 1; j <= p; ++j) {
            const double lagged = y[t - static_cast<std::size_t>(j)];
            mean += phi[j] * lagged;
            var += alpha[j] * lagged * lagged;
        }
        const double eps = innov.sample(rng);
        y[t] = mean + eps * std::sqrt(var);
        if (!(std::abs(y[t]) <= kExplosionBound))
            throw ExplosionError("simulated path exceeded magnitude bound 1e10 at step " +
                                 std::to_string(t - maxlag) + " (non-stationary parameters?)");
    }

    const std::size_t keep = n0 + n;
    SimulationOutput out;
    out.series.values.assign(y.end() - static_cast<std::ptrdiff_t>(keep), y.end());
    out.series.pre_sample_len = n0;
    out.regime_labels.assign(lab.end() - static_cast<std::ptrdiff_t>(keep), lab.end());
    return out;
}

TimeSeries simulate(const BdarParams& params, std::size_t n, const InnovationSpec& innov,
                    Rng& rng, const SimulateOptions& opts) {
    return simulate_with_labels(params, n, innov, rng, opts).series;
}

} // namespace bdar

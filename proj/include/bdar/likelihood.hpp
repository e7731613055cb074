#ifndef BDAR_LIKELIHOOD_HPP
#define BDAR_LIKELIHOOD_HPP

#include <cstdint>
#include <vector>

#include "bdar/regime.hpp"
#include "bdar/types.hpp"

namespace bdar {

/// Precomputed regressor rows for the estimation range t = 1..n.
///
/// Row t-1 of mean_reg holds (1, y_{t-1}, ..., y_{t-p}); var_reg holds the
/// same row with every lag squared.  Rows are row-major with stride p+1.
/// targets[t-1] is y_t.  Model time t maps to array index n0 + t - 1.
struct LikelihoodWorkspace {
    int p = 0;
    std::size_t n = 0;
    std::size_t n0 = 0;
    std::vector<double> targets;
    std::vector<double> mean_reg;
    std::vector<double> var_reg;

    const double* mean_row(std::size_t t) const { return mean_reg.data() + (t - 1) * (p + 1); }
    const double* var_row(std::size_t t) const { return var_reg.data() + (t - 1) * (p + 1); }
};

/// Requires y.pre_sample_len >= p so every row has its lags.
LikelihoodWorkspace make_workspace(const TimeSeries& y, int p);

struct ConditionalMoments {
    double mu = 0.0;
    double h = 0.0;
};

/// mu_t = phi_k' (1, y_{t-1}, ..., y_{t-p}) and h_t = alpha_k' (1, y^2_{t-1}, ...)
/// with k picked by the regime label at model time t (t in [1, n]).
ConditionalMoments conditional_moments(const BdarParams& params, const TimeSeries& y,
                                       const RegimePath& regime, std::size_t t);

struct Neg2LogLik {
    double total = 0.0;
    std::vector<double> per_term;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    /// True when no threshold observation ever leaves the buffer zone, so
    /// every label rests on the lower-regime initialization.
    bool degenerate_regime = false;
};

/// Gaussian quasi-likelihood scaled by -2 with the 2*pi constant dropped:
/// sum over t = 1..n of log h_t + (y_t - mu_t)^2 / h_t, regime labels from
/// the buffer recursion with lower-regime initialization.
Neg2LogLik neg2_loglik(const BdarParams& params, const TimeSeries& y);

/// Same sum with regimes fixed by the caller; labels must cover the full
/// array (size n0 + n).  Used by the grid search, which owns the labels.
Neg2LogLik neg2_loglik_given_labels(const BdarParams& params, const LikelihoodWorkspace& ws,
                                    const std::vector<std::uint8_t>& labels,
                                    bool want_per_term = true);

} // namespace bdar

#endif

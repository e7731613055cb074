#ifndef BDAR_TYPES_HPP
#define BDAR_TYPES_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bdar/errors.hpp"
#include "bdar/rng.hpp"

namespace bdar {

/// Ordered observations with a leading pre-sample segment that is used
/// only to supply lags and threshold history.  With array indices
/// 0..size()-1 and n0 = pre_sample_len, the estimation sample is the
/// suffix of length sample_size() = size() - n0; array index i maps to
/// model time t = i - n0 + 1 (so the estimation range is t = 1..n).
struct TimeSeries {
    std::vector<double> values;
    std::size_t pre_sample_len = 0;

    std::size_t size() const noexcept { return values.size(); }
    std::size_t sample_size() const noexcept {
        return values.size() > pre_sample_len ? values.size() - pre_sample_len : 0;
    }

    /// Same observations, re-partitioned so that n0 leading values are
    /// treated as pre-sample.  Used when a series generated for one model
    /// order must be fitted with a deeper lag/delay menu.
    TimeSeries with_pre_sample(std::size_t n0) const;

    /// Throws InvalidDataError on non-finite values, InsufficientDataError
    /// when the pre-sample exhausts the series.
    void validate() const;
};

/// Full parameter vector of the two-regime model: per-regime mean and
/// variance coefficients (intercept first), buffer-zone boundaries and
/// the delay of the threshold variable.  Regime 1 is the lower regime.
struct BdarParams {
    int p = 1;
    int d = 1;
    Eigen::VectorXd phi1;    // length p+1
    Eigen::VectorXd alpha1;  // length p+1, alpha1[0] > 0, alpha1[j] >= 0
    Eigen::VectorXd phi2;
    Eigen::VectorXd alpha2;
    double r_lower = 0.0;
    double r_upper = 0.0;

    static BdarParams zeros(int p, int d);

    int n_lambda() const noexcept { return 4 * (p + 1); }

    /// Flattened (phi1, alpha1, phi2, alpha2); the ordering used by the
    /// asymptotic covariance.
    Eigen::VectorXd lambda() const;
    void set_lambda(const Eigen::VectorXd& lambda);

    /// Hard invariants: vector lengths, variance positivity, r_lower <= r_upper,
    /// d >= 1, p >= 0.  Throws InvalidParamsError.
    void validate() const;

    /// Identifiability (both regimes distinct in mean AND variance) is a
    /// soft requirement; intermediate search states may violate it.
    bool identifiable() const;
};

/// Innovation distribution; mean zero, variance one by construction.
struct InnovationSpec {
    enum class Kind { standard_normal, standardized_student_t, custom_iid };

    Kind kind = Kind::standard_normal;
    double nu = 0.0;  // student-t degrees of freedom, > 2
    std::function<double(Rng&)> sampler;  // custom_iid only
    /// Density symmetric about zero; a caller assertion for custom samplers.
    /// Gates the r in (1,2] ergodicity bound, which needs a symmetric law.
    bool symmetric = true;

    static InnovationSpec standard_normal();
    static InnovationSpec student_t(double nu);
    static InnovationSpec custom(std::function<double(Rng&)> sampler, bool symmetric = false);

    double sample(Rng& rng) const;

    /// E|eps|^r with a Monte Carlo standard error (zero when closed form).
    struct Moment {
        double value = 0.0;
        double mc_standard_error = 0.0;
    };

    /// Closed form for the Gaussian case, 10^6-sample Monte Carlo otherwise.
    Moment abs_moment(double r) const;
    /// E eps^4, same policy.
    Moment fourth_moment() const;

    std::string name() const;
};

} // namespace bdar

#endif

#ifndef BDAR_DIAGNOSTICS_HPP
#define BDAR_DIAGNOSTICS_HPP

#include <string>
#include <vector>

namespace bdar {

struct AcfResult {
    std::vector<double> rho;
    /// 1.96 / sqrt(n): the usual white-noise pointwise band.
    double band = 0.0;
};

/// Sample autocorrelations rho_k, k = 1..max_lag, normalized by the lag-0
/// sum of squares.  Throws DegenerateSeriesError on zero-variance input.
AcfResult acf(const std::vector<double>& x, int max_lag);

struct PortmanteauResult {
    double statistic = 0.0;
    int m = 0;
    double p_value = 1.0;
    /// "ljung_box" or "mcleod_li".
    std::string kind;
};

/// Q_m = n(n+2) sum_{k=1..m} rho_k^2 / (n-k), p-value from chi-square with
/// m degrees of freedom (no adjustment for estimated parameters).
PortmanteauResult ljung_box(const std::vector<double>& x, int m);

/// Ljung-Box applied to the centered squared series.
PortmanteauResult mcleod_li(const std::vector<double>& x, int m);

/// Upper tail of the chi-square law with df degrees of freedom.
double chi_squared_survival(double statistic, int df);

} // namespace bdar

#endif

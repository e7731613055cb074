#include "bdar/diagnostics.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <string>

#include "bdar/errors.hpp"

namespace bdar {

AcfResult acf(const std::vector<double>& x, int max_lag) {
    const std::size_t n = x.size();
    if (max_lag < 1) throw DomainError("max_lag must be >= 1");
    if (n <= static_cast<std::size_t>(max_lag))
        throw InsufficientDataError("series length " + std::to_string(n) +
                                    " must exceed max_lag " + std::to_string(max_lag));
    double mean = 0.0;
    for (const double v : x) mean += v;
    mean /= static_cast<double>(n);
    double denom = 0.0;
    for (const double v : x) denom += (v - mean) * (v - mean);
    if (!(denom > 0.0))
        throw DegenerateSeriesError("zero-variance series has no autocorrelations");

    AcfResult out;
    out.rho.resize(static_cast<std::size_t>(max_lag));
    for (int k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + static_cast<std::size_t>(k) < n; ++t)
            num += (x[t] - mean) * (x[t + static_cast<std::size_t>(k)] - mean);
        out.rho[static_cast<std::size_t>(k - 1)] = num / denom;
    }
    out.band = 1.96 / std::sqrt(static_cast<double>(n));
    return out;
}

double chi_squared_survival(double statistic, int df) {
    if (df < 1) throw DomainError("degrees of freedom must be >= 1");
    if (!(statistic >= 0.0)) throw DomainError("chi-square statistic must be >= 0");
    const boost::math::chi_squared dist(static_cast<double>(df));
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

PortmanteauResult ljung_box(const std::vector<double>& x, int m) {
    const AcfResult a = acf(x, m);
    const double n = static_cast<double>(x.size());
    double q = 0.0;
    for (int k = 1; k <= m; ++k) {
        const double r = a.rho[static_cast<std::size_t>(k - 1)];
        q += r * r / (n - static_cast<double>(k));
    }
    q *= n * (n + 2.0);
    PortmanteauResult out;
    out.statistic = q;
    out.m = m;
    out.p_value = chi_squared_survival(q, m);
    out.kind = "ljung_box";
    return out;
}

PortmanteauResult mcleod_li(const std::vector<double>& x, int m) {
    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sq[i] = x[i] * x[i];
    PortmanteauResult out = ljung_box(sq, m);
    out.kind = "mcleod_li";
    return out;
}

} // namespace bdar

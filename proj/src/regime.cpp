#include "bdar/regime.hpp"

#include <cmath>
#include <string>

#include "bdar/errors.hpp"

namespace bdar {

void regime_labels_into(const std::vector<double>& values, double r_lower, double r_upper,
                        int d, std::vector<std::uint8_t>& labels) {
    const std::size_t n = values.size();
    const std::size_t dd = static_cast<std::size_t>(d);
    std::uint8_t prev = 1;
    std::size_t i = 0;
    for (; i < dd && i < n; ++i) labels[i] = 1;
    for (; i < n; ++i) {
        const double x = values[i - dd];
        if (x <= r_lower) prev = 1;
        else if (x > r_upper) prev = 0;
        labels[i] = prev;
    }
}

RegimePath compute_regime_path(const TimeSeries& y, double r_lower, double r_upper, int d) {
    if (d < 1) throw InvalidParamsError("regime delay d must be >= 1, got " + std::to_string(d));
    if (!(r_lower <= r_upper))
        throw InvalidParamsError("threshold pair must satisfy r_lower <= r_upper");
    if (!std::isfinite(r_lower) || !std::isfinite(r_upper))
        throw InvalidParamsError("thresholds must be finite");
    const std::size_t n = y.size();
    if (n < static_cast<std::size_t>(d) + 1)
        throw InsufficientDataError("series of length " + std::to_string(n) +
                                    " too short for regime delay " + std::to_string(d));
    y.validate();

    RegimePath path;
    path.labels.resize(n);
    regime_labels_into(y.values, r_lower, r_upper, d, path.labels);

    const std::size_t dd = static_cast<std::size_t>(d);
    path.first_identified_index = n;
    for (std::size_t i = dd; i < n; ++i) {
        const double x = y.values[i - dd];
        if (x <= r_lower || x > r_upper) {
            path.first_identified_index = i;
            break;
        }
    }
    path.initial_assumed = path.first_identified_index > dd;
    return path;
}

} // namespace bdar

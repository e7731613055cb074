#ifndef BDAR_REGIME_HPP
#define BDAR_REGIME_HPP

#include <cstdint>
#include <vector>

#include "bdar/types.hpp"

namespace bdar {

/// Per-index regime labels: 1 = lower regime, 0 = upper regime.
///
/// labels has the same length as the series it was computed from; entries
/// before array index d (where no threshold observation exists) carry the
/// lower-regime convention value 1.  first_identified_index is the array
/// index of the first label forced by the data, i.e. the first i >= d with
/// y[i-d] outside (r_lower, r_upper]; it equals the series length when the
/// whole threshold history is stuck in the buffer zone.
struct RegimePath {
    std::vector<std::uint8_t> labels;
    std::size_t first_identified_index = 0;
    bool initial_assumed = false;
};

/// Runs the buffer-zone regime recursion over all indices with an
/// available threshold observation: label 1 if y[i-d] <= r_lower, 0 if
/// y[i-d] > r_upper, otherwise the previous label.  Leading buffer-stuck
/// indices are assigned to the lower regime.
RegimePath compute_regime_path(const TimeSeries& y, double r_lower, double r_upper, int d);

/// Allocation-free recursion core used by the grid search; `labels` must
/// already have y.size() entries.  No input validation.
void regime_labels_into(const std::vector<double>& values, double r_lower, double r_upper,
                        int d, std::vector<std::uint8_t>& labels);

} // namespace bdar

#endif

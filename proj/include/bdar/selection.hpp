#ifndef BDAR_SELECTION_HPP
#define BDAR_SELECTION_HPP

#include <string>
#include <vector>

#include "bdar/estimator.hpp"
#include "bdar/types.hpp"

namespace bdar {

/// Likelihood value plus the order penalty (2p+2)(log n1 + log n2), using
/// the fit's own likelihood so recomputation reproduces it exactly.
/// Both regimes must be nonempty.
double bic(const FitResult& fit, int p);

struct BicRow {
    int p = 0;
    double bic = 0.0;
    double neg2_loglik = 0.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    FitResult fit;
    bool failed = false;
    std::string error;
};

struct BicTable {
    std::vector<BicRow> rows;
    int chosen_p = 0;
};

/// Fits every order p in {1, ..., p_max} (optionally including the
/// intercept-only p = 0 row) on a common effective sample: the pre-sample is
/// re-marked to max(p_max, d_max) so likelihoods are comparable across p.
/// Failed fits stay in the table with their error text and are excluded from
/// the argmin; ties break toward smaller p.
BicTable select_order(const TimeSeries& y, int p_max, const SearchConfig& cfg = {},
                      bool include_p0 = false);

} // namespace bdar

#endif

#ifndef BDAR_STATIONARITY_HPP
#define BDAR_STATIONARITY_HPP

#include "bdar/types.hpp"

namespace bdar {

struct ConditionResult {
    double value = 0.0;
    bool holds = false;
};

/// Sufficient geometric-ergodicity certificates.  Each condition certifies
/// when its value is strictly below 1; none holding means "not certified",
/// not "nonstationary".
struct StationarityReport {
    struct {
        double value = 0.0;
        bool holds = false;
        double r_used = 1.0;
    } condition_i;
    struct {
        double value = 0.0;
        bool holds = false;
        double r_used = 2.0;
        bool requires_symmetric_density = true;
    } condition_ii;
    struct {
        double value = 0.0;
        bool holds = false;
    } condition_iii;
    bool any_holds = false;
};

/// Fractional-moment drift bound: sum over lags j = 1..p of
/// sup_i |phi_ij|^r + sup_i alpha_ij^{r/2} * E|eps|^r, for r in (0,1].
ConditionResult check_condition_i(const BdarParams& params, double abs_moment_r, double r);

/// Minkowski-style bound for r in (1,2], valid only under a symmetric
/// innovation density: (sum_j sup_i |phi_ij|)^r + sum_j sup_i alpha_ij^{r/2} * E|eps|^r.
ConditionResult check_condition_ii(const BdarParams& params, double abs_moment_r, double r);

/// Fourth-moment bound:
/// (1 + 3 E eps^2)(sum_j sup_i |phi_ij|)^4 + (E eps^4 + 3 E eps^2)(sum_j sup_i alpha_ij)^2.
ConditionResult check_condition_iii(const BdarParams& params, double m2, double m4);

struct StationarityOptions {
    /// Grid points per unit interval when scanning r for conditions i and ii.
    int r_grid_points = 20;
};

/// Evaluates all three conditions against the given innovation law, scanning
/// r over a grid for conditions i and ii and keeping the smallest bound.
/// Condition ii is evaluated but reported as not holding when the innovation
/// density is not asserted symmetric.
StationarityReport check_stationarity(const BdarParams& params, const InnovationSpec& innov,
                                      const StationarityOptions& opts = {});

} // namespace bdar

#endif

#ifndef BDAR_SIMULATE_HPP
#define BDAR_SIMULATE_HPP

#include <cstdint>
#include <vector>

#include "bdar/rng.hpp"
#include "bdar/types.hpp"

namespace bdar {

struct SimulateOptions {
    /// Transient observations generated and discarded before the kept block.
    std::size_t burn_in = 500;
    /// Pre-sample length of the returned series; defaults to max(p, d).
    /// Larger values let a fit with d_max > d reuse the same effective sample.
    int n0_override = -1;
};

/// Series plus the regime label (1 = lower, 0 = upper) realised at each
/// kept index, for tests that need the generating path.
struct SimulationOutput {
    TimeSeries series;
    std::vector<std::uint8_t> regime_labels;
};

/// Draws a length n0 + n realisation of the buffered two-regime
/// conditional-heteroscedastic autoregression.  The recursion starts from a
/// zero history in the lower regime and runs burn_in steps before keeping
/// output, so the kept block is close to the stationary law when one exists.
/// Throws ExplosionError if |y_t| exceeds 1e10 at any point.
SimulationOutput simulate_with_labels(const BdarParams& params, std::size_t n,
                                      const InnovationSpec& innov, Rng& rng,
                                      const SimulateOptions& opts = {});

/// Same recursion, series only.
TimeSeries simulate(const BdarParams& params, std::size_t n, const InnovationSpec& innov,
                    Rng& rng, const SimulateOptions& opts = {});

} // namespace bdar

#endif

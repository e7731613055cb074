#ifndef BDAR_ESTIMATOR_HPP
#define BDAR_ESTIMATOR_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "bdar/types.hpp"

namespace bdar {

struct OptimizerConfig {
    int max_iters = 200;
    /// Gradient tolerance on the per-observation average loss.
    double tolerance = 1e-7;
    /// Cold starts per regime sub-fit: moment-matched, perturbed, intercept-only,
    /// then further perturbations when more are requested.
    int n_starts = 3;
};

struct SearchConfig {
    /// Candidate thresholds are the sample order statistics between these
    /// percentiles of the estimation range.
    double percentile_lo = 10.0;
    double percentile_hi = 90.0;
    int d_max = 6;
    /// Every admissible cell must leave each regime at least
    /// max(min_regime_frac * n, resolved min_regime_count) observations.
    double min_regime_frac = 0.05;
    /// Negative means the default 10 * (p + 1).
    int min_regime_count = -1;
    /// Stride over candidate order statistics; 1 uses every pair.
    int grid_thinning = 1;
    OptimizerConfig optimizer;
    /// 0 reads BDAR_THREADS, falling back to hardware concurrency.
    int n_threads = 0;
    /// Record every evaluated grid cell in FitResult::cells.
    bool keep_cell_map = false;

    int resolved_min_count(int p) const {
        return min_regime_count >= 0 ? min_regime_count : 10 * (p + 1);
    }
};

/// Inner minimum for one fixed (r_lower, r_upper, d) cell.
struct CellFit {
    Eigen::VectorXd phi1, alpha1, phi2, alpha2;
    /// Canonical single-pass likelihood value at the minimizer.
    double loss = 0.0;
    bool converged = false;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
};

/// Diagnostic record of one evaluated grid cell.
struct GridCellRecord {
    double r_lower = 0.0;
    double r_upper = 0.0;
    int d = 0;
    double loss = 0.0;
    bool converged = false;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    Eigen::VectorXd lambda;
};

struct FitResult {
    BdarParams params;
    /// Equals the likelihood module's value at params bit-for-bit.
    double neg2_loglik = 0.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    /// Per-term likelihood contributions at the optimum, length n.
    std::vector<double> per_term;
    /// (y_t - mu_t) / sqrt(h_t) at the optimum, length n.
    std::vector<double> standardized_residuals;
    bool converged = false;
    std::size_t grid_cells_evaluated = 0;
    /// Populated only when SearchConfig::keep_cell_map is set.
    std::vector<GridCellRecord> cells;
};

/// Minimizes the likelihood over the regression coefficients with the
/// regime labels pinned by (r_lower, r_upper, d).  The problem splits into
/// two independent sub-fits, one per regime; variance positivity is kept by
/// optimizing the intercept on a log scale and slopes as squares.
/// Throws CellRejectedError when either regime is below the minimum count.
CellFit fit_lambda_given_thresholds(const TimeSeries& y, int p, double r_lower, double r_upper,
                                    int d, const SearchConfig& cfg = {});

/// Profile search: runs the inner fit over every admissible
/// (r_lower, r_upper, d) with thresholds drawn from the thinned order
/// statistics and d in {1, ..., d_max}, returning the global minimizer.
/// Ties break by smaller loss, then smaller buffer width, then smaller
/// r_lower, then smaller d.  The result does not depend on thread count.
///
/// The series must carry at least max(p, d_max) pre-sample observations;
/// a raw series can be re-marked with TimeSeries::with_pre_sample.
FitResult fit(const TimeSeries& y, int p, const SearchConfig& cfg = {});

/// Thread count resolution used by the grid search and the study harness.
int resolve_thread_count(int requested);

} // namespace bdar

#endif

#ifndef BDAR_HARNESS_HPP
#define BDAR_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bdar/estimator.hpp"
#include "bdar/types.hpp"

namespace bdar {

/// One Monte Carlo experiment: a data-generating model, sample sizes,
/// replication count, and the fit configuration applied to every sample.
struct McDesign {
    enum class Mode { estimation_study, selection_study };

    BdarParams dgp;
    InnovationSpec innovation;
    std::vector<std::size_t> sample_sizes;
    int replications = 0;
    SearchConfig fit_config;
    std::uint64_t seed = 0;
    Mode mode = Mode::estimation_study;
    /// Selection mode only.
    int p_max = 4;
    bool include_p0 = false;
    /// Run even when no stationarity certificate holds for the DGP.
    bool force_uncertified = false;
    /// Replication-level worker count; 0 defers to BDAR_THREADS/hardware.
    int n_threads = 0;

    void validate() const;
};

struct CoefficientStats {
    std::string name;
    double truth = 0.0;
    double bias = 0.0;
    double esd = 0.0;
    double asd_mean = 0.0;
    bool has_asd = false;
};

struct SampleSizeReport {
    std::size_t n = 0;
    int replications_used = 0;
    int failures = 0;
    /// Ordered (phi1, alpha1, phi2, alpha2, r_lower, r_upper); thresholds
    /// carry no ASD column.
    std::vector<CoefficientStats> coefficients;
    double d_hit_rate = 0.0;
    /// Samples of n * (estimate - truth), one per successful replication.
    std::vector<double> r_lower_devs;
    std::vector<double> r_upper_devs;
    double selection_rate = 0.0;
    bool has_selection_rate = false;
    /// Measured but deliberately left out of serialized reports so a rerun
    /// of the same design stays byte-identical.
    double wall_time_seconds = 0.0;
};

struct McReport {
    std::vector<SampleSizeReport> per_n;
    /// Which certificate admitted the DGP, or a forced-override note.
    std::string stationarity_note;
};

/// Per replication: simulate with a stream derived from (seed, n, rep),
/// fit at the true order, collect coefficient estimates and plug-in SEs.
/// Replications whose fit throws are excluded and counted; more than 5%
/// exclusions in a sample size fails the study.
McReport run_estimation_study(const McDesign& design);

/// Per replication: simulate and pick the order by the likelihood-plus-
/// penalty table; reports the fraction matching the generating order.
McReport run_selection_study(const McDesign& design);

} // namespace bdar

#endif

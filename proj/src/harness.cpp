#include "bdar/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "bdar/errors.hpp"
#include "bdar/inference.hpp"
#include "bdar/rng.hpp"
#include "bdar/selection.hpp"
#include "bdar/simulate.hpp"
#include "bdar/stationarity.hpp"

namespace bdar {

void McDesign::validate() const {
    dgp.validate();
    if (replications < 1) throw InvalidParamsError("replications must be >= 1");
    if (sample_sizes.empty()) throw InvalidParamsError("at least one sample size is required");
    for (const std::size_t n : sample_sizes)
        if (n < 50) throw InvalidParamsError("sample sizes below 50 are not supported");
    if (mode == Mode::selection_study && p_max < 1)
        throw InvalidParamsError("selection mode needs p_max >= 1");
}

namespace {

std::string stationarity_note_for(const McDesign& design) {
    const StationarityReport rep = check_stationarity(design.dgp, design.innovation);
    if (rep.condition_i.holds) return "certified: fractional-moment condition";
    if (rep.condition_ii.holds) return "certified: symmetric-density condition";
    if (rep.condition_iii.holds) return "certified: fourth-moment condition";
    if (!design.force_uncertified)
        throw InvalidParamsError(
            "no stationarity certificate holds for the generating model; "
            "set force_uncertified to run anyway");
    return "not certified: forced override";
}

struct RepOutcome {
    bool ok = false;
    std::string error;
    Eigen::VectorXd lambda;       // 4p+4
    Eigen::VectorXd asd;          // 4p+4
    double r_lower = 0.0;
    double r_upper = 0.0;
    int d = 0;
    int chosen_p = 0;
};

// Effective sample stays exactly n: the pre-sample block is generated on
// top of it, sized for the widest lag the fit will request.
std::size_t presample_for(const McDesign& design, int fit_order_max) {
    const int by_fit = std::max(fit_order_max, design.fit_config.d_max);
    const int by_dgp = std::max(design.dgp.p, design.dgp.d);
    return static_cast<std::size_t>(std::max(by_fit, by_dgp));
}

template <typename RepFn>
void run_replications(const McDesign& design, std::size_t n, const RepFn& rep_fn,
                      std::vector<RepOutcome>& outcomes) {
    const int total = design.replications;
    outcomes.assign(static_cast<std::size_t>(total), {});
    const int n_threads =
        std::max(1, std::min(resolve_thread_count(design.n_threads), total));

    const auto worker = [&](int tid) {
        for (int rep = tid; rep < total; rep += n_threads) {
            RepOutcome& out = outcomes[static_cast<std::size_t>(rep)];
            try {
                Rng rng(derive_stream_key(design.seed, n, static_cast<std::uint64_t>(rep)));
                rep_fn(rng, out);
                out.ok = true;
            } catch (const std::exception& e) {
                out.ok = false;
                out.error = e.what();
            }
        }
    };

    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
        for (std::thread& th : pool) th.join();
    }
}

void check_failure_budget(const McDesign& design, std::size_t n, int failures) {
    if (failures * 20 > design.replications)
        throw StudyFailedError("more than 5% of replications failed at n = " +
                               std::to_string(n) + " (" + std::to_string(failures) + " of " +
                               std::to_string(design.replications) + ")");
}

std::vector<std::string> lambda_names(int p) {
    std::vector<std::string> names;
    const auto block = [&](const std::string& stem) {
        for (int j = 0; j <= p; ++j) names.push_back(stem + "_" + std::to_string(j));
    };
    block("phi1");
    block("alpha1");
    block("phi2");
    block("alpha2");
    return names;
}

} // namespace

McReport run_estimation_study(const McDesign& design) {
    design.validate();
    if (design.mode != McDesign::Mode::estimation_study)
        throw InvalidParamsError("design mode is not estimation_study");

    McReport report;
    report.stationarity_note = stationarity_note_for(design);

    const int p = design.dgp.p;
    const int n_lambda = 4 * (p + 1);
    const Eigen::VectorXd truth = design.dgp.lambda();
    const std::vector<std::string> names = lambda_names(p);

    for (const std::size_t n : design.sample_sizes) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::size_t n0 = presample_for(design, p);

        SearchConfig cfg = design.fit_config;
        cfg.n_threads = 1;  // parallelism lives at the replication level

        std::vector<RepOutcome> outcomes;
        run_replications(design, n,
                         [&](Rng& rng, RepOutcome& out) {
                             SimulateOptions so;
                             so.n0_override = static_cast<int>(n0);
                             const TimeSeries y =
                                 simulate(design.dgp, n, design.innovation, rng, so);
                             const FitResult fit_res = fit(y, p, cfg);
                             const AsymptoticCovariance cov = asymptotic_se(fit_res, y);
                             out.lambda = fit_res.params.lambda();
                             out.asd = cov.se;
                             out.r_lower = fit_res.params.r_lower;
                             out.r_upper = fit_res.params.r_upper;
                             out.d = fit_res.params.d;
                         },
                         outcomes);

        SampleSizeReport sr;
        sr.n = n;

        Eigen::VectorXd sum = Eigen::VectorXd::Zero(n_lambda);
        Eigen::VectorXd asd_sum = Eigen::VectorXd::Zero(n_lambda);
        double rl_sum = 0.0, ru_sum = 0.0;
        int used = 0, d_hits = 0;
        for (const RepOutcome& out : outcomes) {
            if (!out.ok) {
                ++sr.failures;
                continue;
            }
            ++used;
            sum += out.lambda;
            asd_sum += out.asd;
            rl_sum += out.r_lower;
            ru_sum += out.r_upper;
            if (out.d == design.dgp.d) ++d_hits;
            sr.r_lower_devs.push_back(static_cast<double>(n) *
                                      (out.r_lower - design.dgp.r_lower));
            sr.r_upper_devs.push_back(static_cast<double>(n) *
                                      (out.r_upper - design.dgp.r_upper));
        }
        check_failure_budget(design, n, sr.failures);
        sr.replications_used = used;
        const double du = static_cast<double>(used);
        sr.d_hit_rate = used > 0 ? static_cast<double>(d_hits) / du : 0.0;

        const Eigen::VectorXd mean = sum / du;
        const double rl_mean = rl_sum / du;
        const double ru_mean = ru_sum / du;
        Eigen::VectorXd ss = Eigen::VectorXd::Zero(n_lambda);
        double rl_ss = 0.0, ru_ss = 0.0;
        for (const RepOutcome& out : outcomes) {
            if (!out.ok) continue;
            const Eigen::VectorXd dev = out.lambda - mean;
            ss += dev.cwiseProduct(dev);
            rl_ss += (out.r_lower - rl_mean) * (out.r_lower - rl_mean);
            ru_ss += (out.r_upper - ru_mean) * (out.r_upper - ru_mean);
        }
        const double esd_scale = used > 1 ? 1.0 / (du - 1.0) : 0.0;

        for (int i = 0; i < n_lambda; ++i) {
            CoefficientStats cs;
            cs.name = names[static_cast<std::size_t>(i)];
            cs.truth = truth[i];
            cs.bias = mean[i] - truth[i];
            cs.esd = std::sqrt(ss[i] * esd_scale);
            cs.asd_mean = asd_sum[i] / du;
            cs.has_asd = true;
            sr.coefficients.push_back(std::move(cs));
        }
        CoefficientStats rl;
        rl.name = "r_lower";
        rl.truth = design.dgp.r_lower;
        rl.bias = rl_mean - design.dgp.r_lower;
        rl.esd = std::sqrt(rl_ss * esd_scale);
        sr.coefficients.push_back(std::move(rl));
        CoefficientStats ru;
        ru.name = "r_upper";
        ru.truth = design.dgp.r_upper;
        ru.bias = ru_mean - design.dgp.r_upper;
        ru.esd = std::sqrt(ru_ss * esd_scale);
        sr.coefficients.push_back(std::move(ru));

        sr.wall_time_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.per_n.push_back(std::move(sr));
    }
    return report;
}

McReport run_selection_study(const McDesign& design) {
    design.validate();
    if (design.mode != McDesign::Mode::selection_study)
        throw InvalidParamsError("design mode is not selection_study");

    McReport report;
    report.stationarity_note = stationarity_note_for(design);

    for (const std::size_t n : design.sample_sizes) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::size_t n0 = presample_for(design, design.p_max);

        SearchConfig cfg = design.fit_config;
        cfg.n_threads = 1;

        std::vector<RepOutcome> outcomes;
        run_replications(design, n,
                         [&](Rng& rng, RepOutcome& out) {
                             SimulateOptions so;
                             so.n0_override = static_cast<int>(n0);
                             const TimeSeries y =
                                 simulate(design.dgp, n, design.innovation, rng, so);
                             const BicTable table =
                                 select_order(y, design.p_max, cfg, design.include_p0);
                             out.chosen_p = table.chosen_p;
                         },
                         outcomes);

        SampleSizeReport sr;
        sr.n = n;
        int used = 0, hits = 0;
        for (const RepOutcome& out : outcomes) {
            if (!out.ok) {
                ++sr.failures;
                continue;
            }
            ++used;
            if (out.chosen_p == design.dgp.p) ++hits;
        }
        check_failure_budget(design, n, sr.failures);
        sr.replications_used = used;
        sr.selection_rate = used > 0 ? static_cast<double>(hits) / static_cast<double>(used) : 0.0;
        sr.has_selection_rate = true;
        sr.wall_time_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.per_n.push_back(std::move(sr));
    }
    return report;
}

} // namespace bdar

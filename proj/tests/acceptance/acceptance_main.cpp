// Acceptance gate: runs every stated criterion at the scale pinned below
// and prints one [PASS]/[FAIL] line per criterion.  Exit status is the
// number of failed criteria.  Also emits the threshold-deviation histogram
// sample files next to the binary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

#include "bdar/diagnostics.hpp"
#include "bdar/errors.hpp"
#include "bdar/estimator.hpp"
#include "bdar/harness.hpp"
#include "bdar/inference.hpp"
#include "bdar/io.hpp"
#include "bdar/likelihood.hpp"
#include "bdar/rng.hpp"
#include "bdar/selection.hpp"
#include "bdar/simulate.hpp"
#include "bdar/stationarity.hpp"

namespace {

// ---------------------------------------------------------------- scale
// Grid thinning trades runtime for threshold resolution.  The quantization
// it adds to the threshold estimates is far below the target spreads
// (candidate spacing ~ thin / (n * density) ~ 0.02 at n = 400 versus an
// expected ESD of 0.03-0.04), so these values keep the studies honest
// while fitting a desk-scale compute budget.
constexpr int kThin400 = 5;
constexpr int kThin800 = 10;
constexpr int kThin2000 = 25;
constexpr int kEstimationReps = 200;
constexpr int kSelectionReps = 50;
constexpr std::uint64_t kSeed = 20250825;

// ------------------------------------------------------------- reporting
struct Gate {
    int failures = 0;
    void record(const std::string& label, bool ok, const std::string& detail) {
        if (!ok) ++failures;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << label;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << std::endl;
    }
    void run(const std::string& label, const std::function<std::pair<bool, std::string>()>& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const auto [ok, detail] = fn();
            record(label, ok, detail);
        } catch (const std::exception& e) {
            record(label, false, std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::fprintf(stderr, "  .. %.1fs\n", secs);
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ------------------------------------------------------- reference design
bdar::BdarParams reference_dgp() {
    bdar::BdarParams pr;
    pr.p = 2;
    pr.d = 4;
    pr.phi1.resize(3);
    pr.alpha1.resize(3);
    pr.phi2.resize(3);
    pr.alpha2.resize(3);
    pr.phi1 << -0.1, 0.2, 0.1;
    pr.alpha1 << 0.1, 0.3, 0.05;
    pr.phi2 << 0.1, -0.2, 0.3;
    pr.alpha2 << 0.05, 0.2, 0.1;
    pr.r_lower = -0.1;
    pr.r_upper = 0.15;
    return pr;
}

// Parameters of the fitted weekly-returns model used for the round trip:
// orders padded to p = 3 with zeros, delay 1, buffer (-0.2048, 0.8770].
bdar::BdarParams returns_model() {
    bdar::BdarParams pr;
    pr.p = 3;
    pr.d = 1;
    pr.phi1.resize(4);
    pr.alpha1.resize(4);
    pr.phi2.resize(4);
    pr.alpha2.resize(4);
    pr.phi1 << 0.3937, 0.0385, 0.2093, 0.0;
    pr.alpha1 << 5.3991, 0.5432, 0.1787, 0.0;
    pr.phi2 << -0.5992, 0.2354, 0.0, 0.0;
    pr.alpha2 << 3.4473, 0.0263, 0.0678, 0.1416;
    pr.r_lower = -0.2048;
    pr.r_upper = 0.8770;
    return pr;
}

// Frozen Monte Carlo targets for the reference design, same coefficient
// order as the study reports: phi1, alpha1, phi2, alpha2, r_lower, r_upper.
const std::vector<double> kTargetEsd400 = {
    0.0288, 0.0883, 0.0765, 0.0165, 0.1161, 0.0657,
    0.0225, 0.0835, 0.0680, 0.0103, 0.0959, 0.0693,
    0.0421, 0.0314};

bdar::McDesign estimation_design(std::size_t n, int thin) {
    bdar::McDesign d;
    d.dgp = reference_dgp();
    d.innovation = bdar::InnovationSpec::standard_normal();
    d.sample_sizes = {n};
    d.replications = kEstimationReps;
    d.fit_config.d_max = 6;
    d.fit_config.grid_thinning = thin;
    d.seed = kSeed;
    return d;
}

}  // namespace

int main() {
    Gate gate;
    bdar::SampleSizeReport rep400, rep800;

    gate.run("1. bias and empirical spread at n = 400 match the reference targets", [&] {
        const auto report = bdar::run_estimation_study(estimation_design(400, kThin400));
        rep400 = report.per_n.at(0);
        double worst_bias = 0.0, worst_ratio = 1.0;
        std::string worst_name;
        bool ok = true;
        for (std::size_t i = 0; i < rep400.coefficients.size(); ++i) {
            const auto& c = rep400.coefficients[i];
            worst_bias = std::max(worst_bias, std::abs(c.bias));
            if (std::abs(c.bias) > 0.03) ok = false;
            const double ratio = c.esd / kTargetEsd400.at(i);
            if (std::abs(ratio - 1.0) > std::abs(worst_ratio - 1.0)) {
                worst_ratio = ratio;
                worst_name = c.name;
            }
            if (ratio < 0.65 || ratio > 1.35) ok = false;
        }
        return std::make_pair(ok, "max |bias| " + fmt(worst_bias) + "; worst ESD ratio " +
                                      fmt(worst_ratio) + " on " + worst_name + "; " +
                                      std::to_string(rep400.failures) + " failures");
    });

    gate.run("2. delay identified in at least 95% of replications at n = 400 and 800", [&] {
        const auto report = bdar::run_estimation_study(estimation_design(800, kThin800));
        rep800 = report.per_n.at(0);
        const bool ok = rep400.d_hit_rate >= 0.95 && rep800.d_hit_rate >= 0.95;
        return std::make_pair(ok, "hit rate " + fmt(rep400.d_hit_rate) + " at n = 400, " +
                                      fmt(rep800.d_hit_rate) + " at n = 800");
    });

    gate.run("3. threshold spreads shrink like 1/n; deviation samples written", [&] {
        const auto& rl400 = rep400.coefficients.at(12);
        const auto& ru400 = rep400.coefficients.at(13);
        const auto& rl800 = rep800.coefficients.at(12);
        const auto& ru800 = rep800.coefficients.at(13);
        const double ratio_l = rl800.esd / rl400.esd;
        const double ratio_u = ru800.esd / ru400.esd;
        bdar::io::write_samples_csv("acceptance_hist_r_lower_n400.csv", "n_times_r_lower_dev",
                                    rep400.r_lower_devs);
        bdar::io::write_samples_csv("acceptance_hist_r_upper_n400.csv", "n_times_r_upper_dev",
                                    rep400.r_upper_devs);
        bdar::io::write_samples_csv("acceptance_hist_r_lower_n800.csv", "n_times_r_lower_dev",
                                    rep800.r_lower_devs);
        bdar::io::write_samples_csv("acceptance_hist_r_upper_n800.csv", "n_times_r_upper_dev",
                                    rep800.r_upper_devs);
        const bool ok = ratio_l >= 0.35 && ratio_l <= 0.70 && ratio_u >= 0.35 && ratio_u <= 0.70;
        return std::make_pair(ok, "ESD ratios n800/n400: lower " + fmt(ratio_l) + ", upper " +
                                      fmt(ratio_u) + "; 4 histogram files written");
    });

    gate.run("4. plug-in standard errors track the empirical spread at n = 800", [&] {
        bool ok = true;
        double worst = 0.0;
        std::string worst_name;
        for (const auto& c : rep800.coefficients) {
            if (!c.has_asd) continue;
            const double rel = std::abs(c.asd_mean - c.esd) / c.esd;
            if (rel > worst) {
                worst = rel;
                worst_name = c.name;
            }
            if (rel > 0.25) ok = false;
        }
        return std::make_pair(ok, "worst |ASD-ESD|/ESD " + fmt(worst) + " on " + worst_name);
    });

    gate.run("5. penalized likelihood selects the true order in at least 90%", [&] {
        bdar::McDesign d;
        d.dgp = reference_dgp();
        d.innovation = bdar::InnovationSpec::standard_normal();
        d.sample_sizes = {800};
        d.replications = kSelectionReps;
        d.fit_config.d_max = 6;
        d.fit_config.grid_thinning = kThin800;
        d.seed = kSeed + 1;
        d.mode = bdar::McDesign::Mode::selection_study;
        d.p_max = 4;
        const auto report = bdar::run_selection_study(d);
        const double rate = report.per_n.at(0).selection_rate;
        return std::make_pair(rate >= 0.90, "correct-order rate " + fmt(rate) + " over " +
                                                std::to_string(kSelectionReps) + " replications");
    });

    gate.run("6. likelihood equals the brute-force oracle to 1e-10 on 100 instances", [&] {
        bdar::Rng rng(kSeed + 2);
        double worst = 0.0;
        for (int repi = 0; repi < 100; ++repi) {
            const int p = static_cast<int>(rng.next_u64() % 3);
            const int d = 1 + static_cast<int>(rng.next_u64() % 3);
            const std::size_t n0 = static_cast<std::size_t>(std::max(p, d));
            const std::size_t n = 5 + rng.next_u64() % 26;
            auto pr = bdar::BdarParams::zeros(p, d);
            for (int j = 0; j <= p; ++j) {
                pr.phi1[j] = -0.6 + 1.2 * rng.uniform();
                pr.phi2[j] = -0.6 + 1.2 * rng.uniform();
                pr.alpha1[j] = j == 0 ? 0.05 + rng.uniform() : 0.4 * rng.uniform();
                pr.alpha2[j] = j == 0 ? 0.05 + rng.uniform() : 0.4 * rng.uniform();
            }
            pr.r_lower = -0.4 + 0.3 * rng.uniform();
            pr.r_upper = pr.r_lower + 0.5 * rng.uniform();
            bdar::TimeSeries y;
            y.values.resize(n0 + n);
            for (auto& v : y.values) v = 0.8 * rng.normal();
            y.pre_sample_len = n0;
            const double got = bdar::neg2_loglik(pr, y).total;
            const double want = oracles::neg2_loglik(pr, y.values, n0);
            worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
        }
        return std::make_pair(worst <= 1e-10, "worst relative deviation " + fmt(worst));
    });

    gate.run("7. stationarity certificates reproduce the hand arithmetic", [&] {
        const auto pr = reference_dgp();
        const double abs_m1 = std::sqrt(2.0 / M_PI);
        const auto c1 = bdar::check_condition_i(pr, abs_m1, 1.0);
        const double c1_hand = 0.2 + 0.3 + (std::sqrt(0.3) + std::sqrt(0.1)) * abs_m1;
        const auto c2 = bdar::check_condition_ii(pr, 1.0, 2.0);
        const auto c3 = bdar::check_condition_iii(pr, 1.0, 3.0);
        const bool ok = std::abs(c1.value - c1_hand) < 1e-12 && !c1.holds &&
                        std::abs(c2.value - 0.65) < 1e-12 && c2.holds &&
                        std::abs(c3.value - 1.21) < 1e-12 && !c3.holds;
        return std::make_pair(ok, "i: " + fmt(c1.value) + " fails, ii: " + fmt(c2.value) +
                                      " holds, iii: " + fmt(c3.value) + " fails");
    });

    gate.run("8. portmanteau tests hold their size on white noise", [&] {
        bdar::Rng rng(kSeed + 3);
        int lb_reject = 0, ml_reject = 0;
        const int reps = 1000;
        for (int repi = 0; repi < reps; ++repi) {
            std::vector<double> x(500);
            for (auto& v : x) v = rng.normal();
            if (bdar::ljung_box(x, 6).p_value < 0.05) ++lb_reject;
            if (bdar::mcleod_li(x, 6).p_value < 0.05) ++ml_reject;
        }
        const double lb = lb_reject / static_cast<double>(reps);
        const double ml = ml_reject / static_cast<double>(reps);
        const bool ok = lb >= 0.03 && lb <= 0.08 && ml >= 0.03 && ml <= 0.08;
        return std::make_pair(ok, "rejection rates: levels " + fmt(lb) + ", squares " + fmt(ml));
    });

    gate.run("9. degenerate-buffer search matches an independent one-threshold fit", [&] {
        bdar::BdarParams truth;
        truth.p = 1;
        truth.d = 2;
        truth.phi1.resize(2);
        truth.alpha1.resize(2);
        truth.phi2.resize(2);
        truth.alpha2.resize(2);
        truth.phi1 << 0.0, 0.3;
        truth.alpha1 << 0.5, 0.2;
        truth.phi2 << 0.2, -0.25;
        truth.alpha2 << 1.0, 0.15;
        truth.r_lower = truth.r_upper = 0.1;

        bdar::Rng rng(kSeed + 4);
        auto y = bdar::simulate(truth, 300, bdar::InnovationSpec::standard_normal(), rng);
        y = y.with_pre_sample(2);

        std::vector<double> sorted(y.values.begin() + y.pre_sample_len, y.values.end());
        std::sort(sorted.begin(), sorted.end());
        std::vector<double> candidates;
        for (std::size_t k = sorted.size() / 5; k <= 4 * sorted.size() / 5; k += 12)
            candidates.push_back(sorted[k]);

        bdar::SearchConfig cfg;
        cfg.min_regime_count = 20;
        cfg.min_regime_frac = 0.0;
        double lib_best = std::numeric_limits<double>::infinity();
        for (int d = 1; d <= 2; ++d) {
            for (double r : candidates) {
                try {
                    lib_best = std::min(
                        lib_best, bdar::fit_lambda_given_thresholds(y, 1, r, r, d, cfg).loss);
                } catch (const bdar::CellRejectedError&) {
                }
            }
        }
        const double oracle_best =
            oracles::tdar_profile_fit(y.values, y.pre_sample_len, 1, candidates, 2, 20);
        const double rel = std::abs(lib_best - oracle_best) / std::abs(oracle_best);
        return std::make_pair(rel <= 1e-8, "losses " + fmt(lib_best) + " vs " + fmt(oracle_best) +
                                               ", relative gap " + fmt(rel));
    });

    gate.run("10. randomized pipelines are byte-identical across worker counts", [&] {
        bool ok = true;
        std::string detail;

        // Full profile fit, 1 vs 4 workers.
        bdar::Rng rng(kSeed + 5);
        auto y = bdar::simulate(reference_dgp(), 300, bdar::InnovationSpec::standard_normal(),
                                rng);
        y = y.with_pre_sample(6);
        bdar::SearchConfig cfg;
        cfg.d_max = 6;
        cfg.grid_thinning = 6;
        cfg.n_threads = 1;
        const auto f1 = bdar::fit(y, 2, cfg);
        cfg.n_threads = 4;
        const auto f4 = bdar::fit(y, 2, cfg);
        const auto c1 = bdar::asymptotic_se(f1, y);
        const auto c4 = bdar::asymptotic_se(f4, y);
        if (bdar::io::to_json(f1, &c1).dump() != bdar::io::to_json(f4, &c4).dump()) {
            ok = false;
            detail += "fit report differs; ";
        }

        // Estimation study, 1 vs 3 workers.
        auto d1 = estimation_design(150, 12);
        d1.replications = 6;
        d1.fit_config.d_max = 4;
        d1.n_threads = 1;
        const auto e1 = bdar::run_estimation_study(d1);
        d1.n_threads = 3;
        const auto e3 = bdar::run_estimation_study(d1);
        if (bdar::io::to_json(e1).dump() != bdar::io::to_json(e3).dump()) {
            ok = false;
            detail += "estimation report differs; ";
        }

        // Selection study, 1 vs 3 workers.
        bdar::McDesign sd;
        sd.dgp = reference_dgp();
        sd.innovation = bdar::InnovationSpec::standard_normal();
        sd.sample_sizes = {150};
        sd.replications = 3;
        sd.fit_config.d_max = 4;
        sd.fit_config.grid_thinning = 12;
        sd.seed = kSeed + 6;
        sd.mode = bdar::McDesign::Mode::selection_study;
        sd.p_max = 2;
        sd.n_threads = 1;
        const auto s1 = bdar::run_selection_study(sd);
        sd.n_threads = 3;
        const auto s3 = bdar::run_selection_study(sd);
        if (bdar::io::to_json(s1).dump() != bdar::io::to_json(s3).dump()) {
            ok = false;
            detail += "selection report differs; ";
        }

        if (ok) detail = "fit, estimation and selection reports identical";
        return std::make_pair(ok, detail);
    });

    gate.run("11. round trip: fitted weekly-returns model is recovered from its own draws", [&] {
        const auto truth = returns_model();
        bdar::Rng rng(kSeed + 7);
        bdar::SimulateOptions so;
        so.n0_override = 3;
        const auto y =
            bdar::simulate(truth, 2000, bdar::InnovationSpec::standard_normal(), rng, so);

        bdar::SearchConfig cfg;
        cfg.d_max = 3;
        cfg.grid_thinning = kThin2000;
        const auto fit = bdar::fit(y, 3, cfg);
        const auto cov = bdar::asymptotic_se(fit, y);

        // Order-statistic resolution: the largest gap between consecutive
        // candidate thresholds near the true boundaries, one stride wide.
        std::vector<double> sorted(y.values.begin() + y.pre_sample_len, y.values.end());
        std::sort(sorted.begin(), sorted.end());
        const std::size_t k_lo =
            static_cast<std::size_t>(std::ceil(0.10 * (sorted.size() - 1)));
        const std::size_t k_hi =
            static_cast<std::size_t>(std::floor(0.90 * (sorted.size() - 1)));
        auto resolution_near = [&](double r0) {
            double below = sorted[k_lo], above = sorted[k_hi];
            for (std::size_t k = k_lo; k <= k_hi; k += kThin2000) {
                if (sorted[k] <= r0) below = sorted[k];
                if (sorted[k] > r0) {
                    above = sorted[k];
                    break;
                }
            }
            return above - below;
        };
        const double res_l = resolution_near(truth.r_lower);
        const double res_u = resolution_near(truth.r_upper);

        bool ok = fit.params.d == truth.d;
        std::string detail = "d = " + std::to_string(fit.params.d);
        const double dev_l = std::abs(fit.params.r_lower - truth.r_lower);
        const double dev_u = std::abs(fit.params.r_upper - truth.r_upper);
        if (dev_l > res_l || dev_u > res_u) ok = false;
        detail += ", |r_L dev| " + fmt(dev_l) + " vs resolution " + fmt(res_l);
        detail += ", |r_U dev| " + fmt(dev_u) + " vs resolution " + fmt(res_u);

        const auto lam_hat = fit.params.lambda();
        const auto lam0 = truth.lambda();
        double worst_z = 0.0;
        for (int i = 0; i < lam0.size(); ++i) {
            const double z = std::abs(lam_hat[i] - lam0[i]) / cov.se[i];
            worst_z = std::max(worst_z, z);
        }
        if (worst_z > 4.0) ok = false;
        detail += ", worst |dev|/SE " + fmt(worst_z);
        return std::make_pair(ok, detail);
    });

    std::cout << (gate.failures == 0 ? "ALL CRITERIA PASSED"
                                     : std::to_string(gate.failures) + " CRITERIA FAILED")
              << std::endl;
    return gate.failures;
}

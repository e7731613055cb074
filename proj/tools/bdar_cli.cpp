// Command-line front end: simulation, stationarity certificates, fitting,
// order selection, residual diagnostics, and Monte Carlo studies.
//
// Output convention: machine-readable JSON goes to stdout, human-readable
// tables to stderr.  Exit codes: 0 ok, 2 usage error, 3 data error,
// 4 numerical failure.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

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
#include "bdar/types.hpp"

namespace {

using bdar::io::json;

int exit_code_for(bdar::ErrorCategory cat) {
    switch (cat) {
        case bdar::ErrorCategory::usage: return 2;
        case bdar::ErrorCategory::data: return 3;
        case bdar::ErrorCategory::numerical: return 4;
    }
    return 4;
}

const char* category_name(bdar::ErrorCategory cat) {
    switch (cat) {
        case bdar::ErrorCategory::usage: return "usage";
        case bdar::ErrorCategory::data: return "data";
        case bdar::ErrorCategory::numerical: return "numerical";
    }
    return "numerical";
}

struct DataOptions {
    std::string path;
    std::string format = "returns";
    std::string transform = "none";
    int pre_sample = -1;  // -1: derive from the fit configuration
};

void add_data_options(CLI::App* cmd, DataOptions& opts) {
    cmd->add_option("--data", opts.path, "input CSV path")->required();
    cmd->add_option("--format", opts.format, "CSV layout: returns (one column) or prices (date,price)")
        ->check(CLI::IsMember({"returns", "prices"}));
    cmd->add_option("--transform", opts.transform,
                    "none or log-return-pct (y = 100*(log P_t - log P_{t-1}))")
        ->check(CLI::IsMember({"none", "log-return-pct"}));
    cmd->add_option("--pre-sample", opts.pre_sample,
                    "observations reserved as lag history (default max(p, d_max))");
}

bdar::TimeSeries load_series(const DataOptions& opts, std::size_t default_pre_sample) {
    bdar::io::DatasetSpec spec;
    spec.path = opts.path;
    spec.format = opts.format == "prices" ? bdar::io::DatasetSpec::Format::prices_csv
                                          : bdar::io::DatasetSpec::Format::returns_csv;
    spec.transform = opts.transform == "log-return-pct"
                         ? bdar::io::DatasetSpec::Transform::log_return_pct
                         : bdar::io::DatasetSpec::Transform::none;
    bdar::TimeSeries y = bdar::io::ingest(spec);
    const std::size_t n0 =
        opts.pre_sample >= 0 ? static_cast<std::size_t>(opts.pre_sample) : default_pre_sample;
    return y.with_pre_sample(n0);
}

struct SearchOptions {
    double pct_lo = 10.0;
    double pct_hi = 90.0;
    int d_max = 6;
    double min_regime_frac = 0.05;
    int min_regime_count = -1;
    int thin = 1;
    int max_iters = 200;
    double tolerance = bdar::OptimizerConfig{}.tolerance;
    int n_starts = 3;
    int threads = 0;
};

void add_search_options(CLI::App* cmd, SearchOptions& opts) {
    cmd->add_option("--pct-lo", opts.pct_lo, "lower threshold-candidate percentile");
    cmd->add_option("--pct-hi", opts.pct_hi, "upper threshold-candidate percentile");
    cmd->add_option("--d-max", opts.d_max, "largest delay searched");
    cmd->add_option("--min-regime-frac", opts.min_regime_frac,
                    "minimum fraction of the sample per regime");
    cmd->add_option("--min-regime-count", opts.min_regime_count,
                    "minimum observations per regime (-1: 10*(p+1))");
    cmd->add_option("--thin", opts.thin, "stride over candidate order statistics");
    cmd->add_option("--max-iters", opts.max_iters, "inner optimizer iteration cap");
    cmd->add_option("--tol", opts.tolerance, "inner optimizer gradient tolerance");
    cmd->add_option("--n-starts", opts.n_starts, "multistarts per sub-fit");
    cmd->add_option("--threads", opts.threads, "worker threads (0: BDAR_THREADS or hardware)");
}

bdar::SearchConfig to_config(const SearchOptions& opts) {
    bdar::SearchConfig cfg;
    cfg.percentile_lo = opts.pct_lo;
    cfg.percentile_hi = opts.pct_hi;
    cfg.d_max = opts.d_max;
    cfg.min_regime_frac = opts.min_regime_frac;
    cfg.min_regime_count = opts.min_regime_count;
    cfg.grid_thinning = opts.thin;
    cfg.optimizer.max_iters = opts.max_iters;
    cfg.optimizer.tolerance = opts.tolerance;
    cfg.optimizer.n_starts = opts.n_starts;
    cfg.n_threads = opts.threads;
    return cfg;
}

struct InnovationOptions {
    std::string kind = "normal";
    double nu = 5.0;
};

void add_innovation_options(CLI::App* cmd, InnovationOptions& opts) {
    cmd->add_option("--innovation", opts.kind, "normal or t (standardized)")
        ->check(CLI::IsMember({"normal", "t"}));
    cmd->add_option("--nu", opts.nu, "degrees of freedom for t innovations (> 2)");
}

bdar::InnovationSpec to_innovation(const InnovationOptions& opts) {
    if (opts.kind == "t") return bdar::InnovationSpec::student_t(opts.nu);
    return bdar::InnovationSpec::standard_normal();
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string fmt(double v, int prec = 4) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(prec) << v;
    return ss.str();
}

void print_coeff_row(std::ostream& os, const std::string& label, const Eigen::VectorXd& v,
                     const double* se, int q) {
    os << "  " << std::setw(9) << std::left << label << std::right;
    for (int j = 0; j < q; ++j) {
        os << "  " << fmt(v[j]);
        if (se != nullptr) os << " (" << fmt(se[j]) << ")";
    }
    os << "\n";
}

void print_fit_human(std::ostream& os, const bdar::FitResult& fit,
                     const bdar::AsymptoticCovariance* cov) {
    const int q = fit.params.p + 1;
    const auto se_block = [&](int offset) -> const double* {
        return cov != nullptr ? cov->se.data() + offset : nullptr;
    };
    os << "fitted model (p = " << fit.params.p << ", d = " << fit.params.d << ")\n";
    os << "thresholds: r_lower = " << fmt(fit.params.r_lower)
       << ", r_upper = " << fmt(fit.params.r_upper)
       << " (no standard errors: thresholds converge at rate n)\n";
    os << "regime 1 (threshold lag <= r_lower, inherited inside the buffer), n1 = " << fit.n1
       << ":\n";
    print_coeff_row(os, "mean", fit.params.phi1, se_block(0), q);
    print_coeff_row(os, "variance", fit.params.alpha1, se_block(q), q);
    os << "regime 2 (threshold lag > r_upper), n2 = " << fit.n2 << ":\n";
    print_coeff_row(os, "mean", fit.params.phi2, se_block(2 * q), q);
    print_coeff_row(os, "variance", fit.params.alpha2, se_block(3 * q), q);
    os << "loss (-2 quasi-log-likelihood, constant dropped): " << fmt(fit.neg2_loglik, 6) << "\n";
    os << "grid cells evaluated: " << fit.grid_cells_evaluated
       << ", converged: " << (fit.converged ? "yes" : "no") << "\n";
    if (cov != nullptr)
        os << "residual moments: kappa3 = " << fmt(cov->kappa3) << ", kappa4 = "
           << fmt(cov->kappa4) << "\n";
}

// ---------------------------------------------------------------- simulate
int run_simulate(const std::string& params_path, const InnovationOptions& innov_opts,
                 std::size_t n, std::uint64_t seed, std::size_t burn_in, int pre_sample,
                 const std::string& out_path) {
    const bdar::BdarParams params =
        bdar::io::params_from_json(bdar::io::read_json_file(params_path));
    const bdar::InnovationSpec innov = to_innovation(innov_opts);
    bdar::Rng rng(seed);
    bdar::SimulateOptions so;
    so.burn_in = burn_in;
    so.n0_override = pre_sample;
    const bdar::TimeSeries y = bdar::simulate(params, n, innov, rng, so);
    bdar::io::write_series_csv(out_path, y);

    std::cerr << "wrote " << y.size() << " values (" << y.pre_sample_len
              << " pre-sample + " << y.sample_size() << " sample) to " << out_path << "\n";
    emit(json{{"kind", "simulate_report"},
              {"n", y.sample_size()},
              {"pre_sample_len", y.pre_sample_len},
              {"seed", seed},
              {"out", out_path},
              {"params", bdar::io::to_json(params)},
              {"innovation", bdar::io::to_json(innov)}});
    return 0;
}

// ---------------------------------------------------- check-stationarity
int run_check_stationarity(const std::string& params_path, const InnovationOptions& innov_opts) {
    const bdar::BdarParams params =
        bdar::io::params_from_json(bdar::io::read_json_file(params_path));
    const bdar::InnovationSpec innov = to_innovation(innov_opts);
    const bdar::StationarityReport rep = bdar::check_stationarity(params, innov);

    std::cerr << "condition i   (r in (0,1]): value " << fmt(rep.condition_i.value, 6)
              << " at r = " << fmt(rep.condition_i.r_used, 2)
              << (rep.condition_i.holds ? "  holds" : "  does not hold") << "\n";
    std::cerr << "condition ii  (r in (1,2], symmetric density): value "
              << fmt(rep.condition_ii.value, 6) << " at r = " << fmt(rep.condition_ii.r_used, 2)
              << (rep.condition_ii.holds ? "  holds" : "  does not hold") << "\n";
    std::cerr << "condition iii (fourth moment): value " << fmt(rep.condition_iii.value, 6)
              << (rep.condition_iii.holds ? "  holds" : "  does not hold") << "\n";
    std::cerr << (rep.any_holds
                      ? "stationarity certified (sufficient condition met)\n"
                      : "not certified: no sufficient condition met (model may still be "
                        "stationary)\n");
    emit(bdar::io::to_json(rep));
    return 0;
}

// --------------------------------------------------------------------- fit
int run_fit(const DataOptions& data_opts, int p, const SearchOptions& search_opts,
            const std::string& json_path) {
    const bdar::SearchConfig cfg = to_config(search_opts);
    const std::size_t default_n0 = static_cast<std::size_t>(std::max(p, cfg.d_max));
    const bdar::TimeSeries y = load_series(data_opts, default_n0);
    const bdar::FitResult fit = bdar::fit(y, p, cfg);

    const bdar::AsymptoticCovariance* cov_ptr = nullptr;
    bdar::AsymptoticCovariance cov;
    try {
        cov = bdar::asymptotic_se(fit, y);
        cov_ptr = &cov;
    } catch (const bdar::Error& e) {
        std::cerr << "warning: standard errors unavailable: " << e.what() << "\n";
    }

    print_fit_human(std::cerr, fit, cov_ptr);
    const json j = bdar::io::to_json(fit, cov_ptr);
    if (!json_path.empty()) bdar::io::write_json_file(json_path, j);
    emit(j);
    return 0;
}

// ------------------------------------------------------------------ select
int run_select(const DataOptions& data_opts, int p_max, bool include_p0,
               const SearchOptions& search_opts, const std::string& json_path) {
    const bdar::SearchConfig cfg = to_config(search_opts);
    const std::size_t default_n0 = static_cast<std::size_t>(std::max(p_max, cfg.d_max));
    const bdar::TimeSeries y = load_series(data_opts, default_n0);
    const bdar::BicTable table = bdar::select_order(y, p_max, cfg, include_p0);

    std::cerr << std::setw(4) << "p" << std::setw(14) << "bic" << std::setw(14) << "loss"
              << std::setw(8) << "n1" << std::setw(8) << "n2" << "\n";
    for (const bdar::BicRow& row : table.rows) {
        if (row.failed) {
            std::cerr << std::setw(4) << row.p << "  failed: " << row.error << "\n";
            continue;
        }
        std::cerr << std::setw(4) << row.p << std::setw(14) << fmt(row.bic, 4) << std::setw(14)
                  << fmt(row.neg2_loglik, 4) << std::setw(8) << row.n1 << std::setw(8) << row.n2
                  << (row.p == table.chosen_p ? "   <- chosen" : "") << "\n";
    }
    const json j = bdar::io::to_json(table);
    if (!json_path.empty()) bdar::io::write_json_file(json_path, j);
    emit(j);
    return 0;
}

// ---------------------------------------------------------------- diagnose
int run_diagnose(const std::string& fit_path, std::vector<int> lags, int max_lag,
                 const std::string& acf_out) {
    const json fit_json = bdar::io::read_json_file(fit_path);
    if (!fit_json.contains("standardized_residuals"))
        throw bdar::ParseError("fit file has no standardized_residuals array");
    const std::vector<double> resid =
        fit_json.at("standardized_residuals").get<std::vector<double>>();

    if (lags.empty()) lags = {6, 12};
    std::sort(lags.begin(), lags.end());

    bdar::io::DiagnoseReport report;
    for (const int m : lags) {
        report.tests.push_back(bdar::ljung_box(resid, m));
        report.tests.push_back(bdar::mcleod_li(resid, m));
    }
    const int acf_lags = std::max(max_lag, lags.back());
    report.residual_acf = bdar::acf(resid, acf_lags);
    std::vector<double> sq(resid.size());
    for (std::size_t i = 0; i < resid.size(); ++i) sq[i] = resid[i] * resid[i];
    report.squared_residual_acf = bdar::acf(sq, acf_lags);

    for (const bdar::PortmanteauResult& t : report.tests)
        std::cerr << (t.kind == "ljung_box" ? "Ljung-Box  " : "McLeod-Li  ") << "m = "
                  << std::setw(2) << t.m << "  statistic = " << fmt(t.statistic, 4)
                  << "  p-value = " << fmt(t.p_value, 4) << "\n";
    std::cerr << "ACF white-noise band: +/- " << fmt(report.residual_acf.band, 4) << "\n";

    if (!acf_out.empty()) {
        std::ofstream out(acf_out);
        if (!out) throw bdar::ParseError("cannot open output file: " + acf_out);
        out << "lag,acf_residuals,acf_squared_residuals\n";
        for (int k = 1; k <= acf_lags; ++k) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", k,
                          report.residual_acf.rho[static_cast<std::size_t>(k - 1)],
                          report.squared_residual_acf.rho[static_cast<std::size_t>(k - 1)]);
            out << buf;
        }
        std::cerr << "wrote ACF table to " << acf_out << "\n";
    }
    emit(bdar::io::to_json(report));
    return 0;
}

// ---------------------------------------------------------------------- mc
int run_mc(const std::string& design_path, const std::string& out_path,
           const std::string& hist_dir, int threads) {
    bdar::McDesign design = bdar::io::mc_design_from_json(bdar::io::read_json_file(design_path));
    design.n_threads = threads;

    const bdar::McReport report = design.mode == bdar::McDesign::Mode::estimation_study
                                      ? bdar::run_estimation_study(design)
                                      : bdar::run_selection_study(design);

    for (const bdar::SampleSizeReport& sr : report.per_n) {
        std::cerr << "n = " << sr.n << ": " << sr.replications_used << " replications used, "
                  << sr.failures << " failed";
        if (sr.has_selection_rate) {
            std::cerr << ", correct order rate = " << fmt(sr.selection_rate, 3) << "\n";
            continue;
        }
        std::cerr << ", d hit rate = " << fmt(sr.d_hit_rate, 3)
                  << " (wall " << fmt(sr.wall_time_seconds, 1) << "s)\n";
        std::cerr << std::setw(10) << "coef" << std::setw(12) << "truth" << std::setw(12)
                  << "bias" << std::setw(12) << "esd" << std::setw(12) << "asd" << "\n";
        for (const bdar::CoefficientStats& cs : sr.coefficients) {
            std::cerr << std::setw(10) << cs.name << std::setw(12) << fmt(cs.truth)
                      << std::setw(12) << fmt(cs.bias) << std::setw(12) << fmt(cs.esd);
            if (cs.has_asd) std::cerr << std::setw(12) << fmt(cs.asd_mean);
            std::cerr << "\n";
        }
    }

    const json j = bdar::io::to_json(report);
    bdar::io::write_json_file(out_path, j);
    std::cerr << "wrote report to " << out_path << "\n";

    if (design.mode == bdar::McDesign::Mode::estimation_study) {
        const std::string dir = hist_dir.empty() ? "." : hist_dir;
        for (const bdar::SampleSizeReport& sr : report.per_n) {
            const std::string lo = dir + "/threshold_devs_lower_n" + std::to_string(sr.n) + ".csv";
            const std::string hi = dir + "/threshold_devs_upper_n" + std::to_string(sr.n) + ".csv";
            bdar::io::write_samples_csv(lo, "n_times_r_lower_dev", sr.r_lower_devs);
            bdar::io::write_samples_csv(hi, "n_times_r_upper_dev", sr.r_upper_devs);
            std::cerr << "wrote " << lo << " and " << hi << "\n";
        }
    }
    emit(j);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"buffered two-regime conditional-heteroscedastic AR toolkit"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "draw a sample path from a parameter file");
    std::string sim_params, sim_out;
    InnovationOptions sim_innov;
    std::uint64_t sim_seed = 0;
    std::size_t sim_n = 0, sim_burn = 500;
    int sim_pre = -1;
    sim->add_option("--params", sim_params, "parameter JSON file")->required();
    sim->add_option("--n", sim_n, "sample size (excluding pre-sample)")->required();
    sim->add_option("--seed", sim_seed, "RNG seed")->required();
    sim->add_option("--out", sim_out, "output CSV path")->required();
    sim->add_option("--burn-in", sim_burn, "discarded transient length");
    sim->add_option("--pre-sample", sim_pre, "pre-sample length (default max(p, d))");
    add_innovation_options(sim, sim_innov);

    // check-stationarity
    auto* chk = app.add_subcommand("check-stationarity",
                                   "evaluate the sufficient ergodicity conditions");
    std::string chk_params;
    InnovationOptions chk_innov;
    chk->add_option("--params", chk_params, "parameter JSON file")->required();
    add_innovation_options(chk, chk_innov);

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "two-step profile QMLE on a data file");
    DataOptions fit_data;
    SearchOptions fit_search;
    int fit_p = 1;
    std::string fit_json;
    add_data_options(fit_cmd, fit_data);
    fit_cmd->add_option("--p", fit_p, "autoregressive order")->required();
    add_search_options(fit_cmd, fit_search);
    fit_cmd->add_option("--json", fit_json, "also write the JSON report to this path");

    // select
    auto* sel = app.add_subcommand("select", "order selection by penalized likelihood");
    DataOptions sel_data;
    SearchOptions sel_search;
    int sel_pmax = 4;
    bool sel_p0 = false;
    std::string sel_json;
    add_data_options(sel, sel_data);
    sel->add_option("--p-max", sel_pmax, "largest order tried")->required();
    sel->add_flag("--include-p0", sel_p0, "also try the intercept-only order");
    add_search_options(sel, sel_search);
    sel->add_option("--json", sel_json, "also write the JSON report to this path");

    // diagnose
    auto* dia = app.add_subcommand("diagnose", "portmanteau tests and ACF on a saved fit");
    std::string dia_fit, dia_acf_out;
    std::vector<int> dia_m;
    int dia_max_lag = 12;
    dia->add_option("--fit", dia_fit, "fit JSON file (from `fit --json`)")->required();
    dia->add_option("--m", dia_m, "portmanteau lag counts (default 6 12)")->delimiter(',');
    dia->add_option("--max-lag", dia_max_lag, "ACF lags to emit");
    dia->add_option("--acf-out", dia_acf_out, "write ACF table CSV here");

    // mc
    auto* mc = app.add_subcommand("mc", "Monte Carlo study from a design file");
    std::string mc_design, mc_out, mc_hist_dir;
    int mc_threads = 0;
    mc->add_option("--design", mc_design, "design JSON file")->required();
    mc->add_option("--out", mc_out, "report JSON path")->required();
    mc->add_option("--hist-dir", mc_hist_dir, "directory for threshold-deviation CSVs");
    mc->add_option("--threads", mc_threads, "worker threads (0: BDAR_THREADS or hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e);
            return 0;
        }
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    }

    try {
        if (sim->parsed())
            return run_simulate(sim_params, sim_innov, sim_n, sim_seed, sim_burn, sim_pre,
                                sim_out);
        if (chk->parsed()) return run_check_stationarity(chk_params, chk_innov);
        if (fit_cmd->parsed()) return run_fit(fit_data, fit_p, fit_search, fit_json);
        if (sel->parsed()) return run_select(sel_data, sel_pmax, sel_p0, sel_search, sel_json);
        if (dia->parsed()) return run_diagnose(dia_fit, dia_m, dia_max_lag, dia_acf_out);
        if (mc->parsed()) return run_mc(mc_design, mc_out, mc_hist_dir, mc_threads);
    } catch (const bdar::Error& e) {
        std::cerr << "error: " << category_name(e.category()) << ": " << e.what() << "\n";
        return exit_code_for(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: numerical: " << e.what() << "\n";
        return 4;
    }
    std::cerr << "error: usage: no subcommand selected\n";
    return 2;
}

// Python bindings for the main operations.  Structured inputs and outputs
// travel as JSON text so the python layer and the CLI share one
// serialization, byte for byte.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

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

namespace py = pybind11;
using bdar::io::json;

namespace {

json parse(const std::string& text, const char* what) {
    return bdar::io::parse_json_text(text, what);
}

bdar::TimeSeries make_series(std::vector<double> values, std::size_t pre_sample) {
    bdar::TimeSeries y;
    y.values = std::move(values);
    y.pre_sample_len = pre_sample;
    y.validate();
    return y;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "buffered two-regime conditional-heteroscedastic AR toolkit";

    m.def(
        "simulate",
        [](const std::string& params_json, std::size_t n, std::uint64_t seed,
           const std::string& innovation_json, std::size_t burn_in, int pre_sample) {
            const bdar::BdarParams params =
                bdar::io::params_from_json(parse(params_json, "params"));
            const bdar::InnovationSpec innov =
                bdar::io::innovation_from_json(parse(innovation_json, "innovation"));
            bdar::Rng rng(seed);
            bdar::SimulateOptions so;
            so.burn_in = burn_in;
            so.n0_override = pre_sample;
            const bdar::TimeSeries y = bdar::simulate(params, n, innov, rng, so);
            return std::make_pair(y.values, y.pre_sample_len);
        },
        py::arg("params_json"), py::arg("n"), py::arg("seed"),
        py::arg("innovation_json") = "{\"kind\":\"standard_normal\"}",
        py::arg("burn_in") = 500, py::arg("pre_sample") = -1,
        py::call_guard<py::gil_scoped_release>(),
        "Draw a sample path; returns (values, pre_sample_len).");

    m.def(
        "check_stationarity",
        [](const std::string& params_json, const std::string& innovation_json) {
            const bdar::BdarParams params =
                bdar::io::params_from_json(parse(params_json, "params"));
            const bdar::InnovationSpec innov =
                bdar::io::innovation_from_json(parse(innovation_json, "innovation"));
            return bdar::io::to_json(bdar::check_stationarity(params, innov)).dump(2);
        },
        py::arg("params_json"),
        py::arg("innovation_json") = "{\"kind\":\"standard_normal\"}",
        py::call_guard<py::gil_scoped_release>(),
        "Evaluate the sufficient ergodicity certificates; returns report JSON.");

    m.def(
        "fit",
        [](std::vector<double> values, std::size_t pre_sample, int p,
           const std::string& config_json, bool with_inference) {
            const bdar::TimeSeries y = make_series(std::move(values), pre_sample);
            const bdar::SearchConfig cfg =
                bdar::io::search_config_from_json(parse(config_json, "config"));
            const bdar::FitResult res = bdar::fit(y, p, cfg);
            const bdar::AsymptoticCovariance* cov_ptr = nullptr;
            bdar::AsymptoticCovariance cov;
            if (with_inference) {
                cov = bdar::asymptotic_se(res, y);
                cov_ptr = &cov;
            }
            return bdar::io::to_json(res, cov_ptr).dump(2);
        },
        py::arg("values"), py::arg("pre_sample"), py::arg("p"),
        py::arg("config_json") = "{}", py::arg("with_inference") = true,
        py::call_guard<py::gil_scoped_release>(),
        "Two-step profile QMLE; returns fit-result JSON.");

    m.def(
        "select_order",
        [](std::vector<double> values, std::size_t pre_sample, int p_max,
           const std::string& config_json, bool include_p0) {
            const bdar::TimeSeries y = make_series(std::move(values), pre_sample);
            const bdar::SearchConfig cfg =
                bdar::io::search_config_from_json(parse(config_json, "config"));
            return bdar::io::to_json(bdar::select_order(y, p_max, cfg, include_p0)).dump(2);
        },
        py::arg("values"), py::arg("pre_sample"), py::arg("p_max"),
        py::arg("config_json") = "{}", py::arg("include_p0") = false,
        py::call_guard<py::gil_scoped_release>(),
        "Penalized-likelihood order selection; returns table JSON.");

    m.def(
        "neg2_loglik",
        [](const std::string& params_json, std::vector<double> values, std::size_t pre_sample) {
            const bdar::BdarParams params =
                bdar::io::params_from_json(parse(params_json, "params"));
            const bdar::TimeSeries y = make_series(std::move(values), pre_sample);
            const bdar::Neg2LogLik r = bdar::neg2_loglik(params, y);
            return py::make_tuple(r.total, r.n1, r.n2, r.degenerate_regime);
        },
        py::arg("params_json"), py::arg("values"), py::arg("pre_sample"),
        "Modified quasi-likelihood; returns (total, n1, n2, degenerate_regime).");

    m.def(
        "acf",
        [](const std::vector<double>& x, int max_lag) {
            const bdar::AcfResult r = bdar::acf(x, max_lag);
            return std::make_pair(r.rho, r.band);
        },
        py::arg("x"), py::arg("max_lag"),
        "Sample autocorrelations; returns (rho list, white-noise band).");

    m.def(
        "ljung_box",
        [](const std::vector<double>& x, int m_lags) {
            const bdar::PortmanteauResult r = bdar::ljung_box(x, m_lags);
            return std::make_pair(r.statistic, r.p_value);
        },
        py::arg("x"), py::arg("m"), "Ljung-Box test; returns (statistic, p_value).");

    m.def(
        "mcleod_li",
        [](const std::vector<double>& x, int m_lags) {
            const bdar::PortmanteauResult r = bdar::mcleod_li(x, m_lags);
            return std::make_pair(r.statistic, r.p_value);
        },
        py::arg("x"), py::arg("m"),
        "Portmanteau test on centered squared values; returns (statistic, p_value).");

    m.def(
        "run_mc",
        [](const std::string& design_json, int n_threads) {
            bdar::McDesign design =
                bdar::io::mc_design_from_json(parse(design_json, "design"));
            design.n_threads = n_threads;
            const bdar::McReport report =
                design.mode == bdar::McDesign::Mode::estimation_study
                    ? bdar::run_estimation_study(design)
                    : bdar::run_selection_study(design);
            return bdar::io::to_json(report).dump(2);
        },
        py::arg("design_json"), py::arg("n_threads") = 0,
        py::call_guard<py::gil_scoped_release>(),
        "Monte Carlo study from a design document; returns report JSON.");
}

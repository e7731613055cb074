#include "bdar/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bdar/errors.hpp"

namespace bdar::io {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_double(const std::string& field, double& out) {
    const std::string t = trim(field);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size() && std::isfinite(out);
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::vector<double> eigen_to_vec(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vec_to_eigen(const std::vector<double>& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const json& require_key(const json& j, const char* key, const std::string& what) {
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(what + " is missing required key \"" + key + "\"");
    return *it;
}

} // namespace

TimeSeries ingest(const DatasetSpec& spec) {
    std::ifstream in(spec.path);
    if (!in) throw ParseError("cannot open data file: " + spec.path);

    const bool want_price_column = spec.format == DatasetSpec::Format::prices_csv;
    std::vector<double> column;
    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_csv_row(line);
        std::string field;
        if (want_price_column) {
            if (fields.size() < 2) {
                if (first_content_line) {
                    first_content_line = false;
                    continue;  // header with a single cell
                }
                throw ParseError(spec.path + ":" + std::to_string(line_no) +
                                 ": expected date,price columns");
            }
            field = fields[1];
        } else {
            field = fields[0];
        }
        double v = 0.0;
        if (!parse_double(field, v)) {
            if (first_content_line) {
                first_content_line = false;
                continue;  // header row
            }
            throw ParseError(spec.path + ":" + std::to_string(line_no) +
                             ": cannot parse numeric value from \"" + trim(field) + "\"");
        }
        first_content_line = false;
        column.push_back(v);
    }
    if (column.empty()) throw InsufficientDataError("no numeric rows in " + spec.path);

    TimeSeries y;
    if (spec.transform == DatasetSpec::Transform::log_return_pct) {
        if (column.size() < 2)
            throw InsufficientDataError("log-return transform needs at least 2 rows");
        y.values.reserve(column.size() - 1);
        for (std::size_t i = 0; i < column.size(); ++i) {
            if (!(column[i] > 0.0))
                throw DomainError("nonpositive price at data row " + std::to_string(i + 1) +
                                  " under the log-return transform");
            if (i > 0) y.values.push_back(100.0 * (std::log(column[i]) - std::log(column[i - 1])));
        }
    } else {
        y.values = std::move(column);
    }
    y.pre_sample_len = 0;
    return y;
}

void write_series_csv(const std::string& path, const TimeSeries& y) {
    write_samples_csv(path, "y", y.values);
}

void write_samples_csv(const std::string& path, const std::string& column,
                       const std::vector<double>& samples) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << column << "\n";
    for (const double v : samples) out << format_g17(v) << "\n";
    if (!out) throw ParseError("write failed: " + path);
}

json to_json(const BdarParams& params) {
    return json{{"p", params.p},
                {"d", params.d},
                {"phi1", eigen_to_vec(params.phi1)},
                {"alpha1", eigen_to_vec(params.alpha1)},
                {"phi2", eigen_to_vec(params.phi2)},
                {"alpha2", eigen_to_vec(params.alpha2)},
                {"r_lower", params.r_lower},
                {"r_upper", params.r_upper}};
}

BdarParams params_from_json(const json& j) {
    try {
        BdarParams p;
        p.p = require_key(j, "p", "params").get<int>();
        p.d = require_key(j, "d", "params").get<int>();
        p.phi1 = vec_to_eigen(require_key(j, "phi1", "params").get<std::vector<double>>());
        p.alpha1 = vec_to_eigen(require_key(j, "alpha1", "params").get<std::vector<double>>());
        p.phi2 = vec_to_eigen(require_key(j, "phi2", "params").get<std::vector<double>>());
        p.alpha2 = vec_to_eigen(require_key(j, "alpha2", "params").get<std::vector<double>>());
        p.r_lower = require_key(j, "r_lower", "params").get<double>();
        p.r_upper = require_key(j, "r_upper", "params").get<double>();
        p.validate();
        return p;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed params object: ") + e.what());
    }
}

json to_json(const InnovationSpec& innov) {
    switch (innov.kind) {
        case InnovationSpec::Kind::standard_normal:
            return json{{"kind", "standard_normal"}};
        case InnovationSpec::Kind::standardized_student_t:
            return json{{"kind", "standardized_student_t"}, {"nu", innov.nu}};
        case InnovationSpec::Kind::custom_iid:
            break;
    }
    throw InvalidParamsError("a custom innovation sampler has no serialized form");
}

InnovationSpec innovation_from_json(const json& j) {
    try {
        const std::string kind = require_key(j, "kind", "innovation").get<std::string>();
        if (kind == "standard_normal") return InnovationSpec::standard_normal();
        if (kind == "standardized_student_t")
            return InnovationSpec::student_t(require_key(j, "nu", "innovation").get<double>());
        throw ParseError("unknown innovation kind \"" + kind + "\"");
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed innovation object: ") + e.what());
    }
}

json to_json(const SearchConfig& cfg) {
    return json{{"percentile_lo", cfg.percentile_lo},
                {"percentile_hi", cfg.percentile_hi},
                {"d_max", cfg.d_max},
                {"min_regime_frac", cfg.min_regime_frac},
                {"min_regime_count", cfg.min_regime_count},
                {"grid_thinning", cfg.grid_thinning},
                {"optimizer",
                 {{"max_iters", cfg.optimizer.max_iters},
                  {"tolerance", cfg.optimizer.tolerance},
                  {"n_starts", cfg.optimizer.n_starts}}}};
}

SearchConfig search_config_from_json(const json& j) {
    try {
        SearchConfig cfg;
        cfg.percentile_lo = j.value("percentile_lo", cfg.percentile_lo);
        cfg.percentile_hi = j.value("percentile_hi", cfg.percentile_hi);
        cfg.d_max = j.value("d_max", cfg.d_max);
        cfg.min_regime_frac = j.value("min_regime_frac", cfg.min_regime_frac);
        cfg.min_regime_count = j.value("min_regime_count", cfg.min_regime_count);
        cfg.grid_thinning = j.value("grid_thinning", cfg.grid_thinning);
        if (j.contains("optimizer")) {
            const json& o = j.at("optimizer");
            cfg.optimizer.max_iters = o.value("max_iters", cfg.optimizer.max_iters);
            cfg.optimizer.tolerance = o.value("tolerance", cfg.optimizer.tolerance);
            cfg.optimizer.n_starts = o.value("n_starts", cfg.optimizer.n_starts);
        }
        return cfg;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed search config: ") + e.what());
    }
}

json to_json(const StationarityReport& report) {
    return json{{"kind", "stationarity_report"},
                {"condition_i",
                 {{"value", report.condition_i.value},
                  {"holds", report.condition_i.holds},
                  {"r_used", report.condition_i.r_used}}},
                {"condition_ii",
                 {{"value", report.condition_ii.value},
                  {"holds", report.condition_ii.holds},
                  {"r_used", report.condition_ii.r_used},
                  {"requires_symmetric_density", report.condition_ii.requires_symmetric_density}}},
                {"condition_iii",
                 {{"value", report.condition_iii.value}, {"holds", report.condition_iii.holds}}},
                {"any_holds", report.any_holds}};
}

json to_json(const FitResult& fit, const AsymptoticCovariance* cov) {
    json j{{"kind", "fit_result"},
           {"params", to_json(fit.params)},
           {"neg2_loglik", fit.neg2_loglik},
           {"n1", fit.n1},
           {"n2", fit.n2},
           {"converged", fit.converged},
           {"grid_cells_evaluated", fit.grid_cells_evaluated},
           {"standardized_residuals", fit.standardized_residuals}};
    if (cov != nullptr) {
        const int q = fit.params.p + 1;
        const auto block = [&](int offset) {
            std::vector<double> se(static_cast<std::size_t>(q));
            for (int i = 0; i < q; ++i) se[static_cast<std::size_t>(i)] = cov->se[offset + i];
            return se;
        };
        j["inference"] = json{{"kappa3", cov->kappa3},
                              {"kappa4", cov->kappa4},
                              {"se",
                               {{"phi1", block(0)},
                                {"alpha1", block(q)},
                                {"phi2", block(2 * q)},
                                {"alpha2", block(3 * q)}}}};
    }
    return j;
}

json to_json(const BicTable& table) {
    json rows = json::array();
    for (const BicRow& row : table.rows) {
        json r{{"p", row.p}, {"failed", row.failed}};
        if (row.failed) {
            r["error"] = row.error;
        } else {
            r["bic"] = row.bic;
            r["neg2_loglik"] = row.neg2_loglik;
            r["n1"] = row.n1;
            r["n2"] = row.n2;
            r["params"] = to_json(row.fit.params);
        }
        rows.push_back(std::move(r));
    }
    return json{{"kind", "bic_table"}, {"rows", std::move(rows)}, {"chosen_p", table.chosen_p}};
}

json to_json(const McDesign& design) {
    json j{{"dgp", to_json(design.dgp)},
           {"innovation", to_json(design.innovation)},
           {"sample_sizes", design.sample_sizes},
           {"replications", design.replications},
           {"seed", design.seed},
           {"mode",
            design.mode == McDesign::Mode::estimation_study ? "estimation_study"
                                                            : "selection_study"},
           {"force_uncertified", design.force_uncertified},
           {"fit", to_json(design.fit_config)}};
    if (design.mode == McDesign::Mode::selection_study) {
        j["p_max"] = design.p_max;
        j["include_p0"] = design.include_p0;
    }
    return j;
}

McDesign mc_design_from_json(const json& j) {
    try {
        McDesign d;
        d.dgp = params_from_json(require_key(j, "dgp", "design"));
        d.innovation = innovation_from_json(require_key(j, "innovation", "design"));
        d.sample_sizes =
            require_key(j, "sample_sizes", "design").get<std::vector<std::size_t>>();
        d.replications = require_key(j, "replications", "design").get<int>();
        d.seed = require_key(j, "seed", "design").get<std::uint64_t>();
        const std::string mode = require_key(j, "mode", "design").get<std::string>();
        if (mode == "estimation_study") d.mode = McDesign::Mode::estimation_study;
        else if (mode == "selection_study") d.mode = McDesign::Mode::selection_study;
        else throw ParseError("unknown study mode \"" + mode + "\"");
        d.p_max = j.value("p_max", 4);
        d.include_p0 = j.value("include_p0", false);
        d.force_uncertified = j.value("force_uncertified", false);
        if (j.contains("fit")) d.fit_config = search_config_from_json(j.at("fit"));
        d.validate();
        return d;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed design object: ") + e.what());
    }
}

json to_json(const McReport& report) {
    json per_n = json::array();
    for (const SampleSizeReport& sr : report.per_n) {
        json row{{"n", sr.n},
                 {"replications_used", sr.replications_used},
                 {"failures", sr.failures}};
        if (sr.has_selection_rate) {
            row["selection_rate"] = sr.selection_rate;
        } else {
            json coeffs = json::array();
            for (const CoefficientStats& cs : sr.coefficients) {
                json c{{"name", cs.name},
                       {"truth", cs.truth},
                       {"bias", cs.bias},
                       {"esd", cs.esd}};
                if (cs.has_asd) c["asd_mean"] = cs.asd_mean;
                coeffs.push_back(std::move(c));
            }
            row["coefficients"] = std::move(coeffs);
            row["d_hit_rate"] = sr.d_hit_rate;
            row["r_lower_devs"] = sr.r_lower_devs;
            row["r_upper_devs"] = sr.r_upper_devs;
        }
        per_n.push_back(std::move(row));
    }
    return json{{"kind", "mc_report"},
                {"stationarity", report.stationarity_note},
                {"per_n", std::move(per_n)}};
}

json to_json(const DiagnoseReport& report) {
    json tests = json::array();
    for (const PortmanteauResult& t : report.tests) {
        tests.push_back(json{{"kind", t.kind},
                             {"m", t.m},
                             {"statistic", t.statistic},
                             {"p_value", t.p_value}});
    }
    return json{{"kind", "diagnose_report"},
                {"tests", std::move(tests)},
                {"acf",
                 {{"residuals", report.residual_acf.rho},
                  {"squared_residuals", report.squared_residual_acf.rho},
                  {"band", report.residual_acf.band}}}};
}

json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw ParseError("write failed: " + path);
}

} // namespace bdar::io

#ifndef BDAR_IO_HPP
#define BDAR_IO_HPP

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "bdar/diagnostics.hpp"
#include "bdar/estimator.hpp"
#include "bdar/harness.hpp"
#include "bdar/inference.hpp"
#include "bdar/selection.hpp"
#include "bdar/stationarity.hpp"
#include "bdar/types.hpp"

namespace bdar::io {

using json = nlohmann::json;

struct DatasetSpec {
    std::string path;
    enum class Format { prices_csv, returns_csv };
    enum class Transform { none, log_return_pct };
    Format format = Format::returns_csv;
    Transform transform = Transform::none;
};

/// Reads a CSV (header auto-detected, '.' decimal, rows in time order) and
/// applies y_t = 100 (log P_t - log P_{t-1}) when requested.  The returned
/// series has pre_sample_len = 0; callers re-mark it for fitting.
TimeSeries ingest(const DatasetSpec& spec);

/// One value per line under a "y" header, 17 significant digits so a
/// write-then-ingest round trip is bit-exact.
void write_series_csv(const std::string& path, const TimeSeries& y);

/// Same format with a caller-chosen column header.
void write_samples_csv(const std::string& path, const std::string& column,
                       const std::vector<double>& samples);

// Structured-text forms.  Objects serialize with sorted keys and
// shortest-round-trip numbers, so equal inputs give identical bytes.
json to_json(const BdarParams& params);
BdarParams params_from_json(const json& j);

json to_json(const InnovationSpec& innov);
InnovationSpec innovation_from_json(const json& j);

json to_json(const SearchConfig& cfg);
/// Missing keys fall back to the defaults.
SearchConfig search_config_from_json(const json& j);

json to_json(const StationarityReport& report);

/// cov may be null when inference was not run.
json to_json(const FitResult& fit, const AsymptoticCovariance* cov);

json to_json(const BicTable& table);

json to_json(const McDesign& design);
McDesign mc_design_from_json(const json& j);

json to_json(const McReport& report);

struct DiagnoseReport {
    std::vector<PortmanteauResult> tests;
    AcfResult residual_acf;
    AcfResult squared_residual_acf;
};
json to_json(const DiagnoseReport& report);

/// Parses text as JSON, wrapping syntax errors in ParseError.
json parse_json_text(const std::string& text, const std::string& origin);
json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

} // namespace bdar::io

#endif

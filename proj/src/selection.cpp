#include "bdar/selection.hpp"

#include <algorithm>
#include <cmath>

#include "bdar/errors.hpp"

namespace bdar {

double bic(const FitResult& fit, int p) {
    if (p < 0) throw InvalidParamsError("order must be >= 0");
    if (fit.params.p != p)
        throw InvalidParamsError("fit order " + std::to_string(fit.params.p) +
                                 " does not match requested p = " + std::to_string(p));
    if (fit.n1 == 0 || fit.n2 == 0)
        throw InvalidParamsError("penalty undefined with an empty regime");
    const double penalty =
        (2.0 * p + 2.0) * (std::log(static_cast<double>(fit.n1)) +
                           std::log(static_cast<double>(fit.n2)));
    return fit.neg2_loglik + penalty;
}

BicTable select_order(const TimeSeries& y, int p_max, const SearchConfig& cfg, bool include_p0) {
    if (p_max < 1) throw InvalidParamsError("p_max must be >= 1");
    const std::size_t n0_common = static_cast<std::size_t>(std::max(p_max, cfg.d_max));
    const TimeSeries aligned =
        y.pre_sample_len >= n0_common ? y : y.with_pre_sample(n0_common);

    BicTable table;
    const int p_first = include_p0 ? 0 : 1;
    for (int p = p_first; p <= p_max; ++p) {
        BicRow row;
        row.p = p;
        try {
            row.fit = fit(aligned, p, cfg);
            row.neg2_loglik = row.fit.neg2_loglik;
            row.n1 = row.fit.n1;
            row.n2 = row.fit.n2;
            row.bic = bic(row.fit, p);
        } catch (const Error& e) {
            row.failed = true;
            row.error = e.what();
        }
        table.rows.push_back(std::move(row));
    }

    bool any = false;
    double best = 0.0;
    for (const BicRow& row : table.rows) {
        if (row.failed) continue;
        if (!any || row.bic < best) {
            any = true;
            best = row.bic;
            table.chosen_p = row.p;
        }
    }
    if (!any) throw SearchFailedError("every candidate order failed to fit");
    return table;
}

} // namespace bdar

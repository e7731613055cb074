#include "bdar/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <utility>

#include "bdar/errors.hpp"
#include "bdar/likelihood.hpp"
#include "bdar/optim.hpp"
#include "bdar/regime.hpp"

namespace bdar {

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("BDAR_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// A moment-start optimization is injected at every stride-th warm cell so a
// warm-start chain cannot drift along a whole row unchecked.
constexpr int kWarmMomentStride = 4;

// One regime's slice of the likelihood with labels fixed.  The coefficient
// vector is unconstrained: z = (phi_0..phi_p, b0, a_1..a_p) with
// alpha_0 = exp(b0) and alpha_j = a_j^2.
struct SubProblem {
    const LikelihoodWorkspace* ws = nullptr;
    const std::vector<std::uint32_t>* rows = nullptr;
    mutable Eigen::VectorXd alpha_scratch;

    double eval(const Eigen::VectorXd& z, Eigen::VectorXd& g) const {
        const int p = ws->p;
        const int stride = p + 1;
        g.setZero();
        if (rows->empty()) return kInf;
        const double alpha0 = std::exp(z[p + 1]);
        if (!std::isfinite(alpha0)) return kInf;
        alpha_scratch.resize(p);
        for (int j = 1; j <= p; ++j) {
            const double a = z[p + 1 + j];
            alpha_scratch[j - 1] = a * a;
        }
        double f = 0.0;
        for (const std::uint32_t r : *rows) {
            const double* mrow = ws->mean_reg.data() + static_cast<std::size_t>(r) * stride;
            const double* vrow = ws->var_reg.data() + static_cast<std::size_t>(r) * stride;
            double mu = z[0];
            double h = alpha0;
            for (int j = 1; j <= p; ++j) {
                mu += z[j] * mrow[j];
                h += alpha_scratch[j - 1] * vrow[j];
            }
            if (!(h > 1e-300)) return kInf;
            const double u = ws->targets[r] - mu;
            const double invh = 1.0 / h;
            f += std::log(h) + u * u * invh;
            const double wmu = -2.0 * u * invh;
            const double wh = invh - u * u * invh * invh;
            g[0] += wmu;
            for (int j = 1; j <= p; ++j) g[j] += wmu * mrow[j];
            g[p + 1] += wh * alpha0;
            for (int j = 1; j <= p; ++j) g[p + 1 + j] += wh * vrow[j] * 2.0 * z[p + 1 + j];
        }
        // Scale to the per-row mean: the objective stays O(1) at every
        // regime size, so the gradient tolerance is size-independent and
        // the line search is not rounding-limited on long samples.
        const double inv_m = 1.0 / static_cast<double>(rows->size());
        f *= inv_m;
        g *= inv_m;
        return f;
    }
};

Eigen::VectorXd pack_z(const Eigen::VectorXd& phi, double alpha0, const Eigen::VectorXd& alpha) {
    const int p = static_cast<int>(phi.size()) - 1;
    Eigen::VectorXd z(2 * p + 2);
    z.head(p + 1) = phi;
    z[p + 1] = std::log(alpha0);
    for (int j = 1; j <= p; ++j) z[p + 1 + j] = std::sqrt(alpha[j]);
    return z;
}

void unpack_z(const Eigen::VectorXd& z, int p, Eigen::VectorXd& phi, Eigen::VectorXd& alpha) {
    phi = z.head(p + 1);
    alpha.resize(p + 1);
    alpha[0] = std::exp(z[p + 1]);
    for (int j = 1; j <= p; ++j) {
        const double a = z[p + 1 + j];
        alpha[j] = a * a;
    }
}

// Moment-matched start: least squares for the mean, then least squares of
// squared residuals on the variance regressors, floored away from zero so
// the square reparameterization does not start at its boundary.
Eigen::VectorXd moment_start(const LikelihoodWorkspace& ws,
                             const std::vector<std::uint32_t>& rows) {
    const int p = ws.p;
    const int q = p + 1;
    const int stride = p + 1;
    const double m = static_cast<double>(rows.size());

    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(q, q);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(q);
    Eigen::VectorXd row(q);
    double ymean = 0.0;
    for (const std::uint32_t r : rows) {
        const double* mrow = ws.mean_reg.data() + static_cast<std::size_t>(r) * stride;
        for (int j = 0; j < q; ++j) row[j] = mrow[j];
        G.selfadjointView<Eigen::Lower>().rankUpdate(row);
        b += row * ws.targets[r];
        ymean += ws.targets[r];
    }
    ymean /= m;
    Eigen::VectorXd phi = G.selfadjointView<Eigen::Lower>().ldlt().solve(b);
    if (!phi.allFinite()) {
        phi.setZero();
        phi[0] = ymean;
    }

    double s2 = 0.0;
    Eigen::MatrixXd G2 = Eigen::MatrixXd::Zero(q, q);
    Eigen::VectorXd b2 = Eigen::VectorXd::Zero(q);
    Eigen::VectorXd xbar = Eigen::VectorXd::Zero(q);
    for (const std::uint32_t r : rows) {
        const double* mrow = ws.mean_reg.data() + static_cast<std::size_t>(r) * stride;
        const double* vrow = ws.var_reg.data() + static_cast<std::size_t>(r) * stride;
        double mu = 0.0;
        for (int j = 0; j < q; ++j) mu += phi[j] * mrow[j];
        const double e = ws.targets[r] - mu;
        const double e2 = e * e;
        s2 += e2;
        for (int j = 0; j < q; ++j) row[j] = vrow[j];
        G2.selfadjointView<Eigen::Lower>().rankUpdate(row);
        b2 += row * e2;
        xbar += row;
    }
    s2 /= m;
    if (!(s2 > 0.0) || !std::isfinite(s2)) s2 = 1e-3;
    xbar /= m;
    Eigen::VectorXd c = G2.selfadjointView<Eigen::Lower>().ldlt().solve(b2);
    if (!c.allFinite()) c.setZero();

    Eigen::VectorXd alpha(q);
    alpha[0] = std::max({c[0], 0.1 * s2, 1e-8});
    for (int j = 1; j <= p; ++j) {
        const double floor_j = 0.01 * s2 / (p * xbar[j] + 1e-12);
        alpha[j] = std::clamp(std::max(c[j], floor_j), 1e-8, 1e8);
    }
    return pack_z(phi, alpha[0], alpha);
}

Eigen::VectorXd intercept_only_start(const LikelihoodWorkspace& ws,
                                     const std::vector<std::uint32_t>& rows) {
    const int p = ws.p;
    const int q = p + 1;
    const int stride = p + 1;
    const double m = static_cast<double>(rows.size());
    double mean = 0.0;
    Eigen::VectorXd xbar = Eigen::VectorXd::Zero(q);
    for (const std::uint32_t r : rows) {
        mean += ws.targets[r];
        const double* vrow = ws.var_reg.data() + static_cast<std::size_t>(r) * stride;
        for (int j = 0; j < q; ++j) xbar[j] += vrow[j];
    }
    mean /= m;
    xbar /= m;
    double s2 = 0.0;
    for (const std::uint32_t r : rows) {
        const double e = ws.targets[r] - mean;
        s2 += e * e;
    }
    s2 /= m;
    if (!(s2 > 0.0) || !std::isfinite(s2)) s2 = 1e-3;

    Eigen::VectorXd phi = Eigen::VectorXd::Zero(q);
    phi[0] = mean;
    Eigen::VectorXd alpha(q);
    alpha[0] = std::max(s2, 1e-8);
    for (int j = 1; j <= p; ++j)
        alpha[j] = std::clamp(0.1 * s2 / (p * xbar[j] + 1e-12), 1e-8, 1e8);
    return pack_z(phi, alpha[0], alpha);
}

// Deterministic spread around the moment start for extra multistarts.
Eigen::VectorXd perturbed_start(const Eigen::VectorXd& base, int p, int k) {
    Eigen::VectorXd z = base;
    const double shrink = 1.0 / (1.0 + k);
    z.head(p + 1) *= shrink;
    z[p + 1] += (k % 2 == 0 ? -0.5 : 0.5) * k;
    for (int j = 1; j <= p; ++j) z[p + 1 + j] = z[p + 1 + j] * (1.0 + 0.3 * k) + 0.05;
    return z;
}

struct SubFit {
    Eigen::VectorXd z;
    double f = kInf;
    bool converged = false;
};

SubFit run_subfit(const SubProblem& prob, const std::vector<Eigen::VectorXd>& starts,
                  const OptimizerConfig& ocfg) {
    OptimOptions oo;
    oo.max_iters = ocfg.max_iters;
    oo.tolerance = ocfg.tolerance;
    SubFit best;
    for (const Eigen::VectorXd& z0 : starts) {
        const OptimResult res =
            minimize_bfgs([&prob](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
                return prob.eval(x, g);
            }, z0, oo);
        if (res.f < best.f) {
            best.z = res.x;
            best.f = res.f;
            best.converged = res.converged;
        }
    }
    return best;
}

std::vector<Eigen::VectorXd> cold_starts(const LikelihoodWorkspace& ws,
                                         const std::vector<std::uint32_t>& rows, int n_starts) {
    std::vector<Eigen::VectorXd> starts;
    const Eigen::VectorXd mz = moment_start(ws, rows);
    starts.push_back(mz);
    if (static_cast<int>(starts.size()) < n_starts) starts.push_back(perturbed_start(mz, ws.p, 1));
    if (static_cast<int>(starts.size()) < n_starts) starts.push_back(intercept_only_start(ws, rows));
    for (int k = 2; static_cast<int>(starts.size()) < n_starts; ++k)
        starts.push_back(perturbed_start(mz, ws.p, k));
    starts.resize(static_cast<std::size_t>(std::max(1, n_starts)));
    return starts;
}

// Per-thread state for the grid sweep.
struct CellContext {
    const LikelihoodWorkspace* ws = nullptr;
    const SearchConfig* cfg = nullptr;
    std::vector<std::uint32_t> rows1, rows2;
    Eigen::VectorXd warm1, warm2;
    bool warm_valid = false;
    int cells_since_moment = 0;
};

struct CellOutcome {
    CellFit fit;
    bool ok = false;
};

CellOutcome run_cell(CellContext& ctx, const std::vector<std::uint8_t>& labels) {
    const LikelihoodWorkspace& ws = *ctx.ws;
    ctx.rows1.clear();
    ctx.rows2.clear();
    for (std::uint32_t r = 0; r < static_cast<std::uint32_t>(ws.n); ++r) {
        if (labels[ws.n0 + r]) ctx.rows1.push_back(r);
        else ctx.rows2.push_back(r);
    }

    const OptimizerConfig& ocfg = ctx.cfg->optimizer;
    SubProblem prob1{&ws, &ctx.rows1, {}};
    SubProblem prob2{&ws, &ctx.rows2, {}};

    std::vector<Eigen::VectorXd> starts1, starts2;
    if (ctx.warm_valid) {
        const bool add_moment = (++ctx.cells_since_moment % kWarmMomentStride) == 0;
        starts1.push_back(ctx.warm1);
        starts2.push_back(ctx.warm2);
        if (add_moment) {
            starts1.push_back(moment_start(ws, ctx.rows1));
            starts2.push_back(moment_start(ws, ctx.rows2));
        }
    } else {
        starts1 = cold_starts(ws, ctx.rows1, ocfg.n_starts);
        starts2 = cold_starts(ws, ctx.rows2, ocfg.n_starts);
        ctx.cells_since_moment = 0;
    }

    const SubFit f1 = run_subfit(prob1, starts1, ocfg);
    const SubFit f2 = run_subfit(prob2, starts2, ocfg);

    CellOutcome out;
    if (!std::isfinite(f1.f) || !std::isfinite(f2.f)) return out;

    out.fit.n1 = ctx.rows1.size();
    out.fit.n2 = ctx.rows2.size();
    out.fit.converged = f1.converged && f2.converged;
    unpack_z(f1.z, ws.p, out.fit.phi1, out.fit.alpha1);
    unpack_z(f2.z, ws.p, out.fit.phi2, out.fit.alpha2);
    out.ok = true;

    ctx.warm1 = f1.z;
    ctx.warm2 = f2.z;
    ctx.warm_valid = true;
    return out;
}

double canonical_loss(const LikelihoodWorkspace& ws, const std::vector<std::uint8_t>& labels,
                      const CellFit& cell, int p, int d, double r_lower, double r_upper) {
    BdarParams params = BdarParams::zeros(p, d);
    params.phi1 = cell.phi1;
    params.alpha1 = cell.alpha1;
    params.phi2 = cell.phi2;
    params.alpha2 = cell.alpha2;
    params.r_lower = r_lower;
    params.r_upper = r_upper;
    const Neg2LogLik nll = neg2_loglik_given_labels(params, ws, labels, false);
    return nll.total;
}

void validate_search_config(const SearchConfig& cfg, std::size_t n) {
    if (!(cfg.percentile_lo >= 0.0 && cfg.percentile_hi <= 100.0 &&
          cfg.percentile_lo < cfg.percentile_hi))
        throw DomainError("threshold percentiles must satisfy 0 <= lo < hi <= 100");
    if (cfg.d_max < 1) throw DomainError("d_max must be >= 1");
    if (!(cfg.min_regime_frac >= 0.0 && cfg.min_regime_frac < 0.5))
        throw DomainError("min_regime_frac must lie in [0, 0.5)");
    if (cfg.grid_thinning < 1) throw DomainError("grid_thinning must be >= 1");
    if (cfg.optimizer.max_iters < 1 || cfg.optimizer.n_starts < 1 ||
        !(cfg.optimizer.tolerance > 0.0))
        throw DomainError("optimizer config must have positive iterations, starts, tolerance");
}

std::size_t count_lower(const std::vector<std::uint8_t>& labels, std::size_t n0) {
    std::size_t n1 = 0;
    for (std::size_t i = n0; i < labels.size(); ++i) n1 += labels[i];
    return n1;
}

// Candidate thresholds: thinned order statistics of the estimation range
// between the configured percentiles, exact duplicates removed.
std::vector<double> threshold_candidates(const LikelihoodWorkspace& ws, const SearchConfig& cfg) {
    std::vector<double> sorted = ws.targets;
    std::sort(sorted.begin(), sorted.end());
    const double nm1 = static_cast<double>(sorted.size() - 1);
    const auto k_lo = static_cast<std::size_t>(std::ceil(cfg.percentile_lo / 100.0 * nm1));
    const auto k_hi = static_cast<std::size_t>(std::floor(cfg.percentile_hi / 100.0 * nm1));
    std::vector<double> cand;
    for (std::size_t k = k_lo; k <= k_hi && k < sorted.size();
         k += static_cast<std::size_t>(cfg.grid_thinning)) {
        if (cand.empty() || sorted[k] != cand.back()) cand.push_back(sorted[k]);
    }
    return cand;
}

struct BestCell {
    bool valid = false;
    double loss = kInf;
    double width = kInf;
    double r_lower = 0.0;
    double r_upper = 0.0;
    int d = 0;
    CellFit fit;
};

// Deterministic preference order: loss, then buffer width, then lower
// threshold, then delay.
bool improves(double loss, double width, double r_lower, int d, const BestCell& cur) {
    if (!cur.valid) return true;
    if (loss != cur.loss) return loss < cur.loss;
    if (width != cur.width) return width < cur.width;
    if (r_lower != cur.r_lower) return r_lower < cur.r_lower;
    return d < cur.d;
}

struct RowResult {
    BestCell best;
    std::size_t cells_evaluated = 0;
    std::vector<GridCellRecord> records;
};

Eigen::VectorXd cell_lambda(const CellFit& cell) {
    const Eigen::Index q = cell.phi1.size();
    Eigen::VectorXd lam(4 * q);
    lam << cell.phi1, cell.alpha1, cell.phi2, cell.alpha2;
    return lam;
}

// One row = fixed (d, lower-threshold index); sweeps the upper threshold
// upward with warm starts, reusing the previous result when widening the
// buffer did not move any label.
void sweep_row(const std::vector<double>& values, const LikelihoodWorkspace& ws,
               const SearchConfig& cfg, const std::vector<double>& cand, int d, std::size_t i_lo,
               std::size_t min_count, RowResult& out) {
    CellContext ctx;
    ctx.ws = &ws;
    ctx.cfg = &cfg;

    std::vector<std::uint8_t> labels(values.size());
    std::vector<std::uint8_t> prev_labels;
    bool have_prev_fit = false;
    CellFit prev_fit;
    double prev_loss = kInf;

    for (std::size_t i_up = i_lo; i_up < cand.size(); ++i_up) {
        const double r_lower = cand[i_lo];
        const double r_upper = cand[i_up];
        regime_labels_into(values, r_lower, r_upper, d, labels);
        const std::size_t n1 = count_lower(labels, ws.n0);
        const std::size_t n2 = ws.n - n1;
        if (n1 < min_count || n2 < min_count) continue;

        const bool same_labels = have_prev_fit && labels == prev_labels;
        CellFit cell;
        double loss;
        if (same_labels) {
            cell = prev_fit;
            loss = prev_loss;
        } else {
            CellOutcome oc = run_cell(ctx, labels);
            if (!oc.ok) continue;
            cell = std::move(oc.fit);
            loss = canonical_loss(ws, labels, cell, ws.p, d, r_lower, r_upper);
            if (!std::isfinite(loss)) continue;
            prev_labels = labels;
            prev_fit = cell;
            prev_loss = loss;
            have_prev_fit = true;
        }

        ++out.cells_evaluated;
        if (cfg.keep_cell_map) {
            GridCellRecord rec;
            rec.r_lower = r_lower;
            rec.r_upper = r_upper;
            rec.d = d;
            rec.loss = loss;
            rec.converged = cell.converged;
            rec.n1 = n1;
            rec.n2 = n2;
            rec.lambda = cell_lambda(cell);
            out.records.push_back(std::move(rec));
        }

        const double width = r_upper - r_lower;
        if (improves(loss, width, r_lower, d, out.best)) {
            out.best.valid = true;
            out.best.loss = loss;
            out.best.width = width;
            out.best.r_lower = r_lower;
            out.best.r_upper = r_upper;
            out.best.d = d;
            out.best.fit = cell;
            out.best.fit.loss = loss;
        }
    }
}

} // namespace

CellFit fit_lambda_given_thresholds(const TimeSeries& y, int p, double r_lower, double r_upper,
                                    int d, const SearchConfig& cfg) {
    if (p < 0) throw InvalidParamsError("autoregressive order must be >= 0");
    if (d < 1) throw InvalidParamsError("regime delay must be >= 1");
    if (!(r_lower <= r_upper) || !std::isfinite(r_lower) || !std::isfinite(r_upper))
        throw InvalidParamsError("thresholds must be finite with r_lower <= r_upper");
    const std::size_t need = static_cast<std::size_t>(std::max(p, d));
    if (y.pre_sample_len < need)
        throw InsufficientDataError("pre-sample must cover max(p, d) = " + std::to_string(need) +
                                    " observations");

    const LikelihoodWorkspace ws = make_workspace(y, p);
    validate_search_config(cfg, ws.n);
    const RegimePath path = compute_regime_path(y, r_lower, r_upper, d);

    const std::size_t frac_count =
        static_cast<std::size_t>(std::ceil(cfg.min_regime_frac * static_cast<double>(ws.n)));
    const std::size_t min_count = std::max<std::size_t>(
        1, std::max<std::size_t>(frac_count, static_cast<std::size_t>(cfg.resolved_min_count(p))));
    const std::size_t n1 = count_lower(path.labels, ws.n0);
    const std::size_t n2 = ws.n - n1;
    if (n1 < min_count || n2 < min_count)
        throw CellRejectedError("regime counts (" + std::to_string(n1) + ", " +
                                std::to_string(n2) + ") below minimum " +
                                std::to_string(min_count));

    CellContext ctx;
    ctx.ws = &ws;
    ctx.cfg = &cfg;
    CellOutcome oc = run_cell(ctx, path.labels);
    if (!oc.ok)
        throw SearchFailedError("inner optimization produced no finite value for this cell");
    CellFit cell = std::move(oc.fit);
    cell.loss = canonical_loss(ws, path.labels, cell, p, d, r_lower, r_upper);
    if (!std::isfinite(cell.loss))
        throw SearchFailedError("likelihood not finite at the inner minimizer");
    return cell;
}

FitResult fit(const TimeSeries& y, int p, const SearchConfig& cfg) {
    if (p < 0) throw InvalidParamsError("autoregressive order must be >= 0");
    const std::size_t need = static_cast<std::size_t>(std::max(p, cfg.d_max));
    if (y.pre_sample_len < need)
        throw InsufficientDataError(
            "pre-sample must cover max(p, d_max) = " + std::to_string(need) +
            " observations; re-mark the series with with_pre_sample");

    const LikelihoodWorkspace ws = make_workspace(y, p);
    validate_search_config(cfg, ws.n);

    const std::vector<double> cand = threshold_candidates(ws, cfg);
    if (cand.empty()) throw SearchFailedError("no threshold candidates between the percentiles");

    const std::size_t frac_count =
        static_cast<std::size_t>(std::ceil(cfg.min_regime_frac * static_cast<double>(ws.n)));
    const std::size_t min_count = std::max<std::size_t>(
        1, std::max<std::size_t>(frac_count, static_cast<std::size_t>(cfg.resolved_min_count(p))));

    // Work unit r encodes (d, lower-threshold index); rows are independent.
    const std::size_t n_rows = static_cast<std::size_t>(cfg.d_max) * cand.size();
    std::vector<RowResult> rows(n_rows);
    const int n_threads =
        std::max(1, std::min<int>(resolve_thread_count(cfg.n_threads),
                                  static_cast<int>(n_rows)));

    const auto worker = [&](int tid) {
        for (std::size_t r = static_cast<std::size_t>(tid); r < n_rows;
             r += static_cast<std::size_t>(n_threads)) {
            const int d = 1 + static_cast<int>(r / cand.size());
            const std::size_t i_lo = r % cand.size();
            sweep_row(y.values, ws, cfg, cand, d, i_lo, min_count, rows[r]);
        }
    };

    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(static_cast<std::size_t>(n_threads));
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    worker(t);
                } catch (...) {
                    errs[static_cast<std::size_t>(t)] = std::current_exception();
                }
            });
        }
        for (std::thread& th : pool) th.join();
        for (const std::exception_ptr& e : errs)
            if (e) std::rethrow_exception(e);
    }

    BestCell best;
    std::size_t cells_evaluated = 0;
    std::vector<GridCellRecord> records;
    for (RowResult& row : rows) {
        cells_evaluated += row.cells_evaluated;
        if (cfg.keep_cell_map)
            records.insert(records.end(), row.records.begin(), row.records.end());
        if (row.best.valid &&
            improves(row.best.loss, row.best.width, row.best.r_lower, row.best.d, best))
            best = row.best;
    }
    if (!best.valid)
        throw SearchFailedError("no admissible threshold cell under the regime-size constraints");

    FitResult out;
    out.params = BdarParams::zeros(p, best.d);
    out.params.phi1 = best.fit.phi1;
    out.params.alpha1 = best.fit.alpha1;
    out.params.phi2 = best.fit.phi2;
    out.params.alpha2 = best.fit.alpha2;
    out.params.r_lower = best.r_lower;
    out.params.r_upper = best.r_upper;

    // Final values come from the same canonical evaluation used for the grid
    // comparisons, so a re-evaluation at out.params reproduces them exactly.
    const Neg2LogLik nll = neg2_loglik(out.params, y);
    out.neg2_loglik = nll.total;
    out.n1 = nll.n1;
    out.n2 = nll.n2;
    out.per_term = nll.per_term;
    out.converged = best.fit.converged;
    out.grid_cells_evaluated = cells_evaluated;
    out.cells = std::move(records);

    const RegimePath path = compute_regime_path(y, best.r_lower, best.r_upper, best.d);
    out.standardized_residuals.resize(ws.n);
    for (std::size_t t = 1; t <= ws.n; ++t) {
        const ConditionalMoments m = conditional_moments(out.params, y, path, t);
        out.standardized_residuals[t - 1] = (ws.targets[t - 1] - m.mu) / std::sqrt(m.h);
    }
    return out;
}

} // namespace bdar

#include "bdar/types.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace bdar {

TimeSeries TimeSeries::with_pre_sample(std::size_t n0) const {
    if (n0 >= values.size()) {
        throw InsufficientDataError("pre-sample of " + std::to_string(n0) +
                                    " leaves no estimation sample in a series of length " +
                                    std::to_string(values.size()));
    }
    return TimeSeries{values, n0};
}

void TimeSeries::validate() const {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw InvalidDataError("non-finite observation at index " + std::to_string(i));
        }
    }
    if (pre_sample_len >= values.size()) {
        throw InsufficientDataError("pre-sample length " + std::to_string(pre_sample_len) +
                                    " >= series length " + std::to_string(values.size()));
    }
}

BdarParams BdarParams::zeros(int p, int d) {
    BdarParams out;
    out.p = p;
    out.d = d;
    out.phi1 = Eigen::VectorXd::Zero(p + 1);
    out.alpha1 = Eigen::VectorXd::Zero(p + 1);
    out.alpha1[0] = 1.0;
    out.phi2 = Eigen::VectorXd::Zero(p + 1);
    out.alpha2 = Eigen::VectorXd::Zero(p + 1);
    out.alpha2[0] = 1.0;
    return out;
}

Eigen::VectorXd BdarParams::lambda() const {
    Eigen::VectorXd out(n_lambda());
    const int m = p + 1;
    out.segment(0, m) = phi1;
    out.segment(m, m) = alpha1;
    out.segment(2 * m, m) = phi2;
    out.segment(3 * m, m) = alpha2;
    return out;
}

void BdarParams::set_lambda(const Eigen::VectorXd& lambda) {
    const int m = p + 1;
    if (lambda.size() != 4 * m) {
        throw InvalidParamsError("lambda has length " + std::to_string(lambda.size()) +
                                 ", expected " + std::to_string(4 * m));
    }
    phi1 = lambda.segment(0, m);
    alpha1 = lambda.segment(m, m);
    phi2 = lambda.segment(2 * m, m);
    alpha2 = lambda.segment(3 * m, m);
}

void BdarParams::validate() const {
    if (p < 0) throw InvalidParamsError("order p must be >= 0");
    if (d < 1) throw InvalidParamsError("delay d must be >= 1");
    const int m = p + 1;
    if (phi1.size() != m || phi2.size() != m || alpha1.size() != m || alpha2.size() != m) {
        throw InvalidParamsError("coefficient vectors must have length p+1");
    }
    if (!(alpha1[0] > 0.0) || !(alpha2[0] > 0.0)) {
        throw InvalidParamsError("variance intercepts must be positive");
    }
    for (int j = 1; j < m; ++j) {
        if (alpha1[j] < 0.0 || alpha2[j] < 0.0) {
            throw InvalidParamsError("variance slopes must be nonnegative");
        }
    }
    for (int j = 0; j < m; ++j) {
        if (!std::isfinite(phi1[j]) || !std::isfinite(phi2[j]) ||
            !std::isfinite(alpha1[j]) || !std::isfinite(alpha2[j])) {
            throw InvalidParamsError("non-finite coefficient");
        }
    }
    if (!(r_lower <= r_upper)) {
        throw InvalidParamsError("requires r_lower <= r_upper");
    }
}

bool BdarParams::identifiable() const {
    return phi1 != phi2 && alpha1 != alpha2;
}

InnovationSpec InnovationSpec::standard_normal() {
    InnovationSpec s;
    s.kind = Kind::standard_normal;
    return s;
}

InnovationSpec InnovationSpec::student_t(double nu) {
    if (!(nu > 2.0)) {
        throw InvalidParamsError("student-t innovations need nu > 2 for unit variance");
    }
    InnovationSpec s;
    s.kind = Kind::standardized_student_t;
    s.nu = nu;
    return s;
}

InnovationSpec InnovationSpec::custom(std::function<double(Rng&)> sampler, bool symmetric) {
    InnovationSpec s;
    s.kind = Kind::custom_iid;
    s.sampler = std::move(sampler);
    s.symmetric = symmetric;
    return s;
}

double InnovationSpec::sample(Rng& rng) const {
    switch (kind) {
        case Kind::standard_normal: return rng.normal();
        case Kind::standardized_student_t: return rng.standardized_student_t(nu);
        case Kind::custom_iid: return sampler(rng);
    }
    throw InvalidParamsError("unknown innovation kind");
}

namespace {

constexpr std::size_t kMomentSamples = 1000000;

InnovationSpec::Moment monte_carlo_moment(const InnovationSpec& spec,
                                          const std::function<double(double)>& transform) {
    Rng rng(0x5D1A7BFF9E2C4A31ULL);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < kMomentSamples; ++i) {
        const double v = transform(spec.sample(rng));
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / static_cast<double>(kMomentSamples);
    const double var = sumsq / static_cast<double>(kMomentSamples) - mean * mean;
    return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(kMomentSamples))};
}

} // namespace

InnovationSpec::Moment InnovationSpec::abs_moment(double r) const {
    if (!(r > 0.0)) throw DomainError("absolute moment order must be positive");
    if (kind == Kind::standard_normal) {
        // E|Z|^r = 2^(r/2) Gamma((r+1)/2) / sqrt(pi)
        const double value =
            std::pow(2.0, 0.5 * r) * std::tgamma(0.5 * (r + 1.0)) / std::sqrt(std::numbers::pi);
        return {value, 0.0};
    }
    return monte_carlo_moment(*this, [r](double x) { return std::pow(std::fabs(x), r); });
}

InnovationSpec::Moment InnovationSpec::fourth_moment() const {
    if (kind == Kind::standard_normal) return {3.0, 0.0};
    return monte_carlo_moment(*this, [](double x) { return x * x * x * x; });
}

std::string InnovationSpec::name() const {
    switch (kind) {
        case Kind::standard_normal: return "standard_normal";
        case Kind::standardized_student_t: {
            std::ostringstream os;
            os << "standardized_student_t(" << nu << ")";
            return os.str();
        }
        case Kind::custom_iid: return "custom_iid";
    }
    return "unknown";
}

} // namespace bdar

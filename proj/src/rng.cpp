#include "bdar/rng.hpp"

#include <cmath>

namespace bdar {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = seed;
    std::uint64_t k = splitmix64(s);
    s ^= a * 0x9E3779B97F4A7C15ULL;
    k ^= splitmix64(s);
    s ^= b * 0xC2B2AE3D27D4EB4FULL;
    k ^= splitmix64(s);
    return k;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (stream * 0x9E3779B97F4A7C15ULL);
    for (auto& word : state_) word = splitmix64(s);
}

static inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * factor;
    has_cached_normal_ = true;
    return u * factor;
}

double Rng::gamma(double shape) {
    if (shape < 1.0) {
        // Boost to shape+1 and scale back (Marsaglia-Tsang section 6).
        const double g = gamma(shape + 1.0);
        const double u = uniform();
        return g * std::pow(u <= 0.0 ? 5e-324 : u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Rng::standardized_student_t(double nu) {
    const double z = normal();
    const double chi2 = 2.0 * gamma(0.5 * nu);
    const double t = z / std::sqrt(chi2 / nu);
    return t * std::sqrt((nu - 2.0) / nu);
}

} // namespace bdar

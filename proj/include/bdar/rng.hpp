#ifndef BDAR_RNG_HPP
#define BDAR_RNG_HPP

#include <cstdint>
#include <functional>

namespace bdar {

/// xoshiro256++ stream with splitmix64 seeding and hand-rolled samplers.
///
/// The standard <random> distributions are implementation-defined, which
/// would break bit-reproducibility of reports across toolchains; every
/// sampler here is pinned to an explicit algorithm instead.  Independent
/// streams are derived from (seed, stream id) so parallel Monte Carlo
/// replications never share state.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Standard normal via the Marsaglia polar method (caches the pair).
    double normal();

    /// Gamma(shape, 1) via Marsaglia-Tsang squeeze, shape > 0.
    double gamma(double shape);

    /// Student-t with nu degrees of freedom, rescaled to unit variance.
    /// Requires nu > 2.
    double standardized_student_t(double nu);

private:
    std::uint64_t state_[4];
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// splitmix64 step; used for seeding and for deterministic key mixing.
std::uint64_t splitmix64(std::uint64_t& state);

/// Stable mix of a base seed with stream coordinates (e.g. replication
/// index, sample size) so that derived streams are reproducible and
/// independent of scheduling.
std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

} // namespace bdar

#endif

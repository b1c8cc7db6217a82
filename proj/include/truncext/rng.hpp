#ifndef TRUNCEXT_RNG_HPP
#define TRUNCEXT_RNG_HPP

#include <cstdint>
#include <random>

namespace truncext {

/// Master seed for all stochastic operations.  Identical seed and identical
/// parameters give bit-identical results, regardless of thread count.
struct RngSeed {
    std::uint64_t value = 0;
};

namespace detail {

// SplitMix64 finalizer, used both as a generator step and as a mixer.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4ecda82f2fa9cULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Derives an independent stream seed from (master seed, stream ids).
/// Streams derived with different id tuples are statistically independent,
/// so replicates can be generated in any order.
inline RngSeed derive_stream(RngSeed master, std::uint64_t id0, std::uint64_t id1 = 0,
                             std::uint64_t id2 = 0) {
    std::uint64_t s = master.value;
    std::uint64_t h = detail::splitmix64(s);
    s ^= id0 + 0x9e3779b97f4a7c15ULL;
    h ^= detail::splitmix64(s);
    s ^= id1 + 0xd1b54a32d192ed03ULL;
    h ^= detail::splitmix64(s);
    s ^= id2 + 0x8bb84b93962eacc9ULL;
    h ^= detail::splitmix64(s);
    return RngSeed{h};
}

/// Seeded uniform generator wrapping mt19937_64.
class Rng {
  public:
    explicit Rng(RngSeed seed) : engine_(seed.value) {}

    /// Uniform draw on (0, 1); never returns an exact endpoint.
    double uniform01() {
        double u;
        do {
            u = unif_(engine_);
        } while (u <= 0.0 || u >= 1.0);
        return u;
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

} // namespace truncext

#endif

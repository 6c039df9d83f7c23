#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pasteup {

/// Derives the seed of one sample's private random stream from the global
/// seed. Pure 64-bit mixing (splitmix64 finalizer), stable across platforms,
/// so samples can be generated in any order or in parallel and still come
/// out byte-identical.
inline std::uint64_t derive_sample_seed(std::uint64_t global_seed, std::uint64_t sample_index) {
    std::uint64_t z = global_seed + (sample_index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic random stream. The engine is std::mt19937_64 (bit-exact by
// the standard); the distributions are implemented here because the standard
// library's are implementation-defined and would break replay across
// toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (lo, hi) bounds excluded only by measure-zero chance;
    /// used for jitter magnitudes.
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be >= 1.
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Standard normal via Box-Muller. Consumes exactly two uniforms per call.
    double gaussian() {
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;        // [0, 1)
        const double radius = std::sqrt(-2.0 * std::log(u1));
        return radius * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    }

    double gaussian(double mu, double sigma) { return mu + sigma * gaussian(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace pasteup

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace relmotion {

/// 64-bit finalizer of the splitmix64 generator (Steele, Lea, Vigna).
constexpr std::uint64_t splitmix64_mix(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

/// Derives the seed of an independent substream from a master seed. Streams
/// are indexed (one per particle, one per replicate); derivations can be
/// nested to split a replicate seed into per-particle seeds.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream) noexcept {
    return splitmix64_mix(master + (stream + 1) * 0x9E3779B97F4A7C15ull);
}

/// Deterministic standard-normal stream.
///
/// The algorithm is fixed so that a seed pins the output bit for bit:
/// mt19937_64 (whose output sequence the C++ standard specifies) produces
/// 53-bit uniforms in [0,1) via (x >> 11) * 2^-53, and normals come from the
/// Marsaglia polar method: draw u, v uniform on (-1,1) until
/// s = u^2 + v^2 lies in (0,1), then return u * sqrt(-2 ln(s) / s) and cache
/// the v-companion for the next call. No standard-library distribution is
/// used since those are implementation-defined.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    /// Next uniform draw in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Next standard-normal draw.
    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * scale;
        has_spare_ = true;
        return u * scale;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace relmotion

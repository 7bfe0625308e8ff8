#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace evalda {

// Deterministic 64-bit xorshift* stream, fully specified so that a
// reimplementation in another language can reproduce it bit for bit.
//
// State update per draw:
//   x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;
//   output = x * 0x2545F4914F6CDD1D
//
// The raw seed is passed through one splitmix64 step so that nearby seeds
// (0, 1, 2, ...) start unrelated streams; a zero state falls back to a
// fixed nonzero constant.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z = z ^ (z >> 31);
        state_ = z != 0 ? z : 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t next() {
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1DULL;
    }

    // Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), n >= 1. Multiply-shift reduction
    // (floor(next * n / 2^64)); the modulo bias is < n / 2^64.
    std::uint32_t below(std::uint32_t n) {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Standard normal via Box-Muller; consumes exactly two uniforms.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

    // Gamma(shape, 1) via Marsaglia-Tsang, with the usual boost for shape < 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
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
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Symmetric Dirichlet(concentration) of the given dimension.
    std::vector<double> dirichlet(double concentration, std::size_t dim) {
        std::vector<double> out(dim);
        if (dim == 1) {
            out[0] = 1.0;
            return out;
        }
        double sum = 0.0;
        do {
            sum = 0.0;
            for (auto& x : out) {
                x = gamma(concentration);
                sum += x;
            }
        } while (sum <= 0.0);
        for (auto& x : out) x /= sum;
        return out;
    }

private:
    std::uint64_t state_;
};

// Stable seed for a derived stream, e.g. one experiment sample. Mixes the
// base seed with up to two indices through splitmix64-style finalizers.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t z = base;
    z += 0x9E3779B97F4A7C15ULL * (a + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z += 0x94D049BB133111EBULL * (b + 1);
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace evalda

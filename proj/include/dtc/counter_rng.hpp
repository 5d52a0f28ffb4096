#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace dtc {

/// Counter-based random stream: draw k is a pure function of (seed, name,
/// index, k), so batches can be generated in any order or in parallel and
/// still reproduce the serial sequence.
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0)
        : key_(mix(seed ^ mix(fnv1a(name)) ^ mix(index + 0x632be59bd9b4e019ULL)))
    {}

    /// Uniform on the open interval (0, 1).
    double uniform(std::uint64_t counter) const
    {
        const std::uint64_t bits = mix(key_ + counter * 0x9e3779b97f4a7c15ULL);
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller on the uniform pair (2m, 2m+1).
    double normal(std::uint64_t counter) const
    {
        const std::uint64_t pair = counter / 2;
        const double r = std::sqrt(-2.0 * std::log(uniform(2 * pair)));
        const double theta = 2.0 * std::numbers::pi * uniform(2 * pair + 1);
        return counter % 2 == 0 ? r * std::cos(theta) : r * std::sin(theta);
    }

    double next_uniform() { return uniform(cursor_++); }
    double next_normal() { return normal(normal_cursor_++); }
    double uniform_in(double lo, double hi) { return lo + (hi - lo) * next_uniform(); }
    double log_uniform_in(double lo, double hi) { return std::exp(uniform_in(std::log(lo), std::log(hi))); }

private:
    // splitmix64 finalizer
    static constexpr std::uint64_t mix(std::uint64_t z)
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static constexpr std::uint64_t fnv1a(std::string_view s)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    std::uint64_t key_;
    // Sequential draws use disjoint halves of the counter space.
    std::uint64_t cursor_ = 0;
    std::uint64_t normal_cursor_ = std::uint64_t{1} << 62;
};

} // namespace dtc

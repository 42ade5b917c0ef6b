#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace countsel {

// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// A single-owner random stream. Uniforms are built from the raw 64-bit engine
// output so that draws do not depend on the standard library's distributions.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    // Stream for a (master seed, tag...) path, e.g. (seed, mean index, model, shard).
    static Stream derive(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
        std::uint64_t h = splitmix64(master);
        for (std::uint64_t t : path) h = splitmix64(h ^ splitmix64(t + 0x632be59bd9b4e019ULL));
        return Stream(h);
    }

    std::uint64_t next() { return engine_(); }

    // Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace countsel

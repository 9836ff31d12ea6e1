#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace topicnet {

// Seeded random source with a platform-independent sequence. The engine
// (mt19937_64) produces a portable bit stream; the helpers below replace
// std::uniform_* distributions, whose output differs between standard
// library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 significant bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform index in [0, n); n must be positive.
    std::size_t next_index(std::size_t n) {
        return static_cast<std::size_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    double next_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    template <class T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = next_index(i);
            std::swap(values[i - 1], values[j]);
        }
    }

    // Derive a decorrelated child stream, e.g. one per repetition.
    Rng fork(std::uint64_t stream) {
        std::uint64_t mixed = next_u64() ^ (stream * 0x9e3779b97f4a7c15ull + 0xbf58476d1ce4e5b9ull);
        return Rng(mixed);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace topicnet

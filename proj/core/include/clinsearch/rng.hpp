#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace clinsearch {

/// splitmix64 finalizer; combines a seed with a salt (topic id, epoch, ...).
inline uint64_t mix_seed(uint64_t seed, uint64_t salt) {
    uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic draws on top of std::mt19937_64. The generator sequence is
/// pinned by the standard; std::shuffle and the distribution classes are
/// not, so sampling uses plain modulo draws.
class DetRng {
public:
    explicit DetRng(uint64_t seed) : gen_(seed) {}

    uint64_t next() { return gen_(); }

    uint64_t below(uint64_t bound) { return gen_() % bound; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::mt19937_64 gen_;
};

} // namespace clinsearch

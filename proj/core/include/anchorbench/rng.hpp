#pragma once
// Deterministic seeded random streams.
//
// SplitMix64 core so sequences are identical across platforms and standard
// libraries (std:: distributions are not portable). Streams for concurrent
// sessions are derived from (master seed, string tags) and never share state.

#include <cstdint>
#include <initializer_list>
#include <string_view>
#include <vector>

namespace anchorbench {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, n) via rejection sampling.
    std::uint64_t uniform_below(std::uint64_t n);

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_below(i));
            using std::swap;
            swap(values[i - 1], values[j]);
        }
    }

    // k distinct indices from [0, population), in draw order.
    std::vector<std::size_t> sample_indices(std::size_t population, std::size_t k);

private:
    std::uint64_t state_;
};

// 64-bit FNV-1a, the checksum/digest primitive used throughout.
std::uint64_t fnv1a64(std::string_view bytes);

// Derives an independent stream seed from a master seed and a tag path,
// e.g. derive_seed(master, {"persona", scenario_id, "1", "buyer"}).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> tags);

}  // namespace anchorbench

#include "anchorbench/rng.hpp"

#include <stdexcept>

namespace anchorbench {

std::uint64_t Rng::uniform_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
    // Rejection sampling over the largest multiple of n below 2^64.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t value;
    do {
        value = next_u64();
    } while (value >= limit);
    return value % n;
}

std::vector<std::size_t> Rng::sample_indices(std::size_t population, std::size_t k) {
    if (k > population) throw std::invalid_argument("sample_indices: k exceeds population");
    // Partial Fisher-Yates on an index vector; fine at lexicon scale.
    std::vector<std::size_t> pool(population);
    for (std::size_t i = 0; i < population; ++i) pool[i] = i;
    std::vector<std::size_t> picked;
    picked.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(uniform_below(population - i));
        std::swap(pool[i], pool[j]);
        picked.push_back(pool[i]);
    }
    return picked;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x00000100000001b3ull;
    }
    return hash;
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::string_view> tags) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    auto mix_byte = [&hash](unsigned char c) {
        hash ^= c;
        hash *= 0x00000100000001b3ull;
    };
    for (int shift = 0; shift < 64; shift += 8) {
        mix_byte(static_cast<unsigned char>(master >> shift));
    }
    for (std::string_view tag : tags) {
        for (unsigned char c : tag) mix_byte(c);
        mix_byte(0x1f);  // separator so {"ab","c"} != {"a","bc"}
    }
    // One SplitMix64 round to spread the FNV bits.
    std::uint64_t z = hash + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace anchorbench

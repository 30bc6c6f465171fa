#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace bmc {

struct RunSeed {
    std::uint64_t master_seed = 0;
    std::uint64_t replica_index = 0;
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stateless mixing of (master, replica) into a stream seed.
constexpr std::uint64_t stream_seed(RunSeed s) {
    return splitmix64(splitmix64(s.master_seed) ^ splitmix64(s.replica_index + 0x632be59bd9b4e019ULL));
}

// Derive an independent master seed for a named sub-experiment (FNV-1a of the tag).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return splitmix64(master ^ h);
}

using Engine = std::mt19937_64;

inline Engine make_engine(RunSeed s) { return Engine(stream_seed(s)); }

} // namespace bmc

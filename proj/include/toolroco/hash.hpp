#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace toolroco {

// FNV-1a, 64 bit. Used for state snapshots, config hashes and seed mixing.
constexpr std::uint64_t fnv1a64(std::string_view data,
                                std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 0x00000100000001b3ull;
    }
    return h;
}

constexpr std::uint64_t fnv1a64_mix(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (i * 8)) & 0xffu;
        h *= 0x00000100000001b3ull;
    }
    return h;
}

// splitmix64 finalizer; turns correlated seeds into well-spread ones.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::string hash_hex(std::uint64_t h);

}  // namespace toolroco

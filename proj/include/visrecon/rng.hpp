// Copyright (c) 2026 The Visrecon Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <cstring>
#include <string_view>

namespace visrecon {

// Counter-based generator (splitmix64 finalizer over an incrementing
// counter). Chosen over std:: engines/distributions so that streams are
// bit-identical across platforms and standard libraries.
class Rng {
public:
    explicit constexpr Rng(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next_u64() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1), 53-bit resolution.
    constexpr double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    constexpr double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * next_double();
    }

    // Uniform integer in [0, n); n must be > 0. Rejection-free modulo is
    // acceptable here: n is always tiny relative to 2^64, bias < 2^-40.
    constexpr std::uint64_t next_below(std::uint64_t n) noexcept {
        return next_u64() % n;
    }

private:
    std::uint64_t state_;
};

// FNV-1a, used to derive child seeds from heterogeneous keys (numbers,
// names). Stable across platforms; not for cryptography.
class SeedHash {
public:
    constexpr SeedHash() noexcept = default;

    constexpr SeedHash& mix(std::uint64_t v) noexcept {
        for (int i = 0; i < 8; ++i) {
            mix_byte(static_cast<unsigned char>(v >> (8 * i)));
        }
        return *this;
    }

    SeedHash& mix(double v) noexcept {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &v, sizeof bits);
        return mix(bits);
    }

    constexpr SeedHash& mix(std::string_view s) noexcept {
        for (char c : s) mix_byte(static_cast<unsigned char>(c));
        mix_byte(0xFF);  // terminator so "ab","c" != "a","bc"
        return *this;
    }

    [[nodiscard]] constexpr std::uint64_t value() const noexcept { return hash_; }

private:
    constexpr void mix_byte(unsigned char b) noexcept {
        hash_ ^= b;
        hash_ *= 0x100000001B3ull;
    }

    std::uint64_t hash_ = 0xCBF29CE484222325ull;
};

}  // namespace visrecon

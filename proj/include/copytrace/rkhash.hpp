#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "copytrace/textnorm.hpp"

namespace copytrace {

using ByteSpan = std::span<const std::uint8_t>;

inline ByteSpan as_bytes(std::string_view s) noexcept {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// Radix and prime modulus of the polynomial hash. Immutable once built.
class HashParams {
public:
    static constexpr std::uint64_t kDefaultBase = 257;
    static constexpr std::uint64_t kDefaultModulus = (std::uint64_t{1} << 61) - 1;

    HashParams() noexcept = default;

    /// Throws Error(InvalidArgument) unless the modulus is a prime below
    /// 2^63 and 255 < base < modulus.
    HashParams(std::uint64_t base, std::uint64_t modulus);

    std::uint64_t base() const noexcept { return base_; }
    std::uint64_t modulus() const noexcept { return modulus_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept;
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept;
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept;
    std::uint64_t pow(std::uint64_t b, std::uint64_t e) const noexcept;

    bool operator==(const HashParams&) const = default;

private:
    std::uint64_t base_ = kDefaultBase;
    std::uint64_t modulus_ = kDefaultModulus;
};

/// Deterministic Miller-Rabin over 64-bit integers.
bool is_prime(std::uint64_t n) noexcept;

struct HashValue {
    std::uint64_t value = 0;

    auto operator<=>(const HashValue&) const = default;
};

/// Horner evaluation of sum(b_i * base^(m-1-i)) mod modulus. Empty input
/// hashes to 0.
HashValue hash_full(ByteSpan bytes, const HashParams& params = {}) noexcept;

inline HashValue hash_full(std::string_view s, const HashParams& params = {}) noexcept {
    return hash_full(as_bytes(s), params);
}

/// Hash of a fixed-length window that slides one byte at a time.
class RollingWindow {
public:
    /// Starts on `initial`, whose length becomes the window length.
    /// Throws Error(InvalidArgument) when `initial` is empty.
    RollingWindow(ByteSpan initial, const HashParams& params = {});

    std::size_t window_len() const noexcept { return window_len_; }
    HashValue current() const noexcept { return {current_}; }

    /// Drops `outgoing` from the front and appends `incoming` at the back.
    HashValue roll(std::uint8_t outgoing, std::uint8_t incoming) noexcept;

private:
    HashParams params_;
    std::size_t window_len_;
    std::uint64_t lead_power_;  // base^(window_len - 1) mod modulus
    std::uint64_t current_;
};

/// Left-to-right Karp-Rabin scan. Every hash hit is confirmed by a byte
/// comparison, so the result holds exactly the positions p with
/// text[p, p + m) == pattern.
///
/// Throws Error(EmptyPattern) for an empty pattern.
std::vector<std::size_t> search(ByteSpan pattern, ByteSpan text, const HashParams& params = {});

inline std::vector<std::size_t> search(std::string_view pattern, std::string_view text,
                                       const HashParams& params = {}) {
    return search(as_bytes(pattern), as_bytes(text), params);
}

/// Fingerprint of a sentence: hash_full over its normalized UTF-8 bytes.
/// Throws Error(EmptyNormalizedSentence) when the normalized form is empty.
HashValue hash_sentence(const Sentence& s, const HashParams& params = {});

}  // namespace copytrace

template <>
struct std::hash<copytrace::HashValue> {
    std::size_t operator()(const copytrace::HashValue& h) const noexcept {
        return std::hash<std::uint64_t>{}(h.value);
    }
};

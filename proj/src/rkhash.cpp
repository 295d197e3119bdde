#include "copytrace/rkhash.hpp"

#include <algorithm>
#include <cstring>
#include <string>

#include "copytrace/error.hpp"

namespace copytrace {
namespace {

using u128 = unsigned __int128;

constexpr std::uint64_t kMersenne61 = HashParams::kDefaultModulus;

std::uint64_t mulmod_generic(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

// a, b < 2^61 - 1; the product fits in 122 bits and folds in two steps.
std::uint64_t mulmod_mersenne61(std::uint64_t a, std::uint64_t b) noexcept {
    const u128 p = static_cast<u128>(a) * b;
    std::uint64_t r = static_cast<std::uint64_t>(p & kMersenne61) +
                      static_cast<std::uint64_t>(p >> 61);
    r = (r & kMersenne61) + (r >> 61);
    return r >= kMersenne61 ? r - kMersenne61 : r;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    auto powmod = [n](std::uint64_t b, std::uint64_t e) {
        std::uint64_t r = 1;
        b %= n;
        while (e) {
            if (e & 1) r = mulmod_generic(r, b, n);
            b = mulmod_generic(b, b, n);
            e >>= 1;
        }
        return r;
    };
    // These witnesses are sufficient for every n < 2^64.
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = powmod(a, d);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_generic(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

HashParams::HashParams(std::uint64_t base, std::uint64_t modulus) : base_(base), modulus_(modulus) {
    if (modulus >= (std::uint64_t{1} << 63) || !is_prime(modulus)) {
        throw Error(ErrorCode::InvalidArgument,
                    "hash modulus must be a prime below 2^63, got " + std::to_string(modulus));
    }
    if (base <= 255 || base >= modulus) {
        throw Error(ErrorCode::InvalidArgument,
                    "hash base must satisfy 255 < base < modulus, got " + std::to_string(base));
    }
}

std::uint64_t HashParams::add(std::uint64_t a, std::uint64_t b) const noexcept {
    const std::uint64_t r = a + b;  // a, b < 2^63: no wraparound
    return r >= modulus_ ? r - modulus_ : r;
}

std::uint64_t HashParams::sub(std::uint64_t a, std::uint64_t b) const noexcept {
    return a >= b ? a - b : a + (modulus_ - b);
}

std::uint64_t HashParams::mul(std::uint64_t a, std::uint64_t b) const noexcept {
    return modulus_ == kMersenne61 ? mulmod_mersenne61(a, b) : mulmod_generic(a, b, modulus_);
}

std::uint64_t HashParams::pow(std::uint64_t b, std::uint64_t e) const noexcept {
    std::uint64_t r = 1 % modulus_;
    b %= modulus_;
    while (e) {
        if (e & 1) r = mul(r, b);
        b = mul(b, b);
        e >>= 1;
    }
    return r;
}

HashValue hash_full(ByteSpan bytes, const HashParams& params) noexcept {
    std::uint64_t h = 0;
    for (std::uint8_t b : bytes) {
        h = params.add(params.mul(h, params.base()), b);
    }
    return {h};
}

RollingWindow::RollingWindow(ByteSpan initial, const HashParams& params)
    : params_(params), window_len_(initial.size()) {
    if (initial.empty()) {
        throw Error(ErrorCode::InvalidArgument, "rolling window length must be positive");
    }
    lead_power_ = params_.pow(params_.base(), window_len_ - 1);
    current_ = hash_full(initial, params_).value;
}

HashValue RollingWindow::roll(std::uint8_t outgoing, std::uint8_t incoming) noexcept {
    const std::uint64_t without_front = params_.sub(current_, params_.mul(outgoing, lead_power_));
    current_ = params_.add(params_.mul(without_front, params_.base()), incoming);
    return {current_};
}

std::vector<std::size_t> search(ByteSpan pattern, ByteSpan text, const HashParams& params) {
    if (pattern.empty()) {
        throw Error(ErrorCode::EmptyPattern, "search pattern must not be empty");
    }
    std::vector<std::size_t> hits;
    const std::size_t m = pattern.size();
    if (m > text.size()) return hits;

    const HashValue target = hash_full(pattern, params);
    RollingWindow window(text.first(m), params);
    const std::size_t last = text.size() - m;
    for (std::size_t j = 0;; ++j) {
        if (window.current() == target && std::memcmp(text.data() + j, pattern.data(), m) == 0) {
            hits.push_back(j);
        }
        if (j == last) break;
        window.roll(text[j], text[j + m]);
    }
    return hits;
}

HashValue hash_sentence(const Sentence& s, const HashParams& params) {
    if (s.normalized.empty()) {
        throw Error(ErrorCode::EmptyNormalizedSentence, "sentence has an empty normalized form");
    }
    return hash_full(s.normalized, params);
}

}  // namespace copytrace

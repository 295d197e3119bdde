#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "copytrace/corpus.hpp"

namespace copytrace {

/// Position of a sentence inside one document.
struct SentencePos {
    std::size_t para = 0;
    std::size_t sent = 0;

    auto operator<=>(const SentencePos&) const = default;
};

struct SentenceMatch {
    SentencePos left;   // in document A
    SentencePos right;  // in document B
    HashValue hash;

    bool operator==(const SentenceMatch&) const = default;
};

/// A percentage quantized to tenths, 0.0 to 100.0.
class Percentage {
public:
    constexpr Percentage() noexcept = default;
    /// Throws Error(OutOfRange) outside [0, 1000].
    static Percentage from_tenths(int tenths);

    constexpr int tenths() const noexcept { return tenths_; }
    /// Always one decimal, e.g. "14.3", "0.0", "100.0".
    std::string str() const;

    auto operator<=>(const Percentage&) const = default;

private:
    int tenths_ = 0;
};

enum class Band { Zero, UnderFifteen, FifteenToFifty, OverFifty, Identical };

/// "zero", "under_fifteen", "fifteen_to_fifty", "over_fifty", "identical".
std::string_view band_name(Band band) noexcept;
/// Throws Error(InvalidArgument) for an unrecognized name.
Band parse_band(std::string_view name);

/// Round-half-up of 100 * matched / total at one decimal, in exact integer
/// arithmetic. Throws Error(ZeroTotal) when total is 0 and
/// Error(OutOfRange) when matched > total.
Percentage percentage(std::uint64_t matched, std::uint64_t total);

/// 0 -> Zero, (0, 15) -> UnderFifteen, [15, 50] -> FifteenToFifty,
/// (50, 100) -> OverFifty, 100 -> Identical.
Band classify(Percentage pct) noexcept;

/// Pairs equal sentences of `a` and `b`. Each sentence of `a`, in document
/// order, takes the earliest still-unpaired sentence of `b` with the same
/// normalized text; the result is ordered by left position.
std::vector<SentenceMatch> match_sentences(const Document& a, const Document& b,
                                           const HashParams& params = {});

enum class Side { A, B };

struct FlagKey {
    Side side = Side::A;
    SentencePos pos;

    auto operator<=>(const FlagKey&) const = default;
};

struct ComparisonReport {
    DocumentId doc_a;
    DocumentId doc_b;
    std::vector<SentenceMatch> matches;
    Percentage pct_a;
    Percentage pct_b;
    Band band_a = Band::Zero;
    Band band_b = Band::Zero;
    /// Other corpus documents (neither A nor B) holding an equal sentence.
    std::map<FlagKey, std::vector<DocumentId>> third_party;

    bool operator==(const ComparisonReport&) const = default;
};

/// Throws Error(UnknownDocument). Comparing a document with itself is valid.
ComparisonReport compare(const CorpusIndex& corpus, DocumentId a, DocumentId b);

}  // namespace copytrace

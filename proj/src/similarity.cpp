#include "copytrace/similarity.hpp"

#include <algorithm>
#include <unordered_map>

#include "copytrace/error.hpp"

namespace copytrace {

Percentage Percentage::from_tenths(int tenths) {
    if (tenths < 0 || tenths > 1000) {
        throw Error(ErrorCode::OutOfRange,
                    "percentage must lie in [0.0, 100.0], got tenths=" + std::to_string(tenths));
    }
    Percentage p;
    p.tenths_ = tenths;
    return p;
}

std::string Percentage::str() const {
    return std::to_string(tenths_ / 10) + '.' + static_cast<char>('0' + tenths_ % 10);
}

std::string_view band_name(Band band) noexcept {
    switch (band) {
    case Band::Zero: return "zero";
    case Band::UnderFifteen: return "under_fifteen";
    case Band::FifteenToFifty: return "fifteen_to_fifty";
    case Band::OverFifty: return "over_fifty";
    case Band::Identical: return "identical";
    }
    return "zero";
}

Band parse_band(std::string_view name) {
    for (Band b : {Band::Zero, Band::UnderFifteen, Band::FifteenToFifty, Band::OverFifty,
                   Band::Identical}) {
        if (band_name(b) == name) return b;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown band '" + std::string(name) + "'");
}

Percentage percentage(std::uint64_t matched, std::uint64_t total) {
    if (total == 0) throw Error(ErrorCode::ZeroTotal, "percentage of an empty document");
    if (matched > total) {
        throw Error(ErrorCode::OutOfRange, "matched count exceeds total sentence count");
    }
    const std::uint64_t scaled = 1000 * matched;
    std::uint64_t tenths = scaled / total;
    if (2 * (scaled % total) >= total) ++tenths;
    return Percentage::from_tenths(static_cast<int>(tenths));
}

Band classify(Percentage pct) noexcept {
    const int t = pct.tenths();
    if (t == 0) return Band::Zero;
    if (t < 150) return Band::UnderFifteen;
    if (t <= 500) return Band::FifteenToFifty;
    if (t < 1000) return Band::OverFifty;
    return Band::Identical;
}

std::vector<SentenceMatch> match_sentences(const Document& a, const Document& b,
                                           const HashParams& params) {
    struct Candidate {
        const Sentence* sentence;
        bool taken = false;
    };
    std::unordered_map<HashValue, std::vector<Candidate>> candidates;
    for (const auto& para : b.segmented.paragraphs) {
        for (const Sentence& s : para) candidates[hash_sentence(s, params)].push_back({&s});
    }

    std::vector<SentenceMatch> matches;
    for (const auto& para : a.segmented.paragraphs) {
        for (const Sentence& s : para) {
            const HashValue h = hash_sentence(s, params);
            auto it = candidates.find(h);
            if (it == candidates.end()) continue;
            for (Candidate& c : it->second) {
                if (c.taken || c.sentence->normalized != s.normalized) continue;
                c.taken = true;
                matches.push_back({{s.para_idx, s.sent_idx},
                                   {c.sentence->para_idx, c.sentence->sent_idx},
                                   h});
                break;
            }
        }
    }
    return matches;
}

namespace {

void flag_third_parties(const CorpusIndex& corpus, const Document& doc, Side side,
                        DocumentId a, DocumentId b,
                        std::map<FlagKey, std::vector<DocumentId>>& flags) {
    for (const auto& para : doc.segmented.paragraphs) {
        for (const Sentence& s : para) {
            std::vector<DocumentId> others;
            for (const SentenceRecord& rec : corpus.bucket(hash_sentence(s, corpus.params()))) {
                if (rec.doc == a || rec.doc == b || rec.normalized != s.normalized) continue;
                if (others.empty() || others.back() != rec.doc) others.push_back(rec.doc);
            }
            if (!others.empty()) {
                flags.emplace(FlagKey{side, {s.para_idx, s.sent_idx}}, std::move(others));
            }
        }
    }
}

}  // namespace

ComparisonReport compare(const CorpusIndex& corpus, DocumentId a, DocumentId b) {
    const Document& doc_a = corpus.at(a);
    const Document& doc_b = corpus.at(b);

    ComparisonReport report;
    report.doc_a = a;
    report.doc_b = b;
    report.matches = match_sentences(doc_a, doc_b, corpus.params());
    report.pct_a = percentage(report.matches.size(), doc_a.segmented.sentence_count());
    report.pct_b = percentage(report.matches.size(), doc_b.segmented.sentence_count());
    report.band_a = classify(report.pct_a);
    report.band_b = classify(report.pct_b);
    flag_third_parties(corpus, doc_a, Side::A, a, b, report.third_party);
    flag_third_parties(corpus, doc_b, Side::B, a, b, report.third_party);
    return report;
}

}  // namespace copytrace

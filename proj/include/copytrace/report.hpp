#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "copytrace/corpus.hpp"
#include "copytrace/similarity.hpp"

namespace copytrace {

/// How one sentence is highlighted. A sentence can be both a match and a
/// third-party hit; it then carries both classes and match styling wins.
struct Highlight {
    bool match = false;
    bool third_party = false;

    /// "match", "thirdparty", "match thirdparty" or "plain".
    std::string css_class() const;
};

Highlight highlight_for(const ComparisonReport& r, Side side, SentencePos pos);

/// Canonical single-line JSON:
/// {doc_a, doc_b, pct_a, pct_b, band_a, band_b,
///  matches:[{left:{para,sent}, right:{para,sent}}],
///  third_party:[{side, para, sent, docs:[ids]}]}
/// Percentages are strings with exactly one decimal.
std::string render_json(const ComparisonReport& r);

/// `[{"id":..,"name":..,"sentence_count":..,"ingested_at":..}, ...]`
std::string render_document_list_json(const std::vector<DocumentSummary>& docs);

/// Standalone HTML5 page with embedded CSS. Both documents are printed side
/// by side, each sentence in a span classed per `Highlight`, followed by an
/// "also found in" list for third-party hits.
///
/// Throws Error(UnknownDocument).
std::string render_html(const ComparisonReport& r, const CorpusIndex& corpus);

}  // namespace copytrace

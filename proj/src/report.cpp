#include "copytrace/report.hpp"

#include <algorithm>

#include "json.hpp"

#include "markup.hpp"

namespace copytrace {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kStyle = R"(body { font-family: Georgia, serif; margin: 2em; color: #222; }
h1 { font-size: 1.4em; }
table.summary { border-collapse: collapse; margin-bottom: 1.5em; }
table.summary th, table.summary td { border: 1px solid #bbb; padding: 0.3em 0.8em; text-align: left; }
.sides { display: flex; gap: 2em; align-items: flex-start; }
.side { flex: 1 1 0; min-width: 0; }
.side p { line-height: 1.6; }
.match { color: #c00000; font-weight: bold; }
.thirdparty { background-color: #ffc0cb; }
.match.thirdparty { background-color: transparent; }
.provenance { font-size: 0.9em; color: #555; }
.band { padding: 0.1em 0.5em; border-radius: 0.3em; color: #fff; }
.band-zero { background-color: #4a8f4a; }
.band-under_fifteen { background-color: #8fae3a; }
.band-fifteen_to_fifty { background-color: #d9a227; }
.band-over_fifty { background-color: #d2622a; }
.band-identical { background-color: #b01c1c; }
)";

std::string_view band_label(Band band) {
    switch (band) {
    case Band::Zero: return "0%";
    case Band::UnderFifteen: return "under 15%";
    case Band::FifteenToFifty: return "15-50%";
    case Band::OverFifty: return "over 50%";
    case Band::Identical: return "100%";
    }
    return "";
}

std::string esc(std::string_view s) { return detail::escape_markup(s, "&#39;"); }

std::string doc_label(const Document& doc) {
    return esc(doc.name) + " (id " + std::to_string(doc.id.value) + ")";
}

void render_side(std::string& html, const ComparisonReport& r, const CorpusIndex& corpus,
                 const Document& doc, Side side) {
    const char* tag = side == Side::A ? "a" : "b";
    html += "<section class=\"side side-";
    html += tag;
    html += "\" data-doc=\"" + std::to_string(doc.id.value) + "\">\n";
    html += "<h2>" + esc(doc.name) + "</h2>\n";
    for (const auto& para : doc.segmented.paragraphs) {
        html += "<p>";
        for (std::size_t i = 0; i < para.size(); ++i) {
            const Sentence& s = para[i];
            if (i > 0) html += ' ';
            const Highlight h = highlight_for(r, side, {s.para_idx, s.sent_idx});
            html += "<span class=\"" + h.css_class() + "\" data-para=\"" +
                    std::to_string(s.para_idx) + "\" data-sent=\"" + std::to_string(s.sent_idx) +
                    "\">" + esc(s.raw) + "</span>";
        }
        html += "</p>\n";
    }

    bool any = false;
    for (const auto& [key, docs] : r.third_party) {
        if (key.side != side) continue;
        if (!any) html += "<ul class=\"provenance\">\n";
        any = true;
        html += "<li>Paragraph " + std::to_string(key.pos.para + 1) + ", sentence " +
                std::to_string(key.pos.sent + 1) + " also found in: ";
        for (std::size_t i = 0; i < docs.size(); ++i) {
            if (i > 0) html += ", ";
            html += doc_label(corpus.at(docs[i]));
        }
        html += "</li>\n";
    }
    if (any) html += "</ul>\n";
    html += "</section>\n";
}

}  // namespace

std::string Highlight::css_class() const {
    if (match && third_party) return "match thirdparty";
    if (match) return "match";
    if (third_party) return "thirdparty";
    return "plain";
}

Highlight highlight_for(const ComparisonReport& r, Side side, SentencePos pos) {
    Highlight h;
    for (const SentenceMatch& m : r.matches) {
        if ((side == Side::A ? m.left : m.right) == pos) {
            h.match = true;
            break;
        }
    }
    h.third_party = r.third_party.contains(FlagKey{side, pos});
    return h;
}

std::string render_json(const ComparisonReport& r) {
    ordered_json j;
    j["doc_a"] = r.doc_a.value;
    j["doc_b"] = r.doc_b.value;
    j["pct_a"] = r.pct_a.str();
    j["pct_b"] = r.pct_b.str();
    j["band_a"] = band_name(r.band_a);
    j["band_b"] = band_name(r.band_b);

    auto matches = r.matches;
    std::sort(matches.begin(), matches.end(),
              [](const SentenceMatch& x, const SentenceMatch& y) { return x.left < y.left; });
    j["matches"] = ordered_json::array();
    for (const SentenceMatch& m : matches) {
        ordered_json left, right, entry;
        left["para"] = m.left.para;
        left["sent"] = m.left.sent;
        right["para"] = m.right.para;
        right["sent"] = m.right.sent;
        entry["left"] = std::move(left);
        entry["right"] = std::move(right);
        j["matches"].push_back(std::move(entry));
    }

    j["third_party"] = ordered_json::array();
    for (const auto& [key, docs] : r.third_party) {
        ordered_json entry;
        entry["side"] = key.side == Side::A ? "a" : "b";
        entry["para"] = key.pos.para;
        entry["sent"] = key.pos.sent;
        entry["docs"] = ordered_json::array();
        for (DocumentId id : docs) entry["docs"].push_back(id.value);
        j["third_party"].push_back(std::move(entry));
    }
    return j.dump();
}

std::string render_document_list_json(const std::vector<DocumentSummary>& docs) {
    ordered_json j = ordered_json::array();
    for (const DocumentSummary& d : docs) {
        ordered_json entry;
        entry["id"] = d.id.value;
        entry["name"] = d.name;
        entry["sentence_count"] = d.sentence_count;
        entry["ingested_at"] = d.ingested_at;
        j.push_back(std::move(entry));
    }
    return j.dump();
}

std::string render_html(const ComparisonReport& r, const CorpusIndex& corpus) {
    const Document& a = corpus.at(r.doc_a);
    const Document& b = corpus.at(r.doc_b);

    std::string html;
    html += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\"/>\n";
    html += "<title>Comparison: " + esc(a.name) + " vs " + esc(b.name) + "</title>\n";
    html += "<style>\n";
    html += kStyle;
    html += "</style>\n</head>\n<body>\n<header>\n<h1>Document comparison</h1>\n";
    html += "<table class=\"summary\">\n";
    html += "<tr><th>Side</th><th>Document</th><th>Sentences</th><th>Identical</th><th>Band</th></tr>\n";
    auto summary_row = [&](const char* side, const Document& doc, Percentage pct, Band band) {
        html += "<tr><td>";
        html += side;
        html += "</td><td>" + doc_label(doc) + "</td><td>" +
                std::to_string(doc.segmented.sentence_count()) + "</td><td class=\"pct\">" +
                pct.str() + "%</td><td><span class=\"band band-" + std::string(band_name(band)) +
                "\">" + std::string(band_label(band)) + "</span></td></tr>\n";
    };
    summary_row("A", a, r.pct_a, r.band_a);
    summary_row("B", b, r.pct_b, r.band_b);
    html += "</table>\n";
    html += "<p class=\"match-count\">Identical sentences: " + std::to_string(r.matches.size()) +
            "</p>\n</header>\n";
    html += "<main class=\"sides\">\n";
    render_side(html, r, corpus, a, Side::A);
    render_side(html, r, corpus, b, Side::B);
    html += "</main>\n</body>\n</html>\n";
    return html;
}

}  // namespace copytrace

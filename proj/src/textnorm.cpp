#include "copytrace/textnorm.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "copytrace/error.hpp"

namespace copytrace {
namespace {

using CodePoints = std::u32string;

CodePoints decode(std::string_view text) {
    CodePoints out;
    out.reserve(text.size());
    const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
    const auto length = static_cast<int32_t>(text.size());
    int32_t i = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(bytes, i, length, c);
        if (c < 0) {
            throw Error(ErrorCode::InvalidEncoding, "input is not valid UTF-8");
        }
        out.push_back(static_cast<char32_t>(c));
    }
    return out;
}

void append_utf8(std::string& out, char32_t c) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, static_cast<UChar32>(c));
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

std::string encode(std::u32string_view cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t c : cps) append_utf8(out, c);
    return out;
}

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool is_terminator(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

std::u32string_view trim(std::u32string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

std::vector<CodePoints> split_paragraphs(const CodePoints& text) {
    std::vector<CodePoints> paragraphs;
    CodePoints current;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find(U'\n', pos);
        if (eol == CodePoints::npos) eol = text.size();
        auto line = trim(std::u32string_view(text).substr(pos, eol - pos));
        if (line.empty()) {
            if (!current.empty()) paragraphs.push_back(std::move(current));
            current.clear();
        } else {
            if (!current.empty()) current.push_back(U' ');
            current.append(line);
        }
        pos = eol + 1;
    }
    if (!current.empty()) paragraphs.push_back(std::move(current));
    return paragraphs;
}

std::vector<std::u32string_view> split_sentences(std::u32string_view para) {
    std::vector<std::u32string_view> sentences;
    std::size_t start = 0;
    for (std::size_t i = 0; i < para.size(); ++i) {
        if (!is_terminator(para[i])) continue;
        if (i + 1 < para.size() && !is_space(para[i + 1])) continue;
        auto s = trim(para.substr(start, i + 1 - start));
        if (!s.empty()) sentences.push_back(s);
        start = i + 1;
    }
    auto rest = trim(para.substr(std::min(start, para.size())));
    if (!rest.empty()) sentences.push_back(rest);
    return sentences;
}

}  // namespace

std::size_t SegmentedDocument::sentence_count() const noexcept {
    std::size_t n = 0;
    for (const auto& p : paragraphs) n += p.size();
    return n;
}

std::vector<Sentence> SegmentedDocument::flatten() const {
    std::vector<Sentence> out;
    out.reserve(sentence_count());
    for (const auto& p : paragraphs) out.insert(out.end(), p.begin(), p.end());
    return out;
}

bool is_valid_utf8(std::string_view text) noexcept {
    const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
    const auto length = static_cast<int32_t>(text.size());
    int32_t i = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(bytes, i, length, c);
        if (c < 0) return false;
    }
    return true;
}

std::string normalize(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
    const auto length = static_cast<int32_t>(text.size());
    int32_t i = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(bytes, i, length, c);
        if (c < 0) continue;
        UChar32 folded = u_foldCase(c, U_FOLD_CASE_DEFAULT);
        if (u_isalpha(folded) || u_isdigit(folded)) {
            append_utf8(out, static_cast<char32_t>(folded));
        }
    }
    return out;
}

SegmentedDocument segment(std::string_view text) {
    const CodePoints cps = decode(text);
    SegmentedDocument doc;
    for (const auto& para_text : split_paragraphs(cps)) {
        Paragraph para;
        for (auto s : split_sentences(para_text)) {
            Sentence sentence;
            sentence.raw = encode(s);
            sentence.normalized = normalize(sentence.raw);
            if (sentence.normalized.empty()) continue;
            sentence.para_idx = doc.paragraphs.size();
            sentence.sent_idx = para.size();
            para.push_back(std::move(sentence));
        }
        if (!para.empty()) doc.paragraphs.push_back(std::move(para));
    }
    if (doc.paragraphs.empty()) {
        throw Error(ErrorCode::EmptyDocument, "document has no sentences with content");
    }
    return doc;
}

std::string render(const SegmentedDocument& doc) {
    std::string out;
    for (std::size_t p = 0; p < doc.paragraphs.size(); ++p) {
        if (p > 0) out += "\n\n";
        const auto& para = doc.paragraphs[p];
        for (std::size_t s = 0; s < para.size(); ++s) {
            if (s > 0) out += ' ';
            out += para[s].raw;
        }
    }
    return out;
}

}  // namespace copytrace

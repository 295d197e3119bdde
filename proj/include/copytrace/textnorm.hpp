#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace copytrace {

/// One sentence of a segmented document. `normalized` is always
/// `normalize(raw)`; both are UTF-8.
struct Sentence {
    std::string raw;
    std::string normalized;
    std::size_t para_idx = 0;
    std::size_t sent_idx = 0;

    bool operator==(const Sentence&) const = default;
};

using Paragraph = std::vector<Sentence>;

/// Paragraphs of sentences in source order. Never holds an empty paragraph
/// or a sentence whose normalized form is empty.
struct SegmentedDocument {
    std::vector<Paragraph> paragraphs;

    std::size_t sentence_count() const noexcept;
    std::vector<Sentence> flatten() const;

    bool operator==(const SegmentedDocument&) const = default;
};

bool is_valid_utf8(std::string_view text) noexcept;

/// Simple case folding followed by removal of every code point that is not
/// a letter (general category L) or a decimal digit (Nd). Ill-formed UTF-8
/// sequences are dropped.
std::string normalize(std::string_view text);

/// Splits text into blank-line separated paragraphs and terminator
/// separated sentences. A sentence ends after '.', '!' or '?' followed by
/// whitespace or the end of its paragraph; line breaks inside a paragraph
/// become single spaces.
///
/// Throws Error(InvalidEncoding) for ill-formed UTF-8 and
/// Error(EmptyDocument) when no sentence has a non-empty normalized form.
SegmentedDocument segment(std::string_view text);

/// Sentences joined by single spaces, paragraphs by one blank line.
std::string render(const SegmentedDocument& doc);

}  // namespace copytrace

#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "copytrace/rkhash.hpp"
#include "copytrace/textnorm.hpp"

namespace copytrace {

struct DocumentId {
    std::uint64_t value = 0;

    auto operator<=>(const DocumentId&) const = default;
};

struct Document {
    DocumentId id;
    std::string name;
    SegmentedDocument segmented;
    std::int64_t ingested_at = 0;  // UTC seconds

    bool operator==(const Document&) const = default;
};

/// One indexed sentence: the row (hash, doc, para, sent) plus its text.
struct SentenceRecord {
    HashValue hash;
    DocumentId doc;
    std::size_t para_idx = 0;
    std::size_t sent_idx = 0;
    std::string raw;
    std::string normalized;

    bool operator==(const SentenceRecord&) const = default;
};

struct DocumentSummary {
    DocumentId id;
    std::string name;
    std::size_t sentence_count = 0;
    std::int64_t ingested_at = 0;

    bool operator==(const DocumentSummary&) const = default;
};

/// Immutable-by-convention corpus state: documents plus the hash buckets
/// over all their sentences. Readers hold a `shared_ptr<const CorpusIndex>`
/// snapshot; `Corpus` mutates private copies.
class CorpusIndex {
public:
    static constexpr int kFormatVersion = 1;

    explicit CorpusIndex(HashParams params = {}) : params_(params) {}

    const HashParams& params() const noexcept { return params_; }
    std::uint64_t next_id() const noexcept { return next_id_; }
    const std::map<DocumentId, Document>& documents() const noexcept { return documents_; }

    const Document* find(DocumentId id) const noexcept;
    const Document* find_by_name(std::string_view name) const noexcept;
    /// Throws Error(UnknownDocument).
    const Document& at(DocumentId id) const;

    /// Records with hash `h`, ordered by (doc, para_idx, sent_idx).
    const std::vector<SentenceRecord>& bucket(HashValue h) const noexcept;
    std::vector<SentenceRecord> lookup_hash(HashValue h) const { return bucket(h); }

    std::vector<DocumentSummary> list_documents() const;

    /// Throws Error(UnknownDocument).
    std::string export_xml(DocumentId id) const;

    /// Inserts a document under a fresh id, first dropping any document that
    /// already carries `name`.
    DocumentId insert(std::string name, SegmentedDocument segmented, std::int64_t ingested_at);
    bool erase(DocumentId id);

    /// Line-oriented index file: JSON header, one line per document, one
    /// line per sentence record.
    std::string serialize() const;
    /// Throws Error(StorageFailure) on malformed or inconsistent input.
    static CorpusIndex parse(std::string_view text);

    bool operator==(const CorpusIndex&) const = default;

private:
    HashParams params_;
    std::uint64_t next_id_ = 1;
    std::map<DocumentId, Document> documents_;
    std::map<std::string, DocumentId, std::less<>> names_;
    std::unordered_map<HashValue, std::vector<SentenceRecord>> by_hash_;

    void index_document(const Document& doc);
};

/// Durable corpus over a single index file. Writers serialize against each
/// other; readers take snapshots and never observe a half-applied change.
class Corpus {
public:
    using Clock = std::function<std::int64_t()>;

    /// Opens `index_path`, loading it when it exists. An explicit `params`
    /// must agree with a loaded header.
    explicit Corpus(std::filesystem::path index_path,
                    std::optional<HashParams> params = std::nullopt, Clock clock = {});

    /// A corpus that is never written to disk.
    static std::unique_ptr<Corpus> in_memory(HashParams params = {}, Clock clock = {});

    Corpus(const Corpus&) = delete;
    Corpus& operator=(const Corpus&) = delete;

    /// Throws Error(EmptyDocument), Error(InvalidEncoding),
    /// Error(InvalidArgument) for an empty name, Error(StorageFailure).
    DocumentId ingest(std::string name, std::string_view content);
    /// Throws Error(StorageFailure).
    bool remove_document(DocumentId id);

    std::shared_ptr<const CorpusIndex> snapshot() const;

    std::vector<SentenceRecord> lookup_hash(HashValue h) const { return snapshot()->lookup_hash(h); }
    std::vector<DocumentSummary> list_documents() const { return snapshot()->list_documents(); }
    std::string export_xml(DocumentId id) const { return snapshot()->export_xml(id); }

    const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

private:
    Corpus(std::optional<std::filesystem::path> path, CorpusIndex initial, Clock clock);

    void commit(std::shared_ptr<const CorpusIndex> next);

    std::optional<std::filesystem::path> path_;
    Clock clock_;
    std::mutex write_mutex_;
    mutable std::mutex state_mutex_;
    std::shared_ptr<const CorpusIndex> state_;
};

/// Reads the whole file. Throws Error(StorageFailure).
CorpusIndex load_index(const std::filesystem::path& path);

/// Writes to a sibling temp file, syncs it and renames it over `path`.
/// Throws Error(StorageFailure).
void write_file_atomically(const std::filesystem::path& path, std::string_view contents);

}  // namespace copytrace

template <>
struct std::hash<copytrace::DocumentId> {
    std::size_t operator()(const copytrace::DocumentId& id) const noexcept {
        return std::hash<std::uint64_t>{}(id.value);
    }
};

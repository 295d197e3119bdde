#include "copytrace/corpus.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "copytrace/error.hpp"
#include "markup.hpp"

namespace copytrace {
namespace {

using ordered_json = nlohmann::ordered_json;

auto record_key(const SentenceRecord& r) { return std::tie(r.doc, r.para_idx, r.sent_idx); }

std::int64_t system_clock_seconds() {
    using namespace std::chrono;
    return duration_cast<seconds>(system_clock::now().time_since_epoch()).count();
}

[[noreturn]] void corrupt(const std::string& what) {
    throw Error(ErrorCode::StorageFailure, "malformed index: " + what);
}

[[noreturn]] void corrupt(std::size_t line_no, const std::string& what) {
    corrupt("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

// ---------------------------------------------------------------------------
// CorpusIndex

const Document* CorpusIndex::find(DocumentId id) const noexcept {
    auto it = documents_.find(id);
    return it == documents_.end() ? nullptr : &it->second;
}

const Document* CorpusIndex::find_by_name(std::string_view name) const noexcept {
    auto it = names_.find(name);
    return it == names_.end() ? nullptr : find(it->second);
}

const Document& CorpusIndex::at(DocumentId id) const {
    if (const Document* doc = find(id)) return *doc;
    throw Error(ErrorCode::UnknownDocument, "unknown document id " + std::to_string(id.value));
}

const std::vector<SentenceRecord>& CorpusIndex::bucket(HashValue h) const noexcept {
    static const std::vector<SentenceRecord> kEmpty;
    auto it = by_hash_.find(h);
    return it == by_hash_.end() ? kEmpty : it->second;
}

std::vector<DocumentSummary> CorpusIndex::list_documents() const {
    std::vector<DocumentSummary> out;
    out.reserve(documents_.size());
    for (const auto& [id, doc] : documents_) {
        out.push_back({id, doc.name, doc.segmented.sentence_count(), doc.ingested_at});
    }
    return out;
}

std::string CorpusIndex::export_xml(DocumentId id) const {
    const Document& doc = at(id);
    std::string xml = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    xml += "<document id=\"" + std::to_string(doc.id.value) + "\" name=\"" +
           detail::escape_markup(doc.name) + "\">\n";
    for (std::size_t p = 0; p < doc.segmented.paragraphs.size(); ++p) {
        xml += "\t<paragraph id=\"" + std::to_string(p) + "\">\n";
        for (const Sentence& s : doc.segmented.paragraphs[p]) {
            xml += "\t\t<sentence sentence_id=\"" + std::to_string(s.sent_idx) + "\">" +
                   detail::escape_markup(s.raw) + "</sentence>\n";
        }
        xml += "\t</paragraph>\n";
    }
    xml += "</document>\n";
    return xml;
}

void CorpusIndex::index_document(const Document& doc) {
    for (const auto& para : doc.segmented.paragraphs) {
        for (const Sentence& s : para) {
            SentenceRecord rec{hash_sentence(s, params_), doc.id, s.para_idx, s.sent_idx,
                               s.raw, s.normalized};
            auto& records = by_hash_[rec.hash];
            auto pos = std::upper_bound(records.begin(), records.end(), rec,
                                        [](const SentenceRecord& a, const SentenceRecord& b) {
                                            return record_key(a) < record_key(b);
                                        });
            records.insert(pos, std::move(rec));
        }
    }
}

DocumentId CorpusIndex::insert(std::string name, SegmentedDocument segmented,
                               std::int64_t ingested_at) {
    if (auto it = names_.find(name); it != names_.end()) erase(it->second);
    const DocumentId id{next_id_++};
    Document doc{id, std::move(name), std::move(segmented), ingested_at};
    index_document(doc);
    names_.emplace(doc.name, id);
    documents_.emplace(id, std::move(doc));
    return id;
}

bool CorpusIndex::erase(DocumentId id) {
    auto it = documents_.find(id);
    if (it == documents_.end()) return false;
    for (const auto& para : it->second.segmented.paragraphs) {
        for (const Sentence& s : para) {
            auto bucket_it = by_hash_.find(hash_sentence(s, params_));
            if (bucket_it == by_hash_.end()) continue;
            std::erase_if(bucket_it->second, [id](const SentenceRecord& r) { return r.doc == id; });
            if (bucket_it->second.empty()) by_hash_.erase(bucket_it);
        }
    }
    names_.erase(it->second.name);
    documents_.erase(it);
    return true;
}

std::string CorpusIndex::serialize() const {
    std::string out;
    ordered_json header;
    header["format"] = kFormatVersion;
    header["base"] = params_.base();
    header["modulus"] = params_.modulus();
    header["next_id"] = next_id_;
    out += header.dump();
    out += '\n';

    for (const auto& [id, doc] : documents_) {
        ordered_json inner;
        inner["id"] = id.value;
        inner["name"] = doc.name;
        inner["ingested_at"] = doc.ingested_at;
        ordered_json line;
        line["doc"] = std::move(inner);
        out += line.dump();
        out += '\n';
    }
    for (const auto& [id, doc] : documents_) {
        for (const auto& para : doc.segmented.paragraphs) {
            for (const Sentence& s : para) {
                ordered_json inner;
                inner["hash"] = hash_sentence(s, params_).value;
                inner["doc"] = id.value;
                inner["para"] = s.para_idx;
                inner["sent"] = s.sent_idx;
                inner["raw"] = s.raw;
                inner["norm"] = s.normalized;
                ordered_json line;
                line["rec"] = std::move(inner);
                out += line.dump();
                out += '\n';
            }
        }
    }
    return out;
}

CorpusIndex CorpusIndex::parse(std::string_view text) {
    std::vector<std::string_view> lines;
    for (std::size_t pos = 0; pos < text.size();) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        lines.push_back(text.substr(pos, eol - pos));
        pos = eol + 1;
    }
    if (lines.empty()) corrupt(1, "missing header");

    try {
        const auto header = nlohmann::json::parse(lines[0]);
        if (header.at("format").get<int>() != kFormatVersion) {
            corrupt(1, "unsupported format version");
        }
        CorpusIndex index(HashParams(header.at("base").get<std::uint64_t>(),
                                     header.at("modulus").get<std::uint64_t>()));
        const auto next_id = header.at("next_id").get<std::uint64_t>();

        std::map<DocumentId, std::vector<SentenceRecord>> records;
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const std::size_t line_no = i + 1;
            if (lines[i].empty()) corrupt(line_no, "blank line");
            const auto line = nlohmann::json::parse(lines[i]);
            if (line.contains("doc")) {
                const auto& d = line["doc"];
                Document doc;
                doc.id = DocumentId{d.at("id").get<std::uint64_t>()};
                doc.name = d.at("name").get<std::string>();
                doc.ingested_at = d.at("ingested_at").get<std::int64_t>();
                if (doc.id.value == 0 || doc.id.value >= next_id) corrupt(line_no, "bad document id");
                if (doc.name.empty()) corrupt(line_no, "empty document name");
                if (!index.names_.emplace(doc.name, doc.id).second) {
                    corrupt(line_no, "duplicate document name");
                }
                if (!index.documents_.emplace(doc.id, std::move(doc)).second) {
                    corrupt(line_no, "duplicate document id");
                }
            } else if (line.contains("rec")) {
                const auto& r = line["rec"];
                SentenceRecord rec;
                rec.hash = HashValue{r.at("hash").get<std::uint64_t>()};
                rec.doc = DocumentId{r.at("doc").get<std::uint64_t>()};
                rec.para_idx = r.at("para").get<std::size_t>();
                rec.sent_idx = r.at("sent").get<std::size_t>();
                rec.raw = r.at("raw").get<std::string>();
                rec.normalized = r.at("norm").get<std::string>();
                if (!index.documents_.contains(rec.doc)) corrupt(line_no, "record for unknown document");
                if (rec.normalized.empty() || normalize(rec.raw) != rec.normalized) {
                    corrupt(line_no, "normalized text does not match raw text");
                }
                if (hash_full(rec.normalized, index.params_) != rec.hash) {
                    corrupt(line_no, "hash does not match normalized text");
                }
                records[rec.doc].push_back(std::move(rec));
            } else {
                corrupt(line_no, "unrecognized line");
            }
        }

        for (auto& [id, doc] : index.documents_) {
            auto it = records.find(id);
            if (it == records.end()) corrupt("document " + std::to_string(id.value) + " has no sentences");
            auto& recs = it->second;
            std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) {
                return record_key(a) < record_key(b);
            });
            for (const auto& rec : recs) {
                auto& paragraphs = doc.segmented.paragraphs;
                if (rec.para_idx == paragraphs.size()) paragraphs.emplace_back();
                if (rec.para_idx + 1 != paragraphs.size() ||
                    rec.sent_idx != paragraphs.back().size()) {
                    corrupt("document " + std::to_string(id.value) + " has non-contiguous sentence positions");
                }
                paragraphs.back().push_back({rec.raw, rec.normalized, rec.para_idx, rec.sent_idx});
            }
            index.index_document(doc);
        }
        index.next_id_ = next_id;
        return index;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::StorageFailure, std::string("malformed index: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::StorageFailure) throw;
        throw Error(ErrorCode::StorageFailure, std::string("malformed index: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Persistence

CorpusIndex load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::StorageFailure, "cannot open index " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::StorageFailure, "cannot read index " + path.string());
    return CorpusIndex::parse(buf.str());
}

void write_file_atomically(const std::filesystem::path& path, std::string_view contents) {
    auto fail = [&](const char* what) {
        throw Error(ErrorCode::StorageFailure,
                    std::string(what) + " " + path.string() + ": " + std::strerror(errno));
    };
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) fail("cannot create");
    std::size_t written = 0;
    while (written < contents.size()) {
        const ssize_t n = ::write(fd, contents.data() + written, contents.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            ::close(fd);
            ::unlink(tmp.c_str());
            fail("cannot write");
        }
        written += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0) {
        ::close(fd);
        ::unlink(tmp.c_str());
        fail("cannot sync");
    }
    ::close(fd);
    if (::rename(tmp.c_str(), path.c_str()) != 0) {
        ::unlink(tmp.c_str());
        fail("cannot replace");
    }
}

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus(std::optional<std::filesystem::path> path, CorpusIndex initial, Clock clock)
    : path_(std::move(path)),
      clock_(clock ? std::move(clock) : Clock(system_clock_seconds)),
      state_(std::make_shared<const CorpusIndex>(std::move(initial))) {}

Corpus::Corpus(std::filesystem::path index_path, std::optional<HashParams> params, Clock clock)
    : Corpus(std::optional<std::filesystem::path>(index_path),
             CorpusIndex(params.value_or(HashParams{})), std::move(clock)) {
    std::error_code ec;
    if (std::filesystem::exists(index_path, ec)) {
        auto loaded = load_index(index_path);
        if (params && loaded.params() != *params) {
            throw Error(ErrorCode::InvalidArgument,
                        "hash parameters differ from those stored in " + index_path.string());
        }
        state_ = std::make_shared<const CorpusIndex>(std::move(loaded));
    }
}

std::unique_ptr<Corpus> Corpus::in_memory(HashParams params, Clock clock) {
    return std::unique_ptr<Corpus>(new Corpus(std::nullopt, CorpusIndex(params), std::move(clock)));
}

std::shared_ptr<const CorpusIndex> Corpus::snapshot() const {
    std::lock_guard lock(state_mutex_);
    return state_;
}

void Corpus::commit(std::shared_ptr<const CorpusIndex> next) {
    if (path_) write_file_atomically(*path_, next->serialize());
    std::lock_guard lock(state_mutex_);
    state_ = std::move(next);
}

DocumentId Corpus::ingest(std::string name, std::string_view content) {
    if (name.empty()) throw Error(ErrorCode::InvalidArgument, "document name must not be empty");
    if (!is_valid_utf8(name)) throw Error(ErrorCode::InvalidEncoding, "document name is not valid UTF-8");
    SegmentedDocument segmented = segment(content);

    std::lock_guard writer(write_mutex_);
    auto next = std::make_shared<CorpusIndex>(*snapshot());
    const DocumentId id = next->insert(std::move(name), std::move(segmented), clock_());
    commit(std::move(next));
    return id;
}

bool Corpus::remove_document(DocumentId id) {
    std::lock_guard writer(write_mutex_);
    auto current = snapshot();
    if (!current->find(id)) return false;
    auto next = std::make_shared<CorpusIndex>(*current);
    next->erase(id);
    commit(std::move(next));
    return true;
}

}  // namespace copytrace

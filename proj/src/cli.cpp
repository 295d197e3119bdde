#include "copytrace/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "copytrace/corpus.hpp"
#include "copytrace/error.hpp"
#include "copytrace/report.hpp"
#include "copytrace/similarity.hpp"

namespace copytrace {
namespace {

namespace fs = std::filesystem;

struct Options {
    std::string index = "./copytrace.idx";
    bool json = false;

    std::vector<std::string> files;
    std::string name;

    std::string left;
    std::string right;
    std::string html_out;

    std::string min_band = "zero";

    std::string target;
    std::string xml_out;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << contents;
    if (!out.flush()) throw UsageError("cannot write " + path.string());
}

// Resolves a document by name, falling back to a numeric id.
const Document& resolve(const CorpusIndex& index, const std::string& ref) {
    if (const Document* doc = index.find_by_name(ref)) return *doc;
    std::uint64_t id = 0;
    auto [end, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), id);
    if (ec == std::errc{} && end == ref.data() + ref.size()) {
        if (const Document* doc = index.find(DocumentId{id})) return *doc;
    }
    throw Error(ErrorCode::UnknownDocument, "no document named '" + ref + "'");
}

std::string describe(const Document& doc) {
    return doc.name + " (id " + std::to_string(doc.id.value) + ")";
}

int cmd_add(Corpus& corpus, const Options& opt, std::ostream& out) {
    if (!opt.name.empty() && opt.files.size() != 1) {
        throw UsageError("--name requires exactly one file");
    }
    nlohmann::ordered_json added = nlohmann::ordered_json::array();
    for (const auto& file : opt.files) {
        const std::string name = opt.name.empty() ? fs::path(file).stem().string() : opt.name;
        const std::string content = read_file(file);
        const DocumentId id = corpus.ingest(name, content);
        const std::size_t count = corpus.snapshot()->at(id).segmented.sentence_count();
        if (opt.json) {
            nlohmann::ordered_json entry;
            entry["id"] = id.value;
            entry["name"] = name;
            entry["sentence_count"] = count;
            added.push_back(std::move(entry));
        } else {
            out << "added " << id.value << " (" << name << ", " << count << " sentences)\n";
        }
    }
    if (opt.json) out << added.dump() << '\n';
    return kExitOk;
}

void print_report_text(const ComparisonReport& r, const CorpusIndex& index, std::ostream& out) {
    const Document& a = index.at(r.doc_a);
    const Document& b = index.at(r.doc_b);
    out << "a=" << describe(a) << " sentences=" << a.segmented.sentence_count() << '\n';
    out << "b=" << describe(b) << " sentences=" << b.segmented.sentence_count() << '\n';
    out << "matches=" << r.matches.size() << '\n';
    out << "pct_a=" << r.pct_a.str() << " band_a=" << band_name(r.band_a) << '\n';
    out << "pct_b=" << r.pct_b.str() << " band_b=" << band_name(r.band_b) << '\n';
    for (const auto& [key, docs] : r.third_party) {
        out << "third_party side=" << (key.side == Side::A ? 'a' : 'b') << " para=" << key.pos.para
            << " sent=" << key.pos.sent << " docs=";
        for (std::size_t i = 0; i < docs.size(); ++i) {
            if (i > 0) out << ',';
            out << index.at(docs[i]).name << '(' << docs[i].value << ')';
        }
        out << '\n';
    }
}

int cmd_compare(Corpus& corpus, const Options& opt, std::ostream& out) {
    const auto index = corpus.snapshot();
    const Document& a = resolve(*index, opt.left);
    const Document& b = resolve(*index, opt.right);
    const ComparisonReport report = compare(*index, a.id, b.id);
    if (!opt.html_out.empty()) write_file(opt.html_out, render_html(report, *index));
    if (opt.json) {
        out << render_json(report) << '\n';
    } else {
        print_report_text(report, *index, out);
    }
    return kExitOk;
}

int cmd_scan(Corpus& corpus, const Options& opt, std::ostream& out) {
    const Band threshold = parse_band(opt.min_band);
    const auto index = corpus.snapshot();
    std::vector<DocumentId> ids;
    for (const auto& [id, doc] : index->documents()) ids.push_back(id);

    std::vector<std::string> json_reports;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            const ComparisonReport r = compare(*index, ids[i], ids[j]);
            if (std::max(r.band_a, r.band_b) < threshold) continue;
            if (opt.json) {
                json_reports.push_back(render_json(r));
                continue;
            }
            out << index->at(ids[i]).name << ' ' << index->at(ids[j]).name
                << " pct_a=" << r.pct_a.str() << " band_a=" << band_name(r.band_a)
                << " pct_b=" << r.pct_b.str() << " band_b=" << band_name(r.band_b) << '\n';
        }
    }
    if (opt.json) {
        out << '[';
        for (std::size_t i = 0; i < json_reports.size(); ++i) {
            if (i > 0) out << ',';
            out << json_reports[i];
        }
        out << "]\n";
    }
    return kExitOk;
}

int cmd_list(Corpus& corpus, const Options& opt, std::ostream& out) {
    const auto docs = corpus.list_documents();
    if (opt.json) {
        out << render_document_list_json(docs) << '\n';
        return kExitOk;
    }
    out << "id\tname\tsentences\tingested_at\n";
    for (const auto& d : docs) {
        out << d.id.value << '\t' << d.name << '\t' << d.sentence_count << '\t' << d.ingested_at
            << '\n';
    }
    return kExitOk;
}

int cmd_rm(Corpus& corpus, const Options& opt, std::ostream& out) {
    const Document& doc = resolve(*corpus.snapshot(), opt.target);
    const DocumentId id = doc.id;
    const std::string label = describe(doc);
    corpus.remove_document(id);
    if (opt.json) {
        nlohmann::ordered_json j;
        j["removed"] = id.value;
        out << j.dump() << '\n';
    } else {
        out << "removed " << label << '\n';
    }
    return kExitOk;
}

int cmd_export_xml(Corpus& corpus, const Options& opt, std::ostream& out) {
    const auto index = corpus.snapshot();
    const Document& doc = resolve(*index, opt.target);
    const std::string xml = index->export_xml(doc.id);
    if (opt.json) {
        nlohmann::ordered_json j;
        j["id"] = doc.id.value;
        j["name"] = doc.name;
        if (opt.xml_out.empty()) {
            j["xml"] = xml;
        } else {
            write_file(opt.xml_out, xml);
            j["output"] = opt.xml_out;
        }
        out << j.dump() << '\n';
    } else if (opt.xml_out.empty()) {
        out << xml;
    } else {
        write_file(opt.xml_out, xml);
    }
    return kExitOk;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::StorageFailure: return kExitStorage;
    case ErrorCode::InvalidArgument: return kExitUsage;
    default: return kExitDomain;
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"copytrace: sentence-fingerprint document similarity", "copytrace"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--index", opt.index, "Index file")->capture_default_str();
    app.add_flag("--json", opt.json, "Machine-readable output");

    auto* add = app.add_subcommand("add", "Ingest text files (name defaults to the file stem)");
    add->add_option("files", opt.files, "Plain-text UTF-8 files")->required();
    add->add_option("--name", opt.name, "Document name (single file only)");

    auto* cmp = app.add_subcommand("compare", "Compare two documents by name or id");
    cmp->add_option("a", opt.left)->required();
    cmp->add_option("b", opt.right)->required();
    cmp->add_option("--html", opt.html_out, "Write the HTML report to this file");

    auto* scan = app.add_subcommand("scan", "Compare every pair of documents");
    scan->add_option("--min-band", opt.min_band,
                     "zero, under_fifteen, fifteen_to_fifty, over_fifty or identical")
        ->capture_default_str();

    auto* list = app.add_subcommand("list", "List indexed documents");

    auto* rm = app.add_subcommand("rm", "Remove a document");
    rm->add_option("name", opt.target)->required();

    auto* xml = app.add_subcommand("export-xml", "Print a document as XML");
    xml->add_option("name", opt.target)->required();
    xml->add_option("-o,--output", opt.xml_out, "Write to this file instead of stdout");

    std::vector<const char*> argv{"copytrace"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        Corpus corpus(opt.index);
        if (add->parsed()) return cmd_add(corpus, opt, out);
        if (cmp->parsed()) return cmd_compare(corpus, opt, out);
        if (scan->parsed()) return cmd_scan(corpus, opt, out);
        if (list->parsed()) return cmd_list(corpus, opt, out);
        if (rm->parsed()) return cmd_rm(corpus, opt, out);
        if (xml->parsed()) return cmd_export_xml(corpus, opt, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.code_name() << ": " << e.what() << '\n';
        return exit_code_for(e.code());
    }
    return kExitUsage;
}

}  // namespace copytrace

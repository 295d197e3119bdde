#include "copytrace/service.hpp"

#include <charconv>

#include "httplib.h"
#include "json.hpp"

#include "copytrace/report.hpp"
#include "copytrace/similarity.hpp"

namespace copytrace {
namespace {

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, const ApiError& err) {
    res.status = err.http_status;
    res.set_content(err.to_json(), kJson);
}

void send_error(httplib::Response& res, int status, std::string code, std::string message) {
    send_error(res, ApiError{std::move(code), std::move(message), status});
}

std::string media_type(const httplib::Request& req) {
    std::string type = req.get_header_value("Content-Type");
    type = type.substr(0, type.find(';'));
    while (!type.empty() && type.back() == ' ') type.pop_back();
    for (char& c : type) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return type;
}

std::optional<DocumentId> parse_id(std::string_view text) {
    std::uint64_t value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || value == 0) return std::nullopt;
    return DocumentId{value};
}

std::string file_stem(const std::string& filename) {
    return std::filesystem::path(filename).stem().string();
}

// Runs `body`, translating domain errors into ApiError responses.
template <typename F>
void guarded(httplib::Response& res, F&& body) {
    try {
        body();
    } catch (const Error& e) {
        send_error(res, to_api_error(e));
    }
}

void handle_upload(Corpus& corpus, const ServiceOptions& options, const httplib::Request& req,
                   httplib::Response& res) {
    std::string name;
    std::string content;
    const std::string type = media_type(req);
    if (req.is_multipart_form_data()) {
        if (!req.has_file("file")) {
            return send_error(res, 400, "bad_request", "multipart upload needs a 'file' part");
        }
        const auto file = req.get_file_value("file");
        content = file.content;
        name = req.has_file("name") ? req.get_file_value("name").content : file_stem(file.filename);
    } else if (type == "text/plain") {
        content = req.body;
        name = req.get_param_value("name");
    } else {
        return send_error(res, 400, "unsupported_media_type",
                          "expected text/plain or multipart/form-data, got '" + type + "'");
    }
    if (content.size() > options.max_upload_bytes) {
        return send_error(res, 400, "payload_too_large",
                          "upload exceeds " + std::to_string(options.max_upload_bytes) + " bytes");
    }
    if (name.empty()) return send_error(res, 400, "bad_request", "document name is required");
    if (!is_valid_utf8(content)) {
        return send_error(res, 400, "invalid_encoding", "document body is not valid UTF-8");
    }

    const DocumentId id = corpus.ingest(name, content);
    const auto snapshot = corpus.snapshot();
    const Document* doc = snapshot->find(id);
    nlohmann::ordered_json body;
    body["id"] = id.value;
    body["name"] = name;
    body["sentence_count"] = doc ? doc->segmented.sentence_count() : 0;
    res.status = 201;
    res.set_content(body.dump(), kJson);
}

void handle_compare(Corpus& corpus, const httplib::Request& req, httplib::Response& res) {
    if (media_type(req) != kJson) {
        return send_error(res, 400, "unsupported_media_type", "expected application/json");
    }
    DocumentId a, b;
    try {
        const auto body = nlohmann::json::parse(req.body);
        a = DocumentId{body.at("a").get<std::uint64_t>()};
        b = DocumentId{body.at("b").get<std::uint64_t>()};
    } catch (const nlohmann::json::exception&) {
        return send_error(res, 400, "bad_request", "expected a JSON object {\"a\": id, \"b\": id}");
    }
    const auto snapshot = corpus.snapshot();
    res.set_content(render_json(compare(*snapshot, a, b)), kJson);
}

}  // namespace

std::string ApiError::to_json() const {
    nlohmann::ordered_json j;
    j["code"] = code;
    j["message"] = message;
    return j.dump();
}

ApiError to_api_error(const Error& e) {
    switch (e.code()) {
    case ErrorCode::UnknownDocument: return {"unknown_document", e.what(), 404};
    case ErrorCode::StorageFailure: return {"storage_failure", e.what(), 500};
    case ErrorCode::EmptyDocument: return {"empty_document", e.what(), 400};
    case ErrorCode::InvalidEncoding: return {"invalid_encoding", e.what(), 400};
    default: return {"bad_request", e.what(), 400};
    }
}

std::pair<std::string, int> parse_listen_address(std::string_view address) {
    const auto colon = address.rfind(':');
    int port = -1;
    if (colon != std::string_view::npos && colon > 0) {
        const auto digits = address.substr(colon + 1);
        auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
        if (ec != std::errc{} || end != digits.data() + digits.size()) port = -1;
    }
    if (port < 0 || port > 65535) {
        throw Error(ErrorCode::InvalidArgument,
                    "listen address must look like host:port, got '" + std::string(address) + "'");
    }
    return {std::string(address.substr(0, colon)), port};
}

void install_routes(httplib::Server& server, Corpus& corpus, const ServiceOptions& options) {
    // Multipart framing adds overhead on top of the document itself; the
    // handler enforces the exact document limit.
    server.set_payload_max_length(options.max_upload_bytes + 64 * 1024);

    server.Post("/api/documents", [&corpus, options](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { handle_upload(corpus, options, req, res); });
    });

    server.Get("/api/documents", [&corpus](const httplib::Request&, httplib::Response& res) {
        res.set_content(render_document_list_json(corpus.list_documents()), kJson);
    });

    server.Get(R"(/api/documents/(\d+)/xml)", [&corpus](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto id = parse_id(req.matches[1].str());
            if (!id) return send_error(res, 404, "unknown_document", "unknown document id");
            res.set_content(corpus.export_xml(*id), "application/xml");
        });
    });

    server.Delete(R"(/api/documents/(\d+))", [&corpus](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto id = parse_id(req.matches[1].str());
            if (!id || !corpus.remove_document(*id)) {
                return send_error(res, 404, "unknown_document", "unknown document id");
            }
            res.status = 204;
        });
    });

    server.Post("/api/compare", [&corpus](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { handle_compare(corpus, req, res); });
    });

    server.Get(R"(/api/compare/(\d+)/(\d+)/html)", [&corpus](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto a = parse_id(req.matches[1].str());
            const auto b = parse_id(req.matches[2].str());
            if (!a || !b) return send_error(res, 404, "unknown_document", "unknown document id");
            const auto snapshot = corpus.snapshot();
            res.set_content(render_html(compare(*snapshot, *a, *b), *snapshot),
                            "text/html; charset=utf-8");
        });
    });

    if (options.static_dir) {
        if (!server.set_mount_point("/", options.static_dir->string())) {
            throw Error(ErrorCode::InvalidArgument,
                        "static directory does not exist: " + options.static_dir->string());
        }
    }

    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "internal error";
        try {
            if (ep) std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            message = e.what();
        } catch (...) {
        }
        send_error(res, 500, "internal_error", message);
    });

    // Anything httplib rejects on its own still gets an ApiError body.
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.status == 413) {
            return send_error(res, 400, "payload_too_large", "request body too large");
        }
        if (!res.body.empty()) return;
        switch (res.status) {
        case 404: return send_error(res, 404, "not_found", "no such resource");
        case 500: return send_error(res, res.status, "internal_error", "request failed");
        default: return send_error(res, 400, "bad_request", "malformed request");
        }
    });
}

}  // namespace copytrace

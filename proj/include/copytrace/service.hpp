#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "copytrace/corpus.hpp"
#include "copytrace/error.hpp"

namespace httplib {
class Server;
}

namespace copytrace {

/// JSON error body `{"code":..., "message":...}` of every non-2xx response.
/// Codes: empty_document, invalid_encoding, unknown_document, bad_request,
/// unsupported_media_type, payload_too_large, not_found, storage_failure,
/// internal_error. Statuses: 400, 404, 500.
struct ApiError {
    std::string code;
    std::string message;
    int http_status = 500;

    std::string to_json() const;
};

ApiError to_api_error(const Error& e);

struct ServiceOptions {
    std::optional<std::filesystem::path> static_dir;
    std::size_t max_upload_bytes = 10 * 1024 * 1024;
};

/// Registers the HTTP API over `corpus` on a cpp-httplib server:
///
///   POST   /api/documents              text/plain (?name=) or multipart (file, name)
///   GET    /api/documents
///   GET    /api/documents/{id}/xml
///   DELETE /api/documents/{id}
///   POST   /api/compare                application/json {"a": id, "b": id}
///   GET    /api/compare/{a}/{b}/html
///
/// Handlers hold no state beyond the corpus. `corpus` must outlive the server.
void install_routes(httplib::Server& server, Corpus& corpus, const ServiceOptions& options = {});

/// Parses "host:port"; throws Error(InvalidArgument).
std::pair<std::string, int> parse_listen_address(std::string_view address);

}  // namespace copytrace

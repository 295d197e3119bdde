#include <fstream>
#include <set>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"

#include "copytrace/error.hpp"
#include "copytrace/report.hpp"
#include "copytrace/service.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace copytrace;
using namespace copytrace::testing;
using nlohmann::json;

namespace {

const std::set<std::string> kErrorCodes = {
    "empty_document", "invalid_encoding",     "unknown_document",  "bad_request",
    "unsupported_media_type", "payload_too_large", "not_found", "storage_failure",
    "internal_error"};

// A server on an ephemeral loopback port, backed by an index file.
class LiveServer {
public:
    explicit LiveServer(ServiceOptions options = {})
        : corpus_(dir_ / "corpus.idx") {
        install_routes(server_, corpus_, options);
        port_ = server_.bind_to_any_port("127.0.0.1");
        REQUIRE(port_ > 0);
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~LiveServer() {
        server_.stop();
        thread_.join();
    }

    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port_);
        c.set_read_timeout(10, 0);
        return c;
    }
    Corpus& corpus() { return corpus_; }
    std::filesystem::path index_path() const { return dir_ / "corpus.idx"; }

    std::uint64_t upload(const std::string& name, const std::string& text) {
        auto res = client().Post("/api/documents?name=" + name, text, "text/plain");
        REQUIRE(res);
        REQUIRE(res->status == 201);
        return json::parse(res->body)["id"].get<std::uint64_t>();
    }

private:
    TempDir dir_;
    Corpus corpus_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

// Checks status and that the body is a well-formed ApiError with `code`.
void check_error(const httplib::Result& res, int status, const std::string& code) {
    REQUIRE(res);
    CHECK(res->status == status);
    CHECK(res->get_header_value("Content-Type") == "application/json");
    const auto body = json::parse(res->body);
    CHECK(body.size() == 2);
    CHECK(body["code"] == code);
    CHECK(kErrorCodes.contains(body["code"].get<std::string>()));
    CHECK(body["message"].is_string());
}

}  // namespace

TEST_SUITE("service") {

TEST_CASE("api error mapping") {
    CHECK(to_api_error(Error(ErrorCode::UnknownDocument, "x")).http_status == 404);
    CHECK(to_api_error(Error(ErrorCode::UnknownDocument, "x")).code == "unknown_document");
    CHECK(to_api_error(Error(ErrorCode::StorageFailure, "x")).http_status == 500);
    CHECK(to_api_error(Error(ErrorCode::EmptyDocument, "x")).code == "empty_document");
    CHECK(to_api_error(Error(ErrorCode::InvalidEncoding, "x")).code == "invalid_encoding");
    CHECK(to_api_error(Error(ErrorCode::OutOfRange, "x")).code == "bad_request");
    CHECK(ApiError{"not_found", "gone", 404}.to_json() == R"({"code":"not_found","message":"gone"})");
}

TEST_CASE("listen address parsing") {
    CHECK(parse_listen_address("127.0.0.1:8080") == std::pair<std::string, int>{"127.0.0.1", 8080});
    CHECK(parse_listen_address("0.0.0.0:0") == std::pair<std::string, int>{"0.0.0.0", 0});
    CHECK(error_of([] { parse_listen_address("localhost"); }) == ErrorCode::InvalidArgument);
    CHECK(error_of([] { parse_listen_address(":80"); }) == ErrorCode::InvalidArgument);
    CHECK(error_of([] { parse_listen_address("host:99999"); }) == ErrorCode::InvalidArgument);
    CHECK(error_of([] { parse_listen_address("host:8o"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("document upload and listing") {
    LiveServer server;
    auto c = server.client();

    auto res = c.Get("/api/documents");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body == "[]");

    res = c.Post("/api/documents?name=a", "One. Two.", "text/plain; charset=utf-8");
    REQUIRE(res);
    CHECK(res->status == 201);
    CHECK(res->body == R"({"id":1,"name":"a","sentence_count":2})");
    // The index file reflects the change before the response is sent.
    CHECK(load_index(server.index_path()).find_by_name("a") != nullptr);

    res = c.Get("/api/documents");
    REQUIRE(res);
    auto list = json::parse(res->body);
    REQUIRE(list.size() == 1);
    CHECK(list[0]["name"] == "a");
    CHECK(list[0]["sentence_count"] == 2);

    SUBCASE("re-upload replaces the document") {
        res = c.Post("/api/documents?name=a", "Three. Four. Five.", "text/plain");
        REQUIRE(res);
        CHECK(res->status == 201);
        const auto body = json::parse(res->body);
        CHECK(body["name"] == "a");
        CHECK(body["sentence_count"] == 3);
        list = json::parse(c.Get("/api/documents")->body);
        REQUIRE(list.size() == 1);
        CHECK(list[0]["sentence_count"] == 3);
    }
    SUBCASE("multipart upload takes the file stem as name") {
        httplib::MultipartFormDataItems items = {
            {"file", "Alpha beta. Gamma!", "thesis-7.txt", "text/plain"}};
        res = c.Post("/api/documents", items);
        REQUIRE(res);
        CHECK(res->status == 201);
        CHECK(json::parse(res->body)["name"] == "thesis-7");
    }
    SUBCASE("multipart name part overrides the file name") {
        httplib::MultipartFormDataItems items = {
            {"file", "Alpha beta. Gamma!", "thesis-7.txt", "text/plain"},
            {"name", "Chosen name", "", ""}};
        res = c.Post("/api/documents", items);
        REQUIRE(res);
        CHECK(res->status == 201);
        CHECK(json::parse(res->body)["name"] == "Chosen name");
    }
}

TEST_CASE("upload errors") {
    ServiceOptions options;
    options.max_upload_bytes = 1024;
    LiveServer server(options);
    auto c = server.client();

    check_error(c.Post("/api/documents?name=w", "  \n\t ", "text/plain"), 400, "empty_document");
    check_error(c.Post("/api/documents?name=w", "...", "text/plain"), 400, "empty_document");
    check_error(c.Post("/api/documents?name=w", std::string("Bad \xc3\x28."), "text/plain"), 400,
                "invalid_encoding");
    check_error(c.Post("/api/documents", "Fine.", "text/plain"), 400, "bad_request");
    check_error(c.Post("/api/documents?name=w", R"({"text":"x"})", "application/json"), 400,
                "unsupported_media_type");
    httplib::MultipartFormDataItems no_file = {{"name", "x", "", ""}};
    check_error(c.Post("/api/documents", no_file), 400, "bad_request");

    // Over the document cap, handled by the route.
    check_error(c.Post("/api/documents?name=big", std::string(2000, 'a'), "text/plain"), 400,
                "payload_too_large");
    // Far over the cap, rejected by the HTTP layer before the route runs.
    check_error(c.Post("/api/documents?name=big", std::string(200 * 1024, 'a'), "text/plain"), 400,
                "payload_too_large");

    CHECK(json::parse(c.Get("/api/documents")->body).empty());
}

TEST_CASE("xml export") {
    LiveServer server;
    auto c = server.client();
    const auto id = server.upload("doc", "First <one>. Second & last.");
    auto res = c.Get("/api/documents/" + std::to_string(id) + "/xml");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Type") == "application/xml");
    CHECK(res->body == server.corpus().export_xml(DocumentId{id}));
    check_error(c.Get("/api/documents/99/xml"), 404, "unknown_document");
    check_error(c.Get("/api/documents/0/xml"), 404, "unknown_document");
}

TEST_CASE("compare endpoints") {
    LiveServer server;
    auto c = server.client();
    const auto d = server.upload("d", "Same one. Same two. Same three.");
    const auto e = server.upload("e", "Different text here.");
    const std::string body_dd = json{{"a", d}, {"b", d}}.dump();

    auto res = c.Post("/api/compare", body_dd, "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Type") == "application/json");
    const auto snap = server.corpus().snapshot();
    CHECK(res->body == render_json(compare(*snap, DocumentId{d}, DocumentId{d})));
    CHECK(json::parse(res->body)["pct_a"] == "100.0");

    res = c.Post("/api/compare", json{{"a", d}, {"b", e}}.dump(), "application/json");
    REQUIRE(res);
    CHECK(json::parse(res->body)["pct_a"] == "0.0");
    CHECK(json::parse(res->body)["band_b"] == "zero");

    res = c.Get("/api/compare/" + std::to_string(d) + "/" + std::to_string(e) + "/html");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Type") == "text/html; charset=utf-8");
    CHECK(res->body == render_html(compare(*snap, DocumentId{d}, DocumentId{e}), *snap));

    check_error(c.Post("/api/compare", json{{"a", d}, {"b", 42}}.dump(), "application/json"), 404,
                "unknown_document");
    check_error(c.Get("/api/compare/42/1/html"), 404, "unknown_document");
    check_error(c.Post("/api/compare", "{\"a\": 1", "application/json"), 400, "bad_request");
    check_error(c.Post("/api/compare", R"({"a":"x","b":1})", "application/json"), 400, "bad_request");
    check_error(c.Post("/api/compare", body_dd, "text/plain"), 400, "unsupported_media_type");
}

TEST_CASE("delete") {
    LiveServer server;
    auto c = server.client();
    const auto d = server.upload("d", "Keep me. Or not.");
    const auto e = server.upload("e", "Other.");
    auto res = c.Delete("/api/documents/" + std::to_string(d));
    REQUIRE(res);
    CHECK(res->status == 204);
    CHECK(load_index(server.index_path()).find(DocumentId{d}) == nullptr);
    check_error(c.Delete("/api/documents/" + std::to_string(d)), 404, "unknown_document");
    check_error(c.Post("/api/compare", json{{"a", d}, {"b", e}}.dump(), "application/json"), 404,
                "unknown_document");
    check_error(c.Get("/api/compare/" + std::to_string(e) + "/" + std::to_string(d) + "/html"),
                404, "unknown_document");
}

TEST_CASE("unknown routes get an error body") {
    LiveServer server;
    auto c = server.client();
    check_error(c.Get("/api/nothing"), 404, "not_found");
    check_error(c.Get("/api/documents/abc/xml"), 404, "not_found");
}

TEST_CASE("static files are served when configured") {
    TempDir site;
    {
        std::ofstream out(site / "index.html");
        out << "<!DOCTYPE html><title>ui</title>";
    }
    ServiceOptions options;
    options.static_dir = site.path();
    LiveServer server(options);
    auto res = server.client().Get("/index.html");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body == "<!DOCTYPE html><title>ui</title>");

    httplib::Server other;
    TempDir scratch;
    Corpus corpus(scratch / "x.idx");
    ServiceOptions missing;
    missing.static_dir = scratch / "no-such-dir";
    CHECK(error_of([&] { install_routes(other, corpus, missing); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("concurrent uploads and comparisons") {
    LiveServer server;
    const auto base = server.upload("base", "Shared sentence. Base only.");
    std::vector<std::thread> workers;
    std::atomic<int> failures{0};
    for (int w = 0; w < 6; ++w) {
        workers.emplace_back([&, w] {
            auto c = server.client();
            for (int i = 0; i < 10; ++i) {
                const std::string name = "w" + std::to_string(w) + "-" + std::to_string(i);
                auto up = c.Post("/api/documents?name=" + name,
                                 "Shared sentence. Unique " + name + ".", "text/plain");
                if (!up || up->status != 201) {
                    ++failures;
                    continue;
                }
                const auto id = json::parse(up->body)["id"].get<std::uint64_t>();
                auto cmp = c.Post("/api/compare", json{{"a", id}, {"b", base}}.dump(),
                                  "application/json");
                if (!cmp || cmp->status != 200 || json::parse(cmp->body)["pct_a"] != "50.0") {
                    ++failures;
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    CHECK(failures == 0);
    CHECK(server.corpus().list_documents().size() == 61);
    CHECK(load_index(server.index_path()) == *server.corpus().snapshot());
}

}  // TEST_SUITE

#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "httplib.h"

#include "copytrace/cli.hpp"
#include "copytrace/corpus.hpp"
#include "copytrace/error.hpp"
#include "copytrace/service.hpp"

namespace {

httplib::Server* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    std::string listen = "127.0.0.1:8080";
    std::string index = "./copytrace.idx";
    std::string static_dir;
    std::size_t max_upload_mib = 10;

    CLI::App app{"copytrace HTTP service", "copytrace-server"};
    app.add_option("--listen", listen, "host:port to bind")->capture_default_str();
    app.add_option("--index", index, "Index file")->capture_default_str();
    app.add_option("--static", static_dir, "Directory served at /");
    app.add_option("--max-upload-mib", max_upload_mib, "Upload size cap")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    try {
        const auto [host, port] = copytrace::parse_listen_address(listen);
        copytrace::Corpus corpus(index);
        copytrace::ServiceOptions options;
        if (!static_dir.empty()) options.static_dir = static_dir;
        options.max_upload_bytes = max_upload_mib * 1024 * 1024;

        httplib::Server server;
        copytrace::install_routes(server, corpus, options);
        g_server = &server;
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);

        std::cerr << "copytrace-server listening on " << host << ':' << port << " (index "
                  << index << ")\n";
        if (!server.listen(host, port)) {
            std::cerr << "error: cannot bind " << listen << '\n';
            return copytrace::kExitUsage;
        }
    } catch (const copytrace::Error& e) {
        std::cerr << "error: " << e.code_name() << ": " << e.what() << '\n';
        return e.code() == copytrace::ErrorCode::StorageFailure ? copytrace::kExitStorage
                                                                : copytrace::kExitUsage;
    }
    return copytrace::kExitOk;
}

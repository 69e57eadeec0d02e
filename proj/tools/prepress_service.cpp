#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "prepress/service_http.hpp"

int main(int argc, char** argv) {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::size_t maxUploadMb = 16;
    int grid = 9;
    std::string staticDir;

    CLI::App app{"Prepress studio service", "prepress-service"};
    app.add_option("--host", host, "Address to bind")->capture_default_str();
    app.add_option("--port", port, "Port to listen on")->check(CLI::Range(0, 65535))->capture_default_str();
    app.add_option("--max-upload-mb", maxUploadMb, "Upload size cap in MiB")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--grid", grid, "Characterization grid for CGATS profile uploads")
        ->check(CLI::Range(2, 65))
        ->capture_default_str();
    app.add_option("--static", staticDir, "Directory served at / (for the browser UI)");
    CLI11_PARSE(app, argc, argv);

    prepress::service::ServiceConfig cfg;
    cfg.maxUploadBytes = maxUploadMb << 20;
    cfg.defaultGrid = grid;
    const prepress::service::Service service(cfg);

    httplib::Server server;
    prepress::service::bind_routes(server, service);
    if (!staticDir.empty() && !server.set_mount_point("/", staticDir)) {
        std::cerr << "cannot serve static files from '" << staticDir << "'\n";
        return 1;
    }
    const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) {
        std::cerr << "cannot bind " << host << ":" << port << "\n";
        return 1;
    }
    std::cout << "listening on http://" << host << ":" << bound << std::endl;
    return server.listen_after_bind() ? 0 : 1;
}

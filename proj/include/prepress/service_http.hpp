#pragma once

// Binds prepress::service::Service to a cpp-httplib server. Uploads may be a
// raw body or a multipart form with a "file" part.

#include <string>

#include <httplib.h>

#include "prepress/service.hpp"

namespace prepress::service {

inline HttpRequest from_httplib(const httplib::Request& req) {
    HttpRequest out;
    out.method = req.method;
    out.path = req.path;
    for (const auto& [k, v] : req.params) out.query.emplace(k, v);  // first value wins
    if (req.is_multipart_form_data() && req.has_file("file"))
        out.body = req.get_file_value("file").content;
    else
        out.body = req.body;
    return out;
}

inline void bind_routes(httplib::Server& server, const Service& service) {
    // Requests a little over the cap still reach the handler so the client
    // gets the JSON 413; far larger bodies are refused by httplib itself.
    server.set_payload_max_length(service.config().maxUploadBytes * 2 + (1u << 20));
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});

    const auto dispatch = [&service](const httplib::Request& req, httplib::Response& res) {
        const auto out = service.handle(from_httplib(req));
        res.status = out.status;
        res.set_content(out.body, out.contentType);
    };
    server.Get("/api/.*", dispatch);
    server.Post("/api/.*", dispatch);
    server.Options("/api/.*", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
}

}  // namespace prepress::service

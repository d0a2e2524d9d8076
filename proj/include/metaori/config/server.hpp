#pragma once

#include <string>

#include "service.hpp"

// after Eigen: <resolv.h> defines _res
#include <httplib.h>

namespace metaori::config {

// Routes of the local service on an httplib server.
inline void add_routes(httplib::Server& srv)
{
    auto route = [](const httplib::Request& req, httplib::Response& res) {
        Response r = handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_content(r.body.dump(), "application/json");
    };
    srv.Get("/api/presets", route);
    srv.Get("/api/schema", route);
    srv.Post("/api/mesh", route);
    srv.Post("/api/curves", route);
    srv.Post("/api/sequence", route);
    srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
}

// Blocks; loopback only.
inline void serve(int port, const std::string& host = "127.0.0.1")
{
    httplib::Server srv;
    add_routes(srv);
    if (!srv.listen(host, port)) fail(ErrorKind::IoError, "cannot listen on " + host + ":" + std::to_string(port));
}

} // namespace metaori::config

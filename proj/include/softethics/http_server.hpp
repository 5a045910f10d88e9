#pragma once

// Binds a Service to cpp-httplib. Kept apart from service.hpp so the core
// library does not pull in the HTTP stack.

#include <string>

#include <httplib.h>

#include "softethics/service.hpp"

namespace softethics {

inline void mount(httplib::Server& server, Service& service) {
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    auto out = service.handle(req.method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  server.Get(".*", forward);
  server.Post(".*", forward);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
}

/// Blocks until the server stops.
inline bool serve(Service& service) {
  httplib::Server server;
  mount(server, service);
  return server.listen(service.config().host, service.config().port);
}

}  // namespace softethics

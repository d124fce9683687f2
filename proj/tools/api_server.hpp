#pragma once

#include <map>
#include <string>

#include "mlad/service.hpp"

// After Eigen: <resolv.h> defines a _res macro that collides with Eigen internals.
#include <httplib.h>

namespace mlad {

/// Routes GET /api/... on `server` to handle_api. The store must outlive the server.
inline void mount_api(httplib::Server& server, const ReportStore& store) {
  server.Get(R"(/api(/.*)?)", [&store](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    const auto r = handle_api(store, req.path, query);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  });
}

}  // namespace mlad

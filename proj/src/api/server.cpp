// Copyright 2026 The ehrcore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <httplib.h>

#include "ehr/api/platform.hpp"
#include "ehr/core/error.hpp"

namespace ehr::api {

struct HttpServer::Impl {
  Platform& platform;
  httplib::Server server;

  explicit Impl(Platform& p) : platform(p) {}

  void serve(const httplib::Request& in, httplib::Response& out) {
    gateway::HttpRequest req;
    req.method = in.method;
    req.path = in.path;
    for (const auto& [k, v] : in.params) req.query.emplace(k, v);
    for (const auto& [k, v] : in.headers) req.headers.emplace(k, v);
    req.remote_ip = in.remote_addr;
    req.body = in.body;
    // Multipart uploads are flattened to the raw bytes of the "image" part.
    if (in.is_multipart_form_data()) {
      if (in.has_file("image")) {
        const auto file = in.get_file_value("image");
        req.body = file.content;
        if (!file.filename.empty()) req.headers["X-Upload-Filename"] = file.filename;
      } else {
        req.body.clear();
      }
    }

    gateway::HttpResponse res;
    try {
      res = platform.handle(req);
    } catch (const Error& e) {
      res = gateway::HttpResponse::error(e);
    } catch (const std::exception& e) {
      res = gateway::HttpResponse::error(ErrorKind::internal, e.what());
    }
    out.status = res.status;
    std::string content_type = "application/json";
    for (const auto& [k, v] : res.headers) {
      if (httplib::detail::compare_case_ignore(k, "Content-Type")) {
        content_type = v;
      } else {
        out.set_header(k, v);
      }
    }
    out.set_content(res.body, content_type);
  }
};

HttpServer::HttpServer(Platform& platform) : impl_(std::make_unique<Impl>(platform)) {
  auto handler = [this](const httplib::Request& in, httplib::Response& out) {
    impl_->serve(in, out);
  };
  auto& s = impl_->server;
  s.Get(".*", handler);
  s.Post(".*", handler);
  s.Put(".*", handler);
  s.Delete(".*", handler);
  s.Patch(".*", handler);
  s.set_keep_alive_max_count(100000);
  // Keep-alive clients each pin a worker, so size the pool for the load
  // harness's peak concurrency.
  s.new_task_queue = [] { return new httplib::ThreadPool(128); };
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = impl_->server.bind_to_any_port(host);
    if (p < 0) throw Error(ErrorKind::internal, "cannot bind " + host);
    return p;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorKind::internal, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace ehr::api

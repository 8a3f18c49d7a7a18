#include "anvil/http_server.hpp"

#include "httplib.h"

namespace anvil {

struct HttpServer::Impl {
  httplib::Server server;
};

namespace {

void send(httplib::Response& res, const Reply& reply) {
  res.status = reply.status;
  res.set_content(reply.body, "application/json; charset=utf-8");
}

}  // namespace

HttpServer::HttpServer(const QueryService& service) : impl_(std::make_unique<Impl>()) {
  auto& server = impl_->server;
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Get("/health", [&service](const httplib::Request&, httplib::Response& res) {
    send(res, service.health());
  });
  server.Post("/query", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.query(req.body));
  });
  server.Get(R"(/captions/(.+))", [&service](const httplib::Request& req, httplib::Response& res) {
    send(res, service.caption(req.matches[1].str()));
  });
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace anvil

#pragma once

#include <memory>
#include <string>

#include "anvil/service.hpp"

namespace anvil {

// HTTP routes over a QueryService:
//   GET /health, POST /query, GET /captions/{id}
// Every response carries permissive CORS headers; OPTIONS preflights are
// answered with 204.
class HttpServer {
 public:
  explicit HttpServer(const QueryService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds without serving; port 0 picks a free port. Returns the bound port
  // or -1.
  int bind(const std::string& host, int port);
  // Serves until stop(); returns false if the socket failed.
  bool listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace anvil

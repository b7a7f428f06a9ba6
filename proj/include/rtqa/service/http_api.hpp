#pragma once

#include <memory>
#include <string>

#include "rtqa/service/session_store.hpp"

namespace httplib {
class Server;
}

namespace rtqa::service {

// JSON error body and HTTP status for an exception raised by the store.
struct HttpError {
  int status = 500;
  json body;
};

HttpError http_error_for(const std::exception& e);

// Routes:
//   POST /sessions                   201, session state
//   GET  /sessions/{id}              session state
//   POST /sessions/{id}/answers      updated verdict
//   POST /sessions/{id}/finalize     report.json
//   GET  /sessions/{id}/trace        fired trace
//   GET  /rulepacks                  repository listing
class HttpApi {
 public:
  explicit HttpApi(std::shared_ptr<SessionStore> store);
  ~HttpApi();

  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  // Binds and serves until stop(). Returns false when binding fails.
  bool listen(const std::string& host, int port);

  // Binds an ephemeral port; returns it or -1. Serve with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();

  void stop();
  bool is_running() const;
  void wait_until_ready() const;

 private:
  std::shared_ptr<SessionStore> store_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace rtqa::service

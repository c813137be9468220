#pragma once

#include <memory>
#include <string>

#include "swarmplay/config.hpp"
#include "swarmplay/error.hpp"

namespace httplib {
class Server;
}

namespace swarmplay::service {

class SessionManager;

// HTTP status used for a service error.
int http_status(ErrorCode code);

// JSON-over-HTTP front end for SessionManager.
//
//   POST /sessions                     create; body is a session config object
//   GET  /sessions/{id}                board, turn, status, drones
//   POST /sessions/{id}/moves          {"cell": 1..9}
//   POST /sessions/{id}/images         PGM/PPM camera frame
//   GET  /sessions/{id}/telemetry      NDJSON, ?from=N&follow=0|1
//
// Errors come back as {"error": <code name>, "detail": <text>}.
class HttpServer {
 public:
  explicit HttpServer(ServiceConfig cfg);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds to cfg.host:cfg.port (port 0 picks a free one); returns the port.
  int bind();
  // Blocks until stop().
  void listen();
  void stop();

  SessionManager& sessions() { return *sessions_; }

 private:
  void install_routes();

  ServiceConfig cfg_;
  std::unique_ptr<SessionManager> sessions_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace swarmplay::service

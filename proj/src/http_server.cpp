#include "swarmplay/http_server.hpp"

#include <chrono>

#include "httplib.h"
#include "json.hpp"

#include "swarmplay/session.hpp"

namespace swarmplay::service {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSession: return 404;
    case ErrorCode::OccupiedCell:
    case ErrorCode::OutOfTurn:
    case ErrorCode::GameOver:
    case ErrorCode::CellOccupied:
    case ErrorCode::FlightInProgress: return 409;
    case ErrorCode::AmbiguousCell:
    case ErrorCode::NoChange:
    case ErrorCode::MultipleChanges:
    case ErrorCode::NonHumanChange:
    case ErrorCode::GridOutOfBounds:
    case ErrorCode::InvalidImage: return 422;
    case ErrorCode::PolicyLoadFailure:
    case ErrorCode::FleetExhausted:
    case ErrorCode::ConvergenceTimeout: return 500;
    default: return 400;
  }
}

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump() + "\n", kJson);
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& detail) {
  send_json(res, http_status(code), json{{"error", error_name(code)}, {"detail", detail}});
}

// Runs a handler, turning service errors into error bodies.
template <class F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    send_error(res, e.code(), e.detail());
  } catch (const json::exception& e) {
    send_error(res, ErrorCode::InvalidConfig, e.what());
  }
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("body is not JSON: ") + e.what());
  }
}

}  // namespace

HttpServer::HttpServer(ServiceConfig cfg)
    : cfg_(std::move(cfg)),
      sessions_(std::make_unique<SessionManager>(cfg_)),
      server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpServer::~HttpServer() {
  sessions_->shutdown();
  server_->stop();
}

void HttpServer::install_routes() {
  auto& srv = *server_;

  srv.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto cfg = sessions_->session_config_from_json(parse_body(req));
      auto session = sessions_->create(cfg);
      send_json(res, 201, session->view());
    });
  });

  srv.Get(R"(/sessions/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, sessions_->get(req.matches[1])->view()); });
  });

  srv.Post(R"(/sessions/([0-9a-f]+)/moves)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto session = sessions_->get(req.matches[1]);
      const json body = parse_body(req);
      const auto it = body.find("cell");
      if (it == body.end() || !it->is_number_integer()) {
        throw Error(ErrorCode::InvalidCell, "body needs an integer 'cell'");
      }
      send_json(res, 200, session->submit_move(it->get<int>()));
    });
  });

  srv.Post(R"(/sessions/([0-9a-f]+)/images)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto session = sessions_->get(req.matches[1]);
      send_json(res, 200, session->submit_image(vision::decode_pnm(req.body)));
    });
  });

  srv.Get(R"(/sessions/([0-9a-f]+)/telemetry)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto session = sessions_->get(req.matches[1]);
      std::size_t from = 0;
      if (req.has_param("from")) {
        try {
          from = std::stoul(req.get_param_value("from"));
        } catch (const std::exception&) {
          throw Error(ErrorCode::InvalidConfig, "'from' must be a non-negative integer");
        }
      }
      const bool follow = !req.has_param("follow") || req.get_param_value("follow") != "0";
      auto cursor = std::make_shared<std::size_t>(from);
      res.set_chunked_content_provider(
          "application/x-ndjson", [session, cursor, follow](std::size_t, httplib::DataSink& sink) {
            session->advance();
            auto log = session->telemetry();
            const auto batch = log->read_from(*cursor, std::chrono::milliseconds(follow ? 10 : 0));
            std::string chunk;
            for (const auto& r : batch.records) {
              chunk += r;
              chunk += '\n';
            }
            *cursor += batch.records.size();
            if (!chunk.empty() && !sink.write(chunk.data(), chunk.size())) return false;
            if (!follow || (batch.finished && *cursor >= log->size())) sink.done();
            return true;
          });
    });
  });

  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      const ErrorCode code = res.status == 404 ? ErrorCode::UnknownSession : ErrorCode::InvalidConfig;
      send_json(res, res.status, json{{"error", error_name(code)}, {"detail", "no such route"}});
    }
  });
}

int HttpServer::bind() {
  if (cfg_.port == 0) {
    const int port = server_->bind_to_any_port(cfg_.host);
    if (port < 0) throw Error(ErrorCode::Io, "cannot bind " + cfg_.host);
    cfg_.port = port;
    return port;
  }
  if (!server_->bind_to_port(cfg_.host, cfg_.port)) {
    throw Error(ErrorCode::Io, "cannot bind " + cfg_.host + ":" + std::to_string(cfg_.port));
  }
  return cfg_.port;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() {
  sessions_->shutdown();
  server_->stop();
}

}  // namespace swarmplay::service

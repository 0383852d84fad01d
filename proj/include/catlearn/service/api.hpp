#pragma once

#include <map>
#include <memory>
#include <string>

#include "catlearn/service/session.hpp"

namespace catlearn::service {

struct ApiRequest {
    std::string method; ///< "GET", "POST"
    std::string path;   ///< without the query string
    std::map<std::string, std::string> query;
    std::string body;
};

struct ApiResponse {
    int status = 200;
    std::string contentType = "application/json";
    std::string body;
};

/// Routes requests to the session manager. Transport-free, so tests can
/// drive it directly.
///
///   POST /sessions                      create, 201 {id}
///   GET  /sessions/{id}                 inspect
///   POST /sessions/{id}/present         {features: {featureId: [values]}} -> choice
///   POST /sessions/{id}/reward          {reward: "positive"|"neutral"|"negative"}
///   GET  /sessions/{id}/events?since=N&waitMs=T   one JSON event per line
///   POST /sessions/{id}/save            {path?} -> {path} or {document}
///   POST /sessions/{id}/load            {document} or {path}
///
/// Errors carry {code, message} with status 400, 404, 405 or 409.
class Api {
public:
    explicit Api(SessionManager& sessions) : sessions_(sessions) {}

    ApiResponse handle(const ApiRequest& request);

    /// Upper bound on the events long-poll.
    static constexpr int kMaxWaitMs = 30000;

private:
    ApiResponse route(const ApiRequest& request);

    SessionManager& sessions_;
};

/// Serves an Api over HTTP on a thread pool.
class HttpServer {
public:
    explicit HttpServer(Api& api);
    ~HttpServer();

    /// Binds the port (0 picks a free one) and returns it, or -1 on failure.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    bool listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace catlearn::service

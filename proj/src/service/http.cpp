#include <httplib.h>

#include "catlearn/service/api.hpp"

namespace catlearn::service {

struct HttpServer::Impl {
    httplib::Server server;
};

HttpServer::HttpServer(Api& api) : impl_(std::make_unique<Impl>()) {
    auto forward = [&api](const httplib::Request& req, httplib::Response& res) {
        ApiRequest request{req.method, req.path, {}, req.body};
        for (const auto& [key, value] : req.params) request.query.emplace(key, value);
        const auto response = api.handle(request);
        res.status = response.status;
        res.set_content(response.body, response.contentType);
    };
    impl_->server.Get(".*", forward);
    impl_->server.Post(".*", forward);
    impl_->server.Put(".*", forward);
    impl_->server.Delete(".*", forward);
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

} // namespace catlearn::service

#include "catlearn/service/api.hpp"

#include <charconv>
#include <string_view>
#include <vector>

namespace catlearn::service {

using nlohmann::json;

namespace {

std::vector<std::string> segments(std::string_view path) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= path.size()) {
        const auto end = path.find('/', start);
        const auto part = path.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        if (!part.empty()) out.emplace_back(part);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

ApiResponse reply(int status, const json& body) {
    return {status, "application/json", body.dump()};
}

ApiResponse error(int status, const std::string& code, const std::string& message) {
    return reply(status, {{"code", code}, {"message", message}});
}

json parseBody(const std::string& body) {
    if (body.empty()) return json::object();
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw badRequest("invalid_json", "body is not valid JSON (byte " + std::to_string(e.byte) + ")");
    }
}

std::uint64_t queryNumber(const ApiRequest& r, const std::string& key, std::uint64_t fallback) {
    const auto it = r.query.find(key);
    if (it == r.query.end()) return fallback;
    std::uint64_t value = 0;
    const auto& s = it->second;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || end != s.data() + s.size()) {
        throw badRequest("invalid_request", key + " must be a nonnegative integer");
    }
    return value;
}

void requireMethod(const ApiRequest& r, std::string_view method) {
    if (r.method != method) {
        throw ServiceError(405, "method_not_allowed", r.method + " is not supported on " + r.path);
    }
}

} // namespace

ApiResponse Api::handle(const ApiRequest& request) {
    try {
        return route(request);
    } catch (const ServiceError& e) {
        return error(e.status(), e.code(), e.what());
    } catch (const std::exception& e) {
        return error(500, "internal", e.what());
    }
}

ApiResponse Api::route(const ApiRequest& r) {
    const auto parts = segments(r.path);
    if (parts.empty() || parts[0] != "sessions" || parts.size() > 3) throw notFound("no route " + r.path);
    if (parts.size() == 1) {
        requireMethod(r, "POST");
        return reply(201, {{"id", sessions_.create(parseBody(r.body))}});
    }
    const auto& id = parts[1];
    if (parts.size() == 2) {
        requireMethod(r, "GET");
        return reply(200, sessions_.get(id)->inspect());
    }
    const auto& action = parts[2];
    if (action == "present") {
        requireMethod(r, "POST");
        return reply(200, sessions_.get(id)->present(parseBody(r.body)));
    }
    if (action == "reward") {
        requireMethod(r, "POST");
        return reply(200, sessions_.get(id)->reward(parseBody(r.body)));
    }
    if (action == "events") {
        requireMethod(r, "GET");
        const auto since = queryNumber(r, "since", 0);
        const auto wait = std::min<std::uint64_t>(queryNumber(r, "waitMs", 0), kMaxWaitMs);
        const auto lines = sessions_.get(id)->eventsSince(since, std::chrono::milliseconds(wait));
        std::string body;
        for (const auto& line : lines) body += line + '\n';
        return {200, "application/x-ndjson", std::move(body)};
    }
    if (action == "save") {
        requireMethod(r, "POST");
        return reply(200, sessions_.save(id, parseBody(r.body)));
    }
    if (action == "load") {
        requireMethod(r, "POST");
        return reply(200, sessions_.load(id, parseBody(r.body)));
    }
    throw notFound("no route " + r.path);
}

} // namespace catlearn::service

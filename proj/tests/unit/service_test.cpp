#include <gtest/gtest.h>

#include <httplib.h>

#include <filesystem>
#include <sstream>
#include <thread>

#include "catlearn/knowledge/document.hpp"
#include "catlearn/scenarios/example.hpp"
#include "catlearn/service/api.hpp"

namespace kn = catlearn::knowledge;
namespace sc = catlearn::scenarios;
namespace sv = catlearn::service;
using nlohmann::json;

namespace {

class ApiTest : public ::testing::Test {
protected:
    sv::SessionManager sessions{std::filesystem::temp_directory_path()};
    sv::Api api{sessions};

    sv::ApiResponse call(const std::string& method, const std::string& path, const json& body = nullptr,
                         std::map<std::string, std::string> query = {}) {
        return api.handle({method, path, std::move(query), body.is_null() ? "" : body.dump()});
    }

    json ok(const std::string& method, const std::string& path, const json& body = nullptr) {
        const auto r = call(method, path, body);
        EXPECT_LT(r.status, 300) << method << ' ' << path << ": " << r.body;
        return json::parse(r.body);
    }

    std::string create(const json& body = json::object()) {
        return ok("POST", "/sessions", body)["id"].get<std::string>();
    }

    void expectError(const sv::ApiResponse& r, int status, const std::string& code) {
        EXPECT_EQ(r.status, status) << r.body;
        const auto body = json::parse(r.body);
        EXPECT_EQ(body["code"], code);
        EXPECT_TRUE(body["message"].is_string());
    }
};

json unit(std::initializer_list<double> v) { return json(std::vector<double>(v)); }

json apple(const char* color) {
    json c = unit({0, 0, 0, 0});
    if (std::string(color) == "red") c[0] = 1;
    if (std::string(color) == "green") c[1] = 1;
    if (std::string(color) == "brown") c[3] = 1;
    return {{"features", {{"color", c}, {"form", unit({0, 1})}}}};
}

} // namespace

TEST_F(ApiTest, FreshSessionHasNoCategories) {
    const auto id = create();
    const auto state = ok("GET", "/sessions/" + id);
    EXPECT_EQ(state["id"], id);
    EXPECT_EQ(state["scenario"], "example");
    EXPECT_TRUE(state["graph"]["categories"].empty());
    EXPECT_TRUE(state["history"].empty());
    EXPECT_TRUE(state["pending"].is_null());
    EXPECT_DOUBLE_EQ(state["weights"]["experience"].get<double>(), 1.0);
}

TEST_F(ApiTest, CreateValidatesParametersAndSchema) {
    expectError(call("POST", "/sessions", {{"parameters", {{"rhoRa", 2}}}}), 400, "invalid_parameters");
    expectError(call("POST", "/sessions", {{"featureSchema", json::array()}, {"actions", {"a"}}}), 400,
                "invalid_schema");
    expectError(call("POST", "/sessions", {{"featureSchema", {{{"id", "f"}, {"characteristics", {"x", "y"}}}}}}),
                400, "invalid_schema");
    expectError(call("POST", "/sessions", {{"scenario", "chess"}}), 400, "invalid_request");
    expectError(api.handle({"POST", "/sessions", {}, "{oops"}), 400, "invalid_json");
    EXPECT_NE(create(), create());
    EXPECT_EQ(sessions.size(), 2u);
}

TEST_F(ApiTest, CustomSchemaSession) {
    const auto id = create({{"featureSchema", {{{"id", "size"}, {"characteristics", {"small", "large"}}}}},
                            {"actions", {"keep", "drop"}}, {"seed", 4}});
    const auto r = ok("POST", "/sessions/" + id + "/present", {{"features", {{"size", {3, 1}}}}});
    EXPECT_TRUE(r["isNew"].get<bool>());
    EXPECT_EQ(r["percept"]["size"], json({0.75, 0.25}));
    EXPECT_EQ(ok("GET", "/sessions/" + id)["scenario"], "none");
}

TEST_F(ApiTest, PresentThenRewardAlternate) {
    const auto id = create();
    const auto first = ok("POST", "/sessions/" + id + "/present", apple("red"));
    EXPECT_TRUE(first["isNew"].get<bool>());
    EXPECT_TRUE(first["chosenAction"].is_string());
    expectError(call("POST", "/sessions/" + id + "/present", apple("red")), 409, "conflict");
    EXPECT_FALSE(ok("GET", "/sessions/" + id)["pending"].is_null());

    const auto r = ok("POST", "/sessions/" + id + "/reward", {{"reward", "neutral"}});
    EXPECT_EQ(r["outcome"], "updated");
    EXPECT_TRUE(r["merges"].empty());
    EXPECT_TRUE(r["splits"].empty());
    expectError(call("POST", "/sessions/" + id + "/reward", {{"reward", "neutral"}}), 409, "conflict");

    const auto again = ok("POST", "/sessions/" + id + "/present", apple("red"));
    EXPECT_FALSE(again["isNew"].get<bool>());
    EXPECT_EQ(again["categoryId"], first["categoryId"]);
}

TEST_F(ApiTest, ContradictoryRewardSplits) {
    const auto id = create({{"parameters", {{"thetaMc", 2.5}}}});
    const auto first = ok("POST", "/sessions/" + id + "/present", apple("red"));
    const auto action = first["chosenAction"];
    ok("POST", "/sessions/" + id + "/reward", {{"reward", "positive"}});
    // The same category picks its positively rewarded action again.
    const auto second = ok("POST", "/sessions/" + id + "/present", apple("red"));
    ASSERT_EQ(second["chosenAction"], action);
    const auto r = ok("POST", "/sessions/" + id + "/reward", {{"reward", "negative"}});
    EXPECT_EQ(r["outcome"], "split");
    ASSERT_EQ(r["splits"].size(), 1u);
    EXPECT_EQ(r["splits"][0]["from"], first["categoryId"]);
}

TEST_F(ApiTest, ValidationErrors) {
    const auto id = create();
    expectError(call("POST", "/sessions/" + id + "/present", {{"features", {{"color", {1, 0, 0, 0}}}}}), 400,
                "invalid_percept");
    expectError(call("POST", "/sessions/" + id + "/present",
                     {{"features", {{"color", {0, 0, 0, 0}}, {"form", {1, 0}}}}}),
                400, "invalid_percept");
    expectError(call("POST", "/sessions/" + id + "/present", {{"features", "red"}}), 400, "invalid_percept");
    expectError(call("POST", "/sessions/" + id + "/present", json::object()), 400, "invalid_percept");
    expectError(call("POST", "/sessions/" + id + "/present", {{"object", "banana"}}), 400, "invalid_percept");
    ok("POST", "/sessions/" + id + "/present", apple("green"));
    expectError(call("POST", "/sessions/" + id + "/reward", {{"reward", "great"}}), 400, "invalid_reward");
    expectError(call("POST", "/sessions/" + id + "/reward", json::object()), 400, "invalid_reward");
    // A rejected reward leaves the interaction pending.
    ok("POST", "/sessions/" + id + "/reward", {{"reward", "positive"}});
}

TEST_F(ApiTest, UnknownSessionsAndRoutes) {
    expectError(call("GET", "/sessions/s99"), 404, "not_found");
    expectError(call("POST", "/sessions/s99/present", apple("red")), 404, "not_found");
    expectError(call("GET", "/nothing"), 404, "not_found");
    const auto id = create();
    expectError(call("POST", "/sessions/" + id + "/teleport"), 404, "not_found");
    expectError(call("GET", "/sessions/" + id + "/present"), 405, "method_not_allowed");
    expectError(call("GET", "/sessions/" + id + "/events", nullptr, {{"since", "-1"}}), 400, "invalid_request");
}

TEST_F(ApiTest, ScenarioBindingComposesPercepts) {
    const auto id = create({{"scenario", "example"}});
    const auto r = ok("POST", "/sessions/" + id + "/present", {{"object", "brownApple"}});
    EXPECT_EQ(r["perceptId"], "brownApple");
    EXPECT_EQ(r["percept"]["color"], json({0.0, 0.0, 0.0, 1.0}));
    ok("POST", "/sessions/" + id + "/reward", {{"reward", "neutral"}});
    const auto noisy = ok("POST", "/sessions/" + id + "/present", {{"object", "redBlock"}, {"noiseSeed", 3}});
    EXPECT_EQ(noisy["percept"], kn::toJson(sc::examplePercept(sc::ObjectKind::RedBlock, sc::Variant::Noisy, 3)));

    const auto w = create({{"scenario", "wcst"}});
    const auto card = ok("POST", "/sessions/" + w + "/present", {{"card", "3-yellow-cross"}});
    EXPECT_EQ(card["percept"]["number"], json({0.0, 0.0, 1.0, 0.0}));
    EXPECT_EQ(card["percept"]["form"], json({0.0, 0.0, 1.0, 0.0}));
}

TEST_F(ApiTest, HistoryAndEventsTrackInteractions) {
    const auto id = create();
    for (int i = 0; i < 4; ++i) {
        ok("POST", "/sessions/" + id + "/present", apple(i % 2 ? "red" : "green"));
        ok("POST", "/sessions/" + id + "/reward", {{"reward", i % 2 ? "positive" : "negative"}});
    }
    const auto state = ok("GET", "/sessions/" + id);
    ASSERT_EQ(state["history"].size(), 4u);
    EXPECT_EQ(state["history"][3]["step"], 4);

    const auto all = call("GET", "/sessions/" + id + "/events");
    EXPECT_EQ(all.contentType, "application/x-ndjson");
    EXPECT_EQ(std::count(all.body.begin(), all.body.end(), '\n'), 4);
    const auto tail = call("GET", "/sessions/" + id + "/events", nullptr, {{"since", "3"}});
    EXPECT_EQ(json::parse(tail.body)["step"], 4);
    EXPECT_TRUE(call("GET", "/sessions/" + id + "/events", nullptr, {{"since", "4"}}).body.empty());

    // The inspect snapshot is a valid graph document.
    const auto g = kn::deserializeGraph(state["graph"]);
    EXPECT_EQ(kn::serializeGraph(g), state["graph"]);
    const auto& matrix = state["similarityMatrix"];
    EXPECT_EQ(matrix["values"].size(), g.categories().size());
}

TEST_F(ApiTest, LongPollWakesOnReward) {
    const auto id = create();
    ok("POST", "/sessions/" + id + "/present", apple("red"));
    std::thread rewarder([&] {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        ok("POST", "/sessions/" + id + "/reward", {{"reward", "positive"}});
    });
    const auto start = std::chrono::steady_clock::now();
    const auto r = call("GET", "/sessions/" + id + "/events", nullptr, {{"waitMs", "5000"}});
    rewarder.join();
    EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(4));
    EXPECT_EQ(json::parse(r.body)["step"], 1);
}

TEST_F(ApiTest, SessionsAreIsolated) {
    const auto a = create({{"seed", 5}});
    const auto b = create({{"seed", 5}});
    const auto before = ok("GET", "/sessions/" + b);
    ok("POST", "/sessions/" + a + "/present", apple("red"));
    ok("POST", "/sessions/" + a + "/reward", {{"reward", "positive"}});
    EXPECT_EQ(ok("GET", "/sessions/" + b), before);
}

TEST_F(ApiTest, SaveAndLoadRoundTrip) {
    const auto id = create();
    for (const char* c : {"red", "green", "brown"}) {
        ok("POST", "/sessions/" + id + "/present", apple(c));
        ok("POST", "/sessions/" + id + "/reward", {{"reward", "positive"}});
    }
    const auto inline_ = ok("POST", "/sessions/" + id + "/save");
    const std::string file = "catlearn_service_test_" + id + ".json";
    EXPECT_EQ(ok("POST", "/sessions/" + id + "/save", {{"path", file}})["path"], file);

    const auto other = create();
    ok("POST", "/sessions/" + other + "/load", {{"path", file}});
    EXPECT_EQ(ok("GET", "/sessions/" + other)["graph"], inline_["document"]);
    const auto third = create();
    ok("POST", "/sessions/" + third + "/load", {{"document", inline_["document"]}});
    EXPECT_EQ(ok("GET", "/sessions/" + third)["graph"], inline_["document"]);
    EXPECT_TRUE(ok("GET", "/sessions/" + third)["history"].empty());

    expectError(call("POST", "/sessions/" + id + "/save", {{"path", "../escape.json"}}), 400, "invalid_request");
    expectError(call("POST", "/sessions/" + id + "/load", {{"path", "missing-doc.json"}}), 404, "not_found");
    expectError(call("POST", "/sessions/" + id + "/load", {{"document", {{"version", 7}}}}), 400, "invalid_document");
    std::filesystem::remove(std::filesystem::temp_directory_path() / file);
}

TEST(ApiStorage, PathsNeedAStorageDirectory) {
    sv::SessionManager sessions;
    sv::Api api{sessions};
    const auto id = json::parse(api.handle({"POST", "/sessions", {}, "{}"}).body)["id"].get<std::string>();
    const auto r = api.handle({"POST", "/sessions/" + id + "/save", {}, R"({"path": "x.json"})"});
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(json::parse(r.body)["code"], "storage_disabled");
}

TEST(ApiEquivalence, EventsMatchADirectCoreRun) {
    // Drive the example scenario through the API and directly against the
    // core with the same seed; the event logs must be identical.
    kn::Parameters params;
    params.thetaMc = 9.0 / 14.0;
    params.deltaAw = 4.0 / 9.0;
    params.rhoRa = 0.1;
    const std::uint64_t seed = 17;

    sv::SessionManager sessions;
    sv::Api api{sessions};
    const auto id = json::parse(api.handle({"POST", "/sessions", {},
                                            json{{"scenario", "example"},
                                                 {"seed", seed},
                                                 {"parameters", kn::toJson(params)}}
                                                .dump()})
                                    .body)["id"]
                        .get<std::string>();

    kn::KnowledgeGraph g(sc::sortingSchema(), sc::sortingActions(), params, seed);
    sc::PresentationOrder order(sc::OrderPolicy::Random, 3);
    std::string direct;
    for (std::uint64_t step = 1; step <= 120; ++step) {
        const auto kind = order.next();
        // The server normalizes every payload, so the direct run does too.
        const auto raw = kn::toJson(sc::examplePercept(kind, sc::Variant::Noisy, step));
        const auto percept = kn::perceptFromJson(g.schema(), raw);
        const std::string perceptId(sc::toString(kind));

        auto obs = g.observe(percept);
        const auto choice = g.selectAction(obs.category);
        const auto reward = sc::exampleOracle(kind, choice.action);
        const auto outcome = g.recordReward(obs, choice.action, reward);
        direct += kn::toLine(kn::makeEvent(step, perceptId, obs, choice, reward, outcome, g), g.schema()) + '\n';

        const auto presented = api.handle({"POST", "/sessions/" + id + "/present", {},
                                           json{{"features", raw}, {"perceptId", perceptId}}.dump()});
        ASSERT_EQ(presented.status, 200) << presented.body;
        ASSERT_EQ(json::parse(presented.body)["chosenAction"], g.actionName(choice.action));
        const auto rewarded = api.handle({"POST", "/sessions/" + id + "/reward", {},
                                          json{{"reward", kn::toString(reward)}}.dump()});
        ASSERT_EQ(rewarded.status, 200) << rewarded.body;
    }
    EXPECT_EQ(api.handle({"GET", "/sessions/" + id + "/events", {}, ""}).body, direct);
    EXPECT_EQ(json::parse(api.handle({"GET", "/sessions/" + id, {}, ""}).body)["graph"], kn::serializeGraph(g));
}

TEST(HttpServer, ServesTheApiOverHttp) {
    sv::SessionManager sessions;
    sv::Api api{sessions};
    sv::HttpServer server(api);
    const int port = server.bind("127.0.0.1", 0);
    ASSERT_GT(port, 0);
    std::thread loop([&] { server.listen(); });

    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(5);
    auto created = client.Post("/sessions", R"({"scenario": "example", "seed": 2})", "application/json");
    for (int attempt = 0; !created && attempt < 50; ++attempt) {
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        created = client.Post("/sessions", R"({"scenario": "example", "seed": 2})", "application/json");
    }
    ASSERT_TRUE(created);
    EXPECT_EQ(created->status, 201);
    const auto id = json::parse(created->body)["id"].get<std::string>();

    const auto presented = client.Post("/sessions/" + id + "/present", R"({"object": "greenBlock"})", "application/json");
    ASSERT_TRUE(presented);
    EXPECT_EQ(presented->status, 200);
    EXPECT_TRUE(json::parse(presented->body)["isNew"].get<bool>());

    const auto conflict = client.Post("/sessions/" + id + "/present", R"({"object": "greenBlock"})", "application/json");
    ASSERT_TRUE(conflict);
    EXPECT_EQ(conflict->status, 409);

    const auto rewarded = client.Post("/sessions/" + id + "/reward", R"({"reward": "positive"})", "application/json");
    ASSERT_TRUE(rewarded);
    EXPECT_EQ(rewarded->status, 200);

    const auto events = client.Get("/sessions/" + id + "/events?since=0");
    ASSERT_TRUE(events);
    EXPECT_EQ(events->get_header_value("Content-Type"), "application/x-ndjson");
    EXPECT_EQ(json::parse(events->body)["perceptId"], "greenBlock");

    const auto missing = client.Get("/sessions/nope");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 404);
    EXPECT_EQ(json::parse(missing->body)["code"], "not_found");

    server.stop();
    loop.join();
}

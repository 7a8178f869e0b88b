#include <gtest/gtest.h>

#include <thread>

#include "qlens/examples.hpp"
#include "qlens/server.hpp"
#include "schema_check.hpp"

using namespace qlens;
using namespace qlens::service;
using nlohmann::json;

namespace {

std::string example_body(const char* name) { return std::string(examples::find(name)->json_text); }

std::string post_id(Service& svc, const char* name) {
    const auto r = svc.post_circuit(example_body(name));
    EXPECT_TRUE(r.status == 201 || r.status == 200) << r.body;
    return json::parse(r.body).at("id").get<std::string>();
}

void expect_error(const Response& r, int status, const std::string& code) {
    EXPECT_EQ(r.status, status) << r.body;
    const auto j = json::parse(r.body);
    EXPECT_EQ(schema::validate(schema::error, j), "");
    EXPECT_EQ(j.at("error"), code);
}

} // namespace

TEST(Service, PostAndFetchExamples) {
    Service svc({});
    for (const char* name : {"grover2", "qft3"}) {
        const auto first = svc.post_circuit(example_body(name));
        EXPECT_EQ(first.status, 201);
        EXPECT_EQ(schema::validate(schema::created, json::parse(first.body)), "");
        const auto second = svc.post_circuit(example_body(name));
        EXPECT_EQ(second.status, 200);
        EXPECT_EQ(json::parse(first.body)["id"], json::parse(second.body)["id"]);

        const std::string id = json::parse(first.body)["id"];
        const auto c = svc.get_circuit(id);
        ASSERT_EQ(c.status, 200);
        EXPECT_EQ(schema::validate(schema::circuit_payload, json::parse(c.body)), "");
        const auto s = svc.get_summary(id);
        ASSERT_EQ(s.status, 200);
        EXPECT_EQ(schema::validate(schema::summary, json::parse(s.body)), "");
        const auto e = svc.get_evolution(id, {}, {});
        ASSERT_EQ(e.status, 200);
        EXPECT_EQ(schema::validate(schema::evolution, json::parse(e.body)), "");
    }
}

TEST(Service, FormattingDoesNotChangeId) {
    Service svc({});
    const auto compact = json::parse(example_body("qft3")).dump();
    const auto a = json::parse(svc.post_circuit(example_body("qft3")).body)["id"];
    const auto b = json::parse(svc.post_circuit(compact).body)["id"];
    EXPECT_EQ(a, b);
}

TEST(Service, GroverSummary) {
    Service svc({});
    const auto id = post_id(svc, "grover2");
    const auto j = json::parse(svc.get_summary(id).body);
    EXPECT_EQ(j["step_count"], 16);
    EXPECT_EQ(j["labels"], json({"00", "01", "10", "11"}));
    EXPECT_NEAR(j["matrix"][16][3].get<double>(), 1.0, 1e-9);
    EXPECT_EQ(j["block_spans"].size(), 3u);
}

TEST(Service, UnknownIdIs404) {
    Service svc({});
    expect_error(svc.get_circuit("0123456789abcdef0123456789abcdef"), 404, "not_found");
    expect_error(svc.get_summary("nothex"), 404, "not_found");
    expect_error(svc.get_evolution("ffff", {}, {}), 404, "not_found");
}

TEST(Service, MalformedPosts) {
    Service svc({});
    expect_error(svc.post_circuit("{"), 400, "schema_error");
    expect_error(svc.post_circuit(R"({"qubits":2})"), 400, "schema_error");
    expect_error(svc.post_circuit(R"({"qubits":2,"blocks":[{"name":"a","gates":[{"kind":"t","operands":[0]}]}]})"),
                 400, "schema_error");
    expect_error(svc.post_circuit(R"({"qubits":2,"blocks":[{"name":"a","gates":[{"kind":"h","operands":[2]}]}]})"),
                 400, "bounds_error");
    expect_error(svc.post_circuit(R"({"qubits":2,"blocks":[]})"), 400, "empty_circuit");
    expect_error(svc.post_circuit(R"({"qubits":13,"blocks":[{"name":"a","gates":[{"kind":"h","operands":[0]}]}]})"),
                 400, "cap_exceeded");
}

TEST(Service, ConfiguredCapApplies) {
    ServerConfig cfg;
    cfg.max_qubits = 2;
    Service svc(cfg);
    expect_error(svc.post_circuit(example_body("qft3")), 400, "cap_exceeded");
    EXPECT_EQ(svc.post_circuit(example_body("grover2")).status, 201);
}

TEST(Service, EvolutionRangeAndTrace) {
    Service svc({});
    const auto id = post_id(svc, "grover2");
    const auto sliced = json::parse(svc.get_evolution(id, "2", "5").body);
    EXPECT_EQ(schema::validate(schema::evolution, sliced), "");
    EXPECT_EQ(sliced["from"], 2);
    EXPECT_EQ(sliced["to"], 5);
    for (const auto& n : sliced["nodes"]) {
        EXPECT_GE(n["step"].get<int>(), 2);
        EXPECT_LE(n["step"].get<int>(), 5);
    }

    const auto traced = json::parse(svc.get_evolution(id, "2", "5", "5:11").body);
    EXPECT_EQ(schema::validate(schema::evolution, traced), "");
    std::set<std::string> roots;
    for (const auto& n : traced["nodes"])
        if (n["step"] == 2) roots.insert(n["label"].get<std::string>());
    EXPECT_EQ(roots, (std::set<std::string>{"10", "11"}));

    expect_error(svc.get_evolution(id, "5", "2"), 400, "range_error");
    expect_error(svc.get_evolution(id, "0", "17"), 400, "range_error");
    expect_error(svc.get_evolution(id, "x", {}), 400, "schema_error");
    expect_error(svc.get_evolution(id, {}, {}, "3"), 400, "schema_error");
    expect_error(svc.get_evolution(id, {}, {}, "3:1"), 400, "schema_error");
    expect_error(svc.get_evolution(id, {}, {}, "16:00"), 404, "node_not_found");
}

TEST(Service, Explanation) {
    Service svc({});
    const auto id = post_id(svc, "grover2");
    const auto r = svc.get_explanation(id, "0", "00");
    ASSERT_EQ(r.status, 200) << r.body;
    const auto j = json::parse(r.body);
    EXPECT_EQ(schema::validate(schema::explanation, j), "");
    EXPECT_EQ(j["output_labels"], json({"00", "10"}));
    EXPECT_EQ(j["rows"][0]["operation"], "hadamard");

    expect_error(svc.get_explanation(id, "0", "01"), 400, "dead_state");
    expect_error(svc.get_explanation(id, "16", "00"), 400, "range_error");
    expect_error(svc.get_explanation(id, "0", "000"), 400, "bounds_error");
    expect_error(svc.get_explanation(id, "0", std::nullopt), 400, "schema_error");
}

TEST(Service, Dandelion) {
    Service svc({});
    const auto id = post_id(svc, "grover2");
    const auto r = svc.get_dandelion(id, "2", "0.25");
    ASSERT_EQ(r.status, 200) << r.body;
    const auto j = json::parse(r.body);
    EXPECT_EQ(schema::validate(schema::dandelion_payload, j), "");
    EXPECT_EQ(j["pre"]["elements"].size(), 4u);
    EXPECT_EQ(j["pre"]["k"], 0.25);
    EXPECT_EQ(json::parse(svc.get_dandelion(id, "3", {}).body)["post"]["k"], 0.25);

    expect_error(svc.get_dandelion(id, "3", "0"), 400, "bad_scale");
    expect_error(svc.get_dandelion(id, "3", "1.5"), 400, "bad_scale");
    expect_error(svc.get_dandelion(id, "3", "abc"), 400, "schema_error");
    expect_error(svc.get_dandelion(id, "16", "0.5"), 400, "range_error");
}

TEST(Service, ExamplesEndpoint) {
    Service svc({});
    const auto r = svc.get_examples();
    ASSERT_EQ(r.status, 200);
    const auto j = json::parse(r.body);
    EXPECT_EQ(schema::validate(schema::examples, j), "");
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0]["name"], "grover2");
    EXPECT_EQ(j[1]["name"], "qft3");
}

TEST(Service, ConfigValidation) {
    ServerConfig cfg;
    cfg.port = 0;
    EXPECT_THROW(cfg.validate(), RangeError);
    cfg.port = 8080;
    cfg.max_qubits = hard_max_qubits + 1;
    EXPECT_THROW(cfg.validate(), RangeError);
    cfg.max_qubits = 4;
    cfg.assets_dir = "/nonexistent/assets";
    EXPECT_THROW(cfg.validate(), IoError);
}

class HttpFixture : public ::testing::Test {
protected:
    void SetUp() override {
        server_ = std::make_unique<HttpServer>(ServerConfig{});
        port_ = server_->bind(true);
        thread_ = std::thread([this] { server_->listen(); });
        server_->wait_until_ready();
    }
    void TearDown() override {
        server_->stop();
        thread_.join();
    }
    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port_);
        c.set_connection_timeout(5);
        return c;
    }

    std::unique_ptr<HttpServer> server_;
    int port_ = 0;
    std::thread thread_;
};

TEST_F(HttpFixture, RoundTripOverHttp) {
    auto c = client();
    const auto post = c.Post("/api/circuits", example_body("grover2"), "application/json");
    ASSERT_TRUE(post);
    EXPECT_EQ(post->status, 201);
    const std::string id = json::parse(post->body)["id"];
    EXPECT_EQ(c.Post("/api/circuits", example_body("grover2"), "application/json")->status, 200);

    for (const std::string& path : {"/api/circuits/" + id, "/api/circuits/" + id + "/summary",
                                   "/api/circuits/" + id + "/evolution?from=0&to=4",
                                   "/api/circuits/" + id + "/steps/0/explanation?label=00",
                                   "/api/circuits/" + id + "/steps/3/dandelion?k=0.25"}) {
        const auto r = c.Get(path);
        ASSERT_TRUE(r) << path;
        EXPECT_EQ(r->status, 200) << path << " " << r->body;
        EXPECT_EQ(r->get_header_value("Content-Type"), "application/json");
    }
    const auto ev = json::parse(c.Get("/api/circuits/" + id + "/evolution?trace=5:11")->body);
    EXPECT_EQ(schema::validate(schema::evolution, ev), "");
    const auto ex = c.Get("/api/examples");
    ASSERT_TRUE(ex);
    EXPECT_EQ(schema::validate(schema::examples, json::parse(ex->body)), "");
}

TEST_F(HttpFixture, ErrorsOverHttp) {
    auto c = client();
    const auto missing = c.Get("/api/circuits/0123456789abcdef");
    ASSERT_TRUE(missing);
    EXPECT_EQ(missing->status, 404);
    EXPECT_EQ(json::parse(missing->body)["error"], "not_found");

    const auto bad = c.Post("/api/circuits", "{]", "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 400);
    EXPECT_EQ(json::parse(bad->body)["error"], "schema_error");

    const auto noroute = c.Get("/api/nowhere");
    ASSERT_TRUE(noroute);
    EXPECT_EQ(noroute->status, 404);
    EXPECT_EQ(schema::validate(schema::error, json::parse(noroute->body)), "");
}

TEST_F(HttpFixture, ConcurrentReadsAreIdentical) {
    auto c = client();
    const std::string id = json::parse(c.Post("/api/circuits", example_body("qft3"), "application/json")->body)["id"];
    const std::string path = "/api/circuits/" + id + "/evolution";
    const std::string expected = c.Get(path)->body;

    std::atomic<int> bad{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 6; ++t) {
        threads.emplace_back([&] {
            auto local = client();
            for (int i = 0; i < 10; ++i) {
                const auto r = local.Get(path);
                if (!r || r->status != 200 || r->body != expected) ++bad;
            }
        });
    }
    for (auto& t : threads) t.join();
    EXPECT_EQ(bad.load(), 0);
}

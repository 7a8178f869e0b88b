#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "qlens/analysis.hpp"
#include "qlens/bundle.hpp"
#include "qlens/circuit_io.hpp"
#include "qlens/dandelion.hpp"
#include "qlens/errors.hpp"
#include "qlens/examples.hpp"
#include "qlens/json_io.hpp"
#include "qlens/store.hpp"

namespace qlens::service {

using nlohmann::json;

struct ServerConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::size_t max_qubits = default_max_qubits;
    std::filesystem::path assets_dir;
    std::filesystem::path store_dir;

    void validate() const {
        if (port < 1 || port > 65535) throw RangeError("port must lie in [1, 65535]");
        if (max_qubits < 1 || max_qubits > hard_max_qubits)
            throw RangeError("qubit cap must lie in [1, " + std::to_string(hard_max_qubits) + "]");
        if (!assets_dir.empty() && !std::filesystem::is_directory(assets_dir))
            throw IoError("asset directory " + assets_dir.string() + " does not exist");
    }
};

struct Response {
    int status = 200;
    std::string body;
};

inline int status_for(std::string_view code) {
    if (code == "not_found" || code == "node_not_found") return 404;
    if (code == "io_error" || code == "bind_error" || code == "internal") return 500;
    return 400;
}

inline Response error_response(std::string_view code, std::string_view detail) {
    return {status_for(code), io::error_body(code, detail).dump()};
}

inline std::size_t parse_index(std::string_view text, std::string_view what) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw SchemaError(std::string(what) + " must be a non-negative integer, got '" + std::string(text) + "'");
    return v;
}

inline double parse_real(std::string_view text, std::string_view what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(std::string(text), &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (text.empty() || used != text.size())
        throw SchemaError(std::string(what) + " must be a number, got '" + std::string(text) + "'");
    return v;
}

// Request handling independent of the transport. Each method maps library
// errors to {"error": code, "detail": text} bodies.
class Service {
public:
    explicit Service(ServerConfig config) : config_(std::move(config)), store_(config_.store_dir) {}

    const ServerConfig& config() const noexcept { return config_; }
    BundleStore& store() noexcept { return store_; }

    Response post_circuit(std::string_view body) {
        return guarded([&] {
            const Circuit circuit = parse_circuit_json(body, config_.max_qubits);
            auto [entry, inserted] = store_.put(analyze(circuit, config_.max_qubits));
            return Response{inserted ? 201 : 200, json{{"id", entry.bundle->id}}.dump()};
        });
    }

    Response get_circuit(const std::string& id) {
        return guarded([&] {
            const auto& b = bundle(id);
            return ok(json{{"id", b.id}, {"circuit", circuit_to_json(b.circuit)},
                           {"steps", io::steps_to_json(b.steps)}});
        });
    }

    Response get_summary(const std::string& id) {
        return guarded([&] { return ok(io::to_json(bundle(id).summary)); });
    }

    // from/to default to the full range. `trace` = "<step>:<label>" returns
    // the ancestry of that node within the range instead of the whole graph.
    Response get_evolution(const std::string& id, std::optional<std::string> from,
                           std::optional<std::string> to, std::optional<std::string> trace = {}) {
        return guarded([&] {
            const auto& b = bundle(id);
            const std::size_t f = from ? parse_index(*from, "from") : 0;
            const std::size_t t = to ? parse_index(*to, "to") : b.step_count();
            EvolutionGraph g = slice_evolution(b.evolution, f, t);
            if (trace) {
                const auto colon = trace->find(':');
                if (colon == std::string::npos) throw SchemaError("trace must be <step>:<label>");
                const std::size_t step = parse_index(std::string_view(*trace).substr(0, colon), "trace step");
                const BasisLabel label = io::label_from_json(json(trace->substr(colon + 1)));
                if (label.num_qubits() != b.num_qubits())
                    throw SchemaError("trace label width must equal the qubit count");
                g = trace_back(g, {step, label.index()});
            }
            return ok(io::to_json(g));
        });
    }

    Response get_explanation(const std::string& id, std::string_view step, std::optional<std::string> label) {
        return guarded([&] {
            const auto& b = bundle(id);
            if (!label) throw SchemaError("query parameter 'label' is required");
            const BasisLabel input = io::label_from_json(json(*label));
            return ok(io::to_json(explain_gate(b, parse_index(step, "step"), input)));
        });
    }

    Response get_dandelion(const std::string& id, std::string_view step, std::optional<std::string> k) {
        return guarded([&] {
            const auto& b = bundle(id);
            const double scale = k ? parse_real(*k, "k") : default_scale;
            const auto [pre, post] = compare_pair(b, parse_index(step, "step"), scale);
            return ok(json{{"pre", io::to_json(pre)}, {"post", io::to_json(post)}});
        });
    }

    Response get_examples() const {
        json out = json::array();
        for (const auto& e : examples::registry())
            out.push_back({{"name", e.name}, {"description", e.description},
                           {"circuit", json::parse(e.json_text)}});
        return ok(out);
    }

private:
    static Response ok(const json& j) { return {200, j.dump()}; }

    template <typename F>
    static Response guarded(F&& f) {
        try {
            return f();
        } catch (const Error& e) {
            return error_response(e.code(), e.what());
        } catch (const std::exception& e) {
            return error_response("internal", e.what());
        }
    }

    const AnalysisBundle& bundle(const std::string& id) {
        auto entry = store_.get(id);
        if (!entry) throw NotFound("no circuit with id '" + id + "'");
        // Entries are never evicted, so the reference outlives this request.
        return *entry->bundle;
    }

    ServerConfig config_;
    BundleStore store_;
};

inline std::optional<std::string> query(const httplib::Request& req, const char* key) {
    if (!req.has_param(key)) return std::nullopt;
    return req.get_param_value(key);
}

inline void mount(httplib::Server& http, Service& svc) {
    const auto reply = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    http.Post("/api/circuits", [&svc, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, svc.post_circuit(req.body));
    });
    http.Get("/api/examples", [&svc, reply](const httplib::Request&, httplib::Response& res) {
        reply(res, svc.get_examples());
    });
    http.Get(R"(/api/circuits/([0-9a-zA-Z]+))", [&svc, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, svc.get_circuit(req.matches[1]));
    });
    http.Get(R"(/api/circuits/([0-9a-zA-Z]+)/summary)",
             [&svc, reply](const httplib::Request& req, httplib::Response& res) {
                 reply(res, svc.get_summary(req.matches[1]));
             });
    http.Get(R"(/api/circuits/([0-9a-zA-Z]+)/evolution)",
             [&svc, reply](const httplib::Request& req, httplib::Response& res) {
                 reply(res, svc.get_evolution(req.matches[1], query(req, "from"), query(req, "to"),
                                              query(req, "trace")));
             });
    http.Get(R"(/api/circuits/([0-9a-zA-Z]+)/steps/([^/]+)/explanation)",
             [&svc, reply](const httplib::Request& req, httplib::Response& res) {
                 reply(res, svc.get_explanation(req.matches[1], std::string(req.matches[2]), query(req, "label")));
             });
    http.Get(R"(/api/circuits/([0-9a-zA-Z]+)/steps/([^/]+)/dandelion)",
             [&svc, reply](const httplib::Request& req, httplib::Response& res) {
                 reply(res, svc.get_dandelion(req.matches[1], std::string(req.matches[2]), query(req, "k")));
             });
    http.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        const Response r = error_response(res.status == 404 ? "not_found" : "internal",
                                          "no route for " + req.method + " " + req.path);
        res.set_content(r.body, "application/json");
    });
    if (!svc.config().assets_dir.empty()) http.set_mount_point("/", svc.config().assets_dir.string());
}

// Owns the HTTP server and its service. bind() then listen() blocks until
// stop() is called from another thread.
class HttpServer {
public:
    explicit HttpServer(ServerConfig config) : service_(std::move(config)) { mount(http_, service_); }

    // Binds the configured port, or any free port when `any_port` is set.
    int bind(bool any_port = false) {
        const auto& cfg = service_.config();
        if (any_port) {
            const int port = http_.bind_to_any_port(cfg.host);
            if (port <= 0) throw BindError("cannot bind " + cfg.host);
            return port;
        }
        if (!http_.bind_to_port(cfg.host, cfg.port))
            throw BindError("cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
        return cfg.port;
    }

    void listen() { http_.listen_after_bind(); }
    void stop() { http_.stop(); }
    void wait_until_ready() const { http_.wait_until_ready(); }

    Service& service() noexcept { return service_; }

private:
    Service service_;
    httplib::Server http_;
};

inline void serve(const ServerConfig& config) {
    config.validate();
    HttpServer server(config);
    server.bind();
    server.listen();
}

} // namespace qlens::service

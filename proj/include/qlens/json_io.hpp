#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qlens/analysis.hpp"
#include "qlens/circuit.hpp"
#include "qlens/circuit_io.hpp"
#include "qlens/dandelion.hpp"
#include "qlens/errors.hpp"

// JSON forms of the analysis products. Every to_json has a matching reader
// so stored bundles can be reloaded without re-simulating.

namespace qlens::io {

using nlohmann::json;

inline json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }
inline json point_to_json(Point2 p) { return json::array({p.x, p.y}); }

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw SchemaError(std::string("missing field \"") + key + "\"");
    return j[key];
}

inline Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SchemaError("complex value must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Point2 point_from_json(const json& j) {
    const Complex c = complex_from_json(j);
    return {c.real(), c.imag()};
}

inline BasisLabel label_from_json(const json& j) {
    if (!j.is_string()) throw SchemaError("basis label must be a string");
    try {
        return BasisLabel::from_bits(j.get<std::string>());
    } catch (const BoundsError& e) {
        throw SchemaError(e.what());
    }
}

inline std::size_t size_from_json(const json& j) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw SchemaError("expected a non-negative integer");
    return j.get<std::size_t>();
}

// --- steps -----------------------------------------------------------------

inline json steps_to_json(const std::vector<Step>& steps) {
    json out = json::array();
    for (const auto& s : steps)
        out.push_back({{"step_index", s.step_index}, {"block_index", s.block_index},
                       {"gate", gate_to_json(s.gate)}});
    return out;
}

// --- summary ---------------------------------------------------------------

inline json to_json(const ProbabilitySummary& s) {
    json labels = json::array();
    for (const auto& l : s.labels) labels.push_back(l.bits());
    json spans = json::array();
    for (const auto& b : s.block_spans)
        spans.push_back({{"name", b.name}, {"first_step", b.first_step}, {"last_step", b.last_step}});
    json creations = json::array();
    for (const auto& c : s.creations) creations.push_back(c ? json(*c) : json(nullptr));
    return {{"step_count", s.step_count}, {"labels", std::move(labels)}, {"matrix", s.matrix},
            {"block_spans", std::move(spans)}, {"creations", std::move(creations)}};
}

inline ProbabilitySummary summary_from_json(const json& j) {
    ProbabilitySummary s;
    s.step_count = size_from_json(field(j, "step_count"));
    for (const auto& l : field(j, "labels")) s.labels.push_back(label_from_json(l));
    s.matrix = field(j, "matrix").get<std::vector<std::vector<double>>>();
    for (const auto& b : field(j, "block_spans"))
        s.block_spans.push_back({field(b, "name").get<std::string>(),
                                 size_from_json(field(b, "first_step")),
                                 size_from_json(field(b, "last_step"))});
    for (const auto& c : field(j, "creations"))
        s.creations.push_back(c.is_null() ? std::nullopt : std::optional(size_from_json(c)));
    return s;
}

// --- evolution -------------------------------------------------------------

inline json node_ref(const NodeKey& k, std::size_t n) {
    return {{"step", k.step}, {"label", BasisLabel(n, k.index).bits()}};
}

inline json to_json(const EvolutionGraph& g) {
    json nodes = json::array();
    for (const auto& n : g.nodes)
        nodes.push_back({{"step", n.step}, {"label", n.label.bits()}, {"amp", complex_to_json(n.amp)},
                         {"prob", n.prob}, {"sign_class", sign_name(n.sign_class)}});
    json edges = json::array();
    for (const auto& e : g.edges)
        edges.push_back({{"from", node_ref(e.from, g.num_qubits)}, {"to", node_ref(e.to, g.num_qubits)},
                         {"contribution", complex_to_json(e.contribution)}});
    json hubs = json::array();
    for (const auto& h : g.hubs) {
        json members = json::array();
        for (const auto& m : h.members) members.push_back(m.bits());
        hubs.push_back({{"step", h.step}, {"prob", h.prob}, {"members", std::move(members)}});
    }
    return {{"qubits", g.num_qubits}, {"from", g.from_step},   {"to", g.to_step},
            {"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"hubs", std::move(hubs)}};
}

inline NodeKey node_ref_from_json(const json& j) {
    return {size_from_json(field(j, "step")), label_from_json(field(j, "label")).index()};
}

inline EvolutionGraph evolution_from_json(const json& j) {
    EvolutionGraph g;
    g.num_qubits = size_from_json(field(j, "qubits"));
    g.from_step = size_from_json(field(j, "from"));
    g.to_step = size_from_json(field(j, "to"));
    for (const auto& n : field(j, "nodes")) {
        const auto sign = field(n, "sign_class").get<std::string>();
        if (sign != "positive" && sign != "negative") throw SchemaError("bad sign_class");
        g.nodes.push_back({size_from_json(field(n, "step")), label_from_json(field(n, "label")),
                           complex_from_json(field(n, "amp")), field(n, "prob").get<double>(),
                           sign == "positive" ? SignClass::Positive : SignClass::Negative});
    }
    for (const auto& e : field(j, "edges"))
        g.edges.push_back({node_ref_from_json(field(e, "from")), node_ref_from_json(field(e, "to")),
                           complex_from_json(field(e, "contribution"))});
    for (const auto& h : field(j, "hubs")) {
        Hub hub{size_from_json(field(h, "step")), field(h, "prob").get<double>(), {}};
        for (const auto& m : field(h, "members")) hub.members.push_back(label_from_json(m));
        g.hubs.push_back(std::move(hub));
    }
    return g;
}

// --- gate explanation ------------------------------------------------------

inline json to_json(const GateExplanation& e) {
    json rows = json::array();
    for (const auto& r : e.rows) {
        json finals = json::array();
        for (int f : r.finals) finals.push_back(std::to_string(f));
        rows.push_back({{"qubit", r.qubit}, {"initial", std::to_string(r.initial)},
                        {"operation", operation_name(r.operation)}, {"finals", std::move(finals)}});
    }
    json outputs = json::array();
    for (const auto& l : e.output_labels) outputs.push_back(l.bits());
    return {{"step", e.step}, {"input_label", e.input_label.bits()}, {"rows", std::move(rows)},
            {"output_labels", std::move(outputs)}};
}

// --- dandelion -------------------------------------------------------------

inline json to_json(const DandelionElement& e, double k) {
    const Segment re = e.real_stick();
    const Segment im = e.imag_stick();
    return {{"label", e.label.bits()},
            {"point", point_to_json(e.point)},
            {"r0", e.r0},
            {"k", k},
            {"center", point_to_json(e.center(k))},
            {"radius", e.radius(k)},
            {"sticks",
             {{"real", json::array({point_to_json(re.from), point_to_json(re.to)})},
              {"imag", json::array({point_to_json(im.from), point_to_json(im.to)})}}}};
}

inline json to_json(const DandelionFigure& f) {
    json elements = json::array();
    for (const auto& e : f.elements) elements.push_back(to_json(e, f.k));
    return {{"k", f.k}, {"axis_extent", f.axis_extent}, {"elements", std::move(elements)}};
}

// k-independent part of an element, as stored in bundles.
inline json base_to_json(const std::vector<DandelionElement>& elements) {
    json out = json::array();
    for (const auto& e : elements)
        out.push_back({{"label", e.label.bits()}, {"point", point_to_json(e.point)}, {"r0", e.r0}});
    return out;
}

inline std::vector<DandelionElement> base_from_json(const json& j) {
    if (!j.is_array()) throw SchemaError("dandelion base must be an array");
    std::vector<DandelionElement> out;
    for (const auto& e : j)
        out.push_back({label_from_json(field(e, "label")), point_from_json(field(e, "point")),
                       field(e, "r0").get<double>()});
    return out;
}

// --- errors ----------------------------------------------------------------

inline json error_body(std::string_view code, std::string_view detail) {
    return {{"error", code}, {"detail", detail}};
}

} // namespace qlens::io

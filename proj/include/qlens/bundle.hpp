#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "qlens/analysis.hpp"
#include "qlens/circuit.hpp"
#include "qlens/circuit_io.hpp"
#include "qlens/dandelion.hpp"
#include "qlens/json_io.hpp"
#include "qlens/statevec.hpp"

namespace qlens {

// Everything the explorer needs for one circuit, derived from a single
// simulation. Dandelion data is stored without k; k is applied per query.
struct AnalysisBundle {
    std::string id;
    Circuit circuit;
    std::vector<Step> steps;
    ProbabilitySummary summary;
    EvolutionGraph evolution;
    std::vector<std::vector<DandelionElement>> dandelion;  // per state index

    std::size_t step_count() const noexcept { return steps.size(); }
    std::size_t num_qubits() const noexcept { return circuit.num_qubits(); }

    friend bool operator==(const AnalysisBundle&, const AnalysisBundle&) = default;
};

inline std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw IoError("SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

inline std::string canonical_circuit(const Circuit& circuit) { return circuit_to_json(circuit).dump(); }

inline std::string circuit_id(const Circuit& circuit) {
    return sha256_hex(canonical_circuit(circuit)).substr(0, 32);
}

inline AnalysisBundle analyze(const Circuit& circuit, std::size_t max_qubits = default_max_qubits) {
    if (circuit.num_qubits() > max_qubits)
        throw CapExceeded("circuit has " + std::to_string(circuit.num_qubits()) +
                          " qubits, cap is " + std::to_string(max_qubits));
    const StepTrace trace = simulate(circuit);
    std::vector<std::vector<DandelionElement>> dandelion;
    dandelion.reserve(trace.states.size());
    for (const auto& s : trace.states) dandelion.push_back(dandelion_elements(s));
    return {circuit_id(circuit), circuit, trace.steps, build_summary(trace),
            build_evolution(trace, 0, trace.step_count()), std::move(dandelion)};
}

namespace io {

inline json to_json(const AnalysisBundle& b) {
    json dandelion = json::array();
    for (std::size_t s = 0; s < b.dandelion.size(); ++s)
        dandelion.push_back({{"state", s}, {"elements", base_to_json(b.dandelion[s])}});
    return {{"id", b.id},
            {"circuit", circuit_to_json(b.circuit)},
            {"steps", steps_to_json(b.steps)},
            {"summary", to_json(b.summary)},
            {"evolution", to_json(b.evolution)},
            {"dandelion", std::move(dandelion)}};
}

inline std::string canonical_bytes(const AnalysisBundle& b) { return to_json(b).dump(); }

inline AnalysisBundle bundle_from_json(const json& j) {
    Circuit circuit = circuit_from_json(field(j, "circuit"), hard_max_qubits);
    std::vector<std::vector<DandelionElement>> dandelion;
    for (const auto& d : field(j, "dandelion")) dandelion.push_back(base_from_json(field(d, "elements")));
    AnalysisBundle b{field(j, "id").get<std::string>(), circuit, flatten(circuit),
                     summary_from_json(field(j, "summary")), evolution_from_json(field(j, "evolution")),
                     std::move(dandelion)};
    if (b.dandelion.size() != b.steps.size() + 1 || b.summary.matrix.size() != b.steps.size() + 1)
        throw SchemaError("bundle is internally inconsistent");
    return b;
}

inline AnalysisBundle bundle_from_bytes(std::string_view bytes) {
    try {
        return bundle_from_json(json::parse(bytes));
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed bundle: ") + e.what());
    }
}

} // namespace io

// Explanation and dandelion queries answered from a stored bundle.

inline GateExplanation explain_gate(const AnalysisBundle& bundle, std::size_t step,
                                    const BasisLabel& input) {
    if (step >= bundle.step_count())
        throw RangeError("step " + std::to_string(step) + " outside [0, " +
                         std::to_string(bundle.step_count()) + ")");
    if (input.num_qubits() != bundle.num_qubits())
        throw BoundsError("label '" + input.bits() + "' does not match the register width");
    if (!(bundle.summary.matrix[step][input.index()] > tolerance::alive))
        throw DeadState("basis state |" + input.bits() + "> is not populated before step " +
                        std::to_string(step));
    return explain_gate(bundle.steps[step], input);
}

inline std::pair<DandelionFigure, DandelionFigure> compare_pair(const AnalysisBundle& bundle,
                                                                std::size_t step, double k) {
    if (step >= bundle.step_count())
        throw RangeError("step " + std::to_string(step) + " outside [0, " +
                         std::to_string(bundle.step_count()) + ")");
    return {build_figure(bundle.dandelion[step], k), build_figure(bundle.dandelion[step + 1], k)};
}

} // namespace qlens

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlens/circuit.hpp"
#include "qlens/circuit_io.hpp"

// Bundled example circuits. The texts mirror data/circuits/*.json.

namespace qlens::examples {

struct Example {
    std::string_view name;
    std::string_view description;
    std::string_view json_text;
};

inline constexpr std::string_view grover2_json = R"json({
  "qubits": 2,
  "title": "Grover search for |11>",
  "blocks": [
    {
      "name": "Initialization",
      "gates": [
        {"kind": "h", "operands": [0]},
        {"kind": "h", "operands": [1]}
      ]
    },
    {
      "name": "Oracle",
      "gates": [
        {"kind": "h", "operands": [1]},
        {"kind": "cnot", "operands": [0, 1]},
        {"kind": "h", "operands": [1]}
      ]
    },
    {
      "name": "Amplitude amplification",
      "gates": [
        {"kind": "h", "operands": [0]},
        {"kind": "h", "operands": [1]},
        {"kind": "x", "operands": [0]},
        {"kind": "x", "operands": [1]},
        {"kind": "h", "operands": [1]},
        {"kind": "cnot", "operands": [0, 1]},
        {"kind": "h", "operands": [1]},
        {"kind": "x", "operands": [0]},
        {"kind": "x", "operands": [1]},
        {"kind": "h", "operands": [0]},
        {"kind": "h", "operands": [1]}
      ]
    }
  ]
}
)json";

inline constexpr std::string_view qft3_json = R"json({
  "qubits": 3,
  "title": "Quantum Fourier transform of |101>",
  "blocks": [
    {
      "name": "State preparation",
      "gates": [
        {"kind": "x", "operands": [0]},
        {"kind": "x", "operands": [2]}
      ]
    },
    {
      "name": "QFT",
      "gates": [
        {"kind": "h", "operands": [0]},
        {"kind": "cp", "operands": [1, 0], "theta": 1.5707963267948966},
        {"kind": "cp", "operands": [2, 0], "theta": 0.7853981633974483},
        {"kind": "h", "operands": [1]},
        {"kind": "cp", "operands": [2, 1], "theta": 1.5707963267948966},
        {"kind": "h", "operands": [2]},
        {"kind": "swap", "operands": [0, 2]}
      ]
    }
  ]
}
)json";

inline const std::vector<Example>& registry() {
    static const std::vector<Example> all{
        {"grover2", "Two-qubit Grover search marking |11>: initialization, oracle, amplitude amplification",
         grover2_json},
        {"qft3", "Three-qubit quantum Fourier transform applied to |101>", qft3_json},
    };
    return all;
}

inline const Example* find(std::string_view name) {
    for (const auto& e : registry())
        if (e.name == name) return &e;
    return nullptr;
}

inline Circuit load(std::string_view name) {
    const Example* e = find(name);
    if (!e) throw NotFound("no bundled example named '" + std::string(name) + "'");
    return parse_circuit_json(e->json_text);
}

} // namespace qlens::examples

#pragma once

#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include "qlens/circuit.hpp"

namespace testing_support {

// Random circuit over the full gate set; blocks are cut at random points.
inline qlens::Circuit random_circuit(std::mt19937_64& rng, std::size_t max_qubits = 5,
                                     std::size_t max_gates = 30) {
    std::uniform_int_distribution<std::size_t> nq(1, max_qubits);
    std::uniform_int_distribution<std::size_t> ng(1, max_gates);
    const std::size_t n = nq(rng);
    const std::size_t count = ng(rng);
    std::uniform_int_distribution<std::size_t> qubit(0, n - 1);
    std::uniform_int_distribution<int> kind(0, n >= 2 ? 4 : 1);
    std::uniform_real_distribution<double> angle(-2 * std::numbers::pi, 4 * std::numbers::pi);
    std::bernoulli_distribution cut(0.2);

    std::vector<qlens::Block> blocks{{"Block 1", {}}};
    for (std::size_t i = 0; i < count; ++i) {
        if (!blocks.back().gates.empty() && cut(rng))
            blocks.push_back({"Block " + std::to_string(blocks.size() + 1), {}});
        const std::size_t a = qubit(rng);
        std::size_t b = qubit(rng);
        while (n >= 2 && b == a) b = qubit(rng);
        switch (kind(rng)) {
        case 0: blocks.back().gates.push_back(qlens::Gate::h(a)); break;
        case 1: blocks.back().gates.push_back(qlens::Gate::x(a)); break;
        case 2: blocks.back().gates.push_back(qlens::Gate::cnot(a, b)); break;
        case 3: blocks.back().gates.push_back(qlens::Gate::swap(a, b)); break;
        default: blocks.back().gates.push_back(qlens::Gate::cp(angle(rng), a, b)); break;
        }
    }
    return qlens::Circuit(n, std::move(blocks));
}

inline std::vector<qlens::Circuit> random_suite(std::size_t count, std::uint64_t seed,
                                                std::size_t max_qubits = 5, std::size_t max_gates = 30) {
    std::mt19937_64 rng(seed);
    std::vector<qlens::Circuit> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_circuit(rng, max_qubits, max_gates));
    return out;
}

} // namespace testing_support

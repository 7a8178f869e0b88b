#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "qlens/basis.hpp"
#include "qlens/circuit.hpp"
#include "qlens/gate_matrix.hpp"

namespace qlens {

// Amplitude a + b·i of one basis state.
using ComplexAmp = Complex;

// Measured probability |α|² = a² + b².
inline double probability_of(ComplexAmp amp) noexcept {
    return amp.real() * amp.real() + amp.imag() * amp.imag();
}

class StateVector {
public:
    StateVector(std::size_t num_qubits, std::vector<ComplexAmp> amps)
        : num_qubits_(num_qubits), amps_(std::move(amps)) {
        if (num_qubits_ == 0 || num_qubits_ > hard_max_qubits)
            throw BoundsError("state vector qubit count out of range");
        if (amps_.size() != (std::size_t{1} << num_qubits_))
            throw BoundsError("state vector needs 2^n amplitudes");
        for (const auto& a : amps_)
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
                throw BoundsError("amplitudes must be finite");
    }

    std::size_t num_qubits() const noexcept { return num_qubits_; }
    std::size_t dim() const noexcept { return amps_.size(); }
    const std::vector<ComplexAmp>& amplitudes() const noexcept { return amps_; }
    ComplexAmp operator[](std::size_t i) const { return amps_[i]; }
    ComplexAmp amplitude(const BasisLabel& label) const { return amps_.at(label.index()); }

    std::vector<double> probabilities() const {
        std::vector<double> out(amps_.size());
        for (std::size_t i = 0; i < amps_.size(); ++i) out[i] = probability_of(amps_[i]);
        return out;
    }

    double norm_squared() const noexcept {
        double s = 0;
        for (const auto& a : amps_) s += probability_of(a);
        return s;
    }

    friend bool operator==(const StateVector&, const StateVector&) = default;

private:
    friend StateVector apply_gate(StateVector, const Gate&);

    std::size_t num_qubits_;
    std::vector<ComplexAmp> amps_;
};

inline StateVector initial_state(std::size_t num_qubits,
                                 std::size_t max_qubits = default_max_qubits) {
    if (num_qubits == 0 || num_qubits > std::min(max_qubits, hard_max_qubits))
        throw BoundsError("qubit count " + std::to_string(num_qubits) + " outside [1, " +
                          std::to_string(std::min(max_qubits, hard_max_qubits)) + "]");
    std::vector<ComplexAmp> amps(std::size_t{1} << num_qubits);
    amps[0] = 1.0;
    return {num_qubits, std::move(amps)};
}

// Bit-indexed in-place update; agrees with gate_matrix(gate, n) · state.
inline StateVector apply_gate(StateVector state, const Gate& gate) {
    const std::size_t n = state.num_qubits_;
    check_operands(gate, n);
    auto& amps = state.amps_;
    const auto ops = gate.operands();
    const std::size_t dim = amps.size();
    const std::size_t m0 = qubit_mask(n, ops[0]);
    const std::size_t m1 = ops.size() > 1 ? qubit_mask(n, ops[1]) : 0;

    switch (gate.kind()) {
    case GateKind::H: {
        const double s = 1.0 / std::numbers::sqrt2;
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & m0) continue;
            const ComplexAmp a0 = amps[i];
            const ComplexAmp a1 = amps[i | m0];
            amps[i] = s * (a0 + a1);
            amps[i | m0] = s * (a0 - a1);
        }
        break;
    }
    case GateKind::X:
        for (std::size_t i = 0; i < dim; ++i)
            if (!(i & m0)) std::swap(amps[i], amps[i | m0]);
        break;
    case GateKind::CNOT:
        for (std::size_t i = 0; i < dim; ++i)
            if ((i & m0) && !(i & m1)) std::swap(amps[i], amps[i | m1]);
        break;
    case GateKind::SWAP:
        for (std::size_t i = 0; i < dim; ++i)
            if ((i & m0) && !(i & m1)) std::swap(amps[i], amps[(i & ~m0) | m1]);
        break;
    case GateKind::CP: {
        const ComplexAmp phase = std::polar(1.0, gate.theta());
        for (std::size_t i = 0; i < dim; ++i)
            if ((i & m0) && (i & m1)) amps[i] *= phase;
        break;
    }
    }
    return state;
}

inline StateVector apply_step(StateVector state, const Step& step) {
    return apply_gate(std::move(state), step.gate);
}

// Whole-circuit trace. states[0] is |0…0⟩, states[s + 1] follows step s.
struct StepTrace {
    Circuit circuit;
    std::vector<Step> steps;
    std::vector<StateVector> states;
    std::vector<std::vector<double>> probs;

    std::size_t step_count() const noexcept { return steps.size(); }
    std::size_t num_qubits() const noexcept { return circuit.num_qubits(); }
};

inline StepTrace simulate(const Circuit& circuit) {
    StepTrace trace{circuit, flatten(circuit), {}, {}};
    trace.states.reserve(trace.steps.size() + 1);
    trace.states.push_back(initial_state(circuit.num_qubits(), hard_max_qubits));
    for (const auto& step : trace.steps) trace.states.push_back(apply_step(trace.states.back(), step));
    trace.probs.reserve(trace.states.size());
    for (const auto& s : trace.states) trace.probs.push_back(s.probabilities());
    return trace;
}

} // namespace qlens

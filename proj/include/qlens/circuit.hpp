#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qlens/errors.hpp"

namespace qlens {

inline constexpr std::size_t default_max_qubits = 12;
// Upper bound for a configured cap; beyond this a dense state no longer fits
// comfortably in memory next to the per-step trace.
inline constexpr std::size_t hard_max_qubits = 20;

enum class GateKind { H, X, CNOT, SWAP, CP };

constexpr std::string_view kind_name(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::CNOT: return "cnot";
    case GateKind::SWAP: return "swap";
    case GateKind::CP: return "cp";
    }
    return "?";
}

constexpr std::size_t arity(GateKind kind) noexcept {
    return (kind == GateKind::H || kind == GateKind::X) ? 1 : 2;
}

inline std::optional<GateKind> kind_from_name(std::string_view name) noexcept {
    for (GateKind k : {GateKind::H, GateKind::X, GateKind::CNOT, GateKind::SWAP, GateKind::CP})
        if (kind_name(k) == name) return k;
    return std::nullopt;
}

// Reduces an angle into [0, 2π).
inline double reduce_angle(double theta) {
    if (!std::isfinite(theta)) throw SchemaError("phase angle must be finite");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(theta, two_pi);
    if (r < 0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return r;
}

// One gate application. Operand order for CNOT and CP is (control, target).
class Gate {
public:
    static Gate h(std::size_t q) { return Gate(GateKind::H, {q}, 0.0); }
    static Gate x(std::size_t q) { return Gate(GateKind::X, {q}, 0.0); }
    static Gate cnot(std::size_t control, std::size_t target) {
        return Gate(GateKind::CNOT, {control, target}, 0.0);
    }
    static Gate swap(std::size_t a, std::size_t b) { return Gate(GateKind::SWAP, {a, b}, 0.0); }
    static Gate cp(double theta, std::size_t control, std::size_t target) {
        return Gate(GateKind::CP, {control, target}, reduce_angle(theta));
    }

    // Generic constructor used by the parsers. Theta is ignored unless kind is CP.
    static Gate make(GateKind kind, std::vector<std::size_t> operands, double theta = 0.0) {
        return Gate(kind, std::move(operands), kind == GateKind::CP ? reduce_angle(theta) : 0.0);
    }

    GateKind kind() const noexcept { return kind_; }
    std::span<const std::size_t> operands() const noexcept { return operands_; }
    std::size_t operand(std::size_t i) const { return operands_.at(i); }
    double theta() const noexcept { return theta_; }

    bool touches(std::size_t qubit) const noexcept {
        for (auto q : operands_)
            if (q == qubit) return true;
        return false;
    }

    // Display name used in diagrams and text export: h, x, cx, swap, cp.
    std::string mnemonic() const {
        return kind_ == GateKind::CNOT ? "cx" : std::string(kind_name(kind_));
    }

    friend bool operator==(const Gate&, const Gate&) = default;

private:
    Gate(GateKind kind, std::vector<std::size_t> operands, double theta)
        : kind_(kind), operands_(std::move(operands)), theta_(theta) {
        if (operands_.size() != arity(kind_))
            throw SchemaError("gate '" + std::string(kind_name(kind_)) + "' takes " +
                              std::to_string(arity(kind_)) + " operand(s), got " +
                              std::to_string(operands_.size()));
        if (operands_.size() == 2 && operands_[0] == operands_[1])
            throw SchemaError("gate '" + std::string(kind_name(kind_)) +
                              "' operands must be distinct qubits");
    }

    GateKind kind_;
    std::vector<std::size_t> operands_;
    double theta_;
};

struct Block {
    std::string name;
    std::vector<Gate> gates;

    friend bool operator==(const Block&, const Block&) = default;
};

struct Step {
    std::size_t step_index = 0;
    std::size_t block_index = 0;
    Gate gate;

    friend bool operator==(const Step&, const Step&) = default;
};

// Validated circuit; immutable after construction.
class Circuit {
public:
    Circuit(std::size_t num_qubits, std::vector<Block> blocks,
            std::optional<std::string> title = std::nullopt,
            std::size_t max_qubits = default_max_qubits)
        : num_qubits_(num_qubits), blocks_(std::move(blocks)), title_(std::move(title)) {
        if (num_qubits_ == 0) throw BoundsError("circuit needs at least one qubit");
        if (max_qubits > hard_max_qubits) max_qubits = hard_max_qubits;
        if (num_qubits_ > max_qubits)
            throw CapExceeded("circuit has " + std::to_string(num_qubits_) +
                              " qubits, cap is " + std::to_string(max_qubits));
        if (blocks_.empty()) throw EmptyCircuit("circuit has no blocks");
        for (const auto& block : blocks_) {
            if (block.gates.empty())
                throw EmptyCircuit("block '" + block.name + "' has no gates");
            for (const auto& gate : block.gates)
                for (auto q : gate.operands())
                    if (q >= num_qubits_)
                        throw BoundsError("qubit index " + std::to_string(q) +
                                          " out of range for " + std::to_string(num_qubits_) +
                                          " qubits");
        }
    }

    std::size_t num_qubits() const noexcept { return num_qubits_; }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    const std::optional<std::string>& title() const noexcept { return title_; }

    std::size_t gate_count() const noexcept {
        std::size_t n = 0;
        for (const auto& b : blocks_) n += b.gates.size();
        return n;
    }

    friend bool operator==(const Circuit&, const Circuit&) = default;

private:
    std::size_t num_qubits_;
    std::vector<Block> blocks_;
    std::optional<std::string> title_;
};

// Concatenates blocks into single-gate steps, preserving authored order.
inline std::vector<Step> flatten(const Circuit& circuit) {
    std::vector<Step> steps;
    steps.reserve(circuit.gate_count());
    for (std::size_t b = 0; b < circuit.blocks().size(); ++b)
        for (const auto& gate : circuit.blocks()[b].gates)
            steps.push_back(Step{steps.size(), b, gate});
    return steps;
}

struct BlockSpan {
    std::string name;
    std::size_t first_step = 0;
    std::size_t last_step = 0;

    friend bool operator==(const BlockSpan&, const BlockSpan&) = default;
};

inline std::vector<BlockSpan> block_spans(const Circuit& circuit) {
    std::vector<BlockSpan> spans;
    std::size_t next = 0;
    for (const auto& block : circuit.blocks()) {
        spans.push_back({block.name, next, next + block.gates.size() - 1});
        next += block.gates.size();
    }
    return spans;
}

} // namespace qlens

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "qlens/basis.hpp"
#include "qlens/circuit.hpp"
#include "qlens/gate_matrix.hpp"
#include "qlens/statevec.hpp"

namespace qlens {

namespace tolerance {
inline constexpr double alive = 1e-9;  // node existence, on probability
inline constexpr double edge = 1e-9;   // edge existence, on |contribution|
inline constexpr double group = 1e-6;  // probability-equality grouping
inline constexpr int group_decimals = 6;
// Real parts within this distance of zero count as zero for sign classing.
inline constexpr double sign_zero = 1e-12;
} // namespace tolerance

inline bool is_alive(ComplexAmp amp) noexcept { return probability_of(amp) > tolerance::alive; }

// ---------------------------------------------------------------------------
// Probability summary

struct ProbabilitySummary {
    std::size_t step_count = 0;
    std::vector<BasisLabel> labels;
    std::vector<std::vector<double>> matrix;  // [state index][basis index]
    std::vector<BlockSpan> block_spans;
    std::vector<std::optional<std::size_t>> creations;  // first alive state index

    friend bool operator==(const ProbabilitySummary&, const ProbabilitySummary&) = default;
};

inline ProbabilitySummary build_summary(const StepTrace& trace) {
    ProbabilitySummary out;
    out.step_count = trace.step_count();
    out.labels = all_labels(trace.num_qubits());
    out.matrix = trace.probs;
    out.block_spans = block_spans(trace.circuit);
    out.creations.assign(out.labels.size(), std::nullopt);
    for (std::size_t s = 0; s < out.matrix.size(); ++s)
        for (std::size_t i = 0; i < out.labels.size(); ++i)
            if (!out.creations[i] && out.matrix[s][i] > tolerance::alive) out.creations[i] = s;
    return out;
}

// ---------------------------------------------------------------------------
// Evolution graph

enum class SignClass { Positive, Negative };

constexpr std::string_view sign_name(SignClass s) noexcept {
    return s == SignClass::Positive ? "positive" : "negative";
}

inline SignClass sign_of(ComplexAmp amp) noexcept {
    return amp.real() >= -tolerance::sign_zero ? SignClass::Positive : SignClass::Negative;
}

// Identifies a node: state index (0 = before the first gate) and basis index.
struct NodeKey {
    std::size_t step = 0;
    std::size_t index = 0;

    friend bool operator==(const NodeKey&, const NodeKey&) = default;
    friend auto operator<=>(const NodeKey&, const NodeKey&) = default;
};

struct EvolutionNode {
    std::size_t step = 0;
    BasisLabel label;
    ComplexAmp amp;
    double prob = 0;
    SignClass sign_class = SignClass::Positive;

    NodeKey key() const noexcept { return {step, label.index()}; }
    friend bool operator==(const EvolutionNode&, const EvolutionNode&) = default;
};

struct EvolutionEdge {
    NodeKey from;
    NodeKey to;
    ComplexAmp contribution;  // α_from · U[to, from]

    friend bool operator==(const EvolutionEdge&, const EvolutionEdge&) = default;
};

struct Hub {
    std::size_t step = 0;
    double prob = 0;
    std::vector<BasisLabel> members;

    friend bool operator==(const Hub&, const Hub&) = default;
};

struct EvolutionGraph {
    std::size_t num_qubits = 1;
    std::size_t from_step = 0;
    std::size_t to_step = 0;
    std::vector<EvolutionNode> nodes;  // sorted by (step, index)
    std::vector<EvolutionEdge> edges;  // sorted by (from, to)
    std::vector<Hub> hubs;             // per step, descending probability

    const EvolutionNode* find(NodeKey key) const {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), key,
                                   [](const EvolutionNode& n, NodeKey k) { return n.key() < k; });
        return (it != nodes.end() && it->key() == key) ? &*it : nullptr;
    }

    std::vector<const EvolutionNode*> nodes_at(std::size_t step) const {
        std::vector<const EvolutionNode*> out;
        for (const auto& n : nodes)
            if (n.step == step) out.push_back(&n);
        return out;
    }

    friend bool operator==(const EvolutionGraph&, const EvolutionGraph&) = default;
};

// Rounds to group_decimals places and partitions on exact equality, so the
// grouping is transitive and independent of node order.
inline std::vector<Hub> group_hubs(const std::vector<EvolutionNode>& nodes) {
    constexpr double scale = 1e6;
    static_assert(tolerance::group_decimals == 6);
    std::map<std::pair<std::size_t, std::int64_t>, std::vector<BasisLabel>> groups;
    for (const auto& n : nodes)
        groups[{n.step, -std::llround(n.prob * scale)}].push_back(n.label);
    std::vector<Hub> hubs;
    hubs.reserve(groups.size());
    for (auto& [key, members] : groups) {
        std::sort(members.begin(), members.end());
        hubs.push_back({key.first, static_cast<double>(-key.second) / scale, std::move(members)});
    }
    return hubs;
}

inline EvolutionGraph build_evolution(const StepTrace& trace, std::size_t from_step,
                                      std::size_t to_step) {
    if (from_step > to_step || to_step > trace.step_count())
        throw RangeError("evolution range [" + std::to_string(from_step) + ", " +
                         std::to_string(to_step) + "] outside [0, " +
                         std::to_string(trace.step_count()) + "]");
    const std::size_t n = trace.num_qubits();
    EvolutionGraph g;
    g.num_qubits = n;
    g.from_step = from_step;
    g.to_step = to_step;

    for (std::size_t s = from_step; s <= to_step; ++s) {
        const auto& state = trace.states[s];
        for (std::size_t i = 0; i < state.dim(); ++i)
            if (is_alive(state[i]))
                g.nodes.push_back({s, BasisLabel(n, i), state[i], probability_of(state[i]),
                                   sign_of(state[i])});
    }

    for (std::size_t s = from_step; s < to_step; ++s) {
        const auto& pre = trace.states[s];
        const auto& post = trace.states[s + 1];
        const Gate& gate = trace.steps[s].gate;
        for (std::size_t x = 0; x < pre.dim(); ++x) {
            if (!is_alive(pre[x])) continue;
            for (const auto& [y, u] : gate_column(gate, n, x)) {
                const ComplexAmp contribution = pre[x] * u;
                if (!is_alive(post[y]) || std::abs(contribution) <= tolerance::edge) continue;
                g.edges.push_back({{s, x}, {s + 1, y}, contribution});
            }
        }
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const EvolutionEdge& a, const EvolutionEdge& b) {
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    g.hubs = group_hubs(g.nodes);
    return g;
}

// Restriction of a full-range graph to [from_step, to_step]. Edges only link
// adjacent steps, so this equals build_evolution over the same range.
inline EvolutionGraph slice_evolution(const EvolutionGraph& graph, std::size_t from_step,
                                      std::size_t to_step) {
    if (from_step > to_step || from_step < graph.from_step || to_step > graph.to_step)
        throw RangeError("evolution range [" + std::to_string(from_step) + ", " +
                         std::to_string(to_step) + "] outside [" + std::to_string(graph.from_step) +
                         ", " + std::to_string(graph.to_step) + "]");
    EvolutionGraph out;
    out.num_qubits = graph.num_qubits;
    out.from_step = from_step;
    out.to_step = to_step;
    for (const auto& n : graph.nodes)
        if (n.step >= from_step && n.step <= to_step) out.nodes.push_back(n);
    for (const auto& e : graph.edges)
        if (e.from.step >= from_step && e.to.step <= to_step) out.edges.push_back(e);
    out.hubs = group_hubs(out.nodes);
    return out;
}

// Ancestry of `target`: every node and edge on a path from the graph's first
// step into it.
inline EvolutionGraph trace_back(const EvolutionGraph& graph, NodeKey target) {
    if (!graph.find(target))
        throw NodeNotFound("no node for basis index " + std::to_string(target.index) +
                           " at step " + std::to_string(target.step));
    std::set<NodeKey> keep{target};
    // Edges are sorted by source step, so a reverse sweep visits each step's
    // incoming edges after all later steps are settled.
    std::vector<EvolutionEdge> kept_edges;
    for (auto it = graph.edges.rbegin(); it != graph.edges.rend(); ++it) {
        if (keep.contains(it->to)) {
            keep.insert(it->from);
            kept_edges.push_back(*it);
        }
    }
    EvolutionGraph out;
    out.num_qubits = graph.num_qubits;
    out.from_step = graph.from_step;
    out.to_step = graph.to_step;
    for (const auto& node : graph.nodes)
        if (keep.contains(node.key())) out.nodes.push_back(node);
    std::reverse(kept_edges.begin(), kept_edges.end());
    out.edges = std::move(kept_edges);
    out.hubs = group_hubs(out.nodes);
    return out;
}

// ---------------------------------------------------------------------------
// Gate explanation

enum class QubitOperation { Hadamard, Not, Control, Target, SwapPair, Phase, None };

constexpr std::string_view operation_name(QubitOperation op) noexcept {
    switch (op) {
    case QubitOperation::Hadamard: return "hadamard";
    case QubitOperation::Not: return "not";
    case QubitOperation::Control: return "control";
    case QubitOperation::Target: return "target";
    case QubitOperation::SwapPair: return "swap_pair";
    case QubitOperation::Phase: return "phase";
    case QubitOperation::None: return "none";
    }
    return "none";
}

struct QubitRow {
    std::size_t qubit = 0;
    int initial = 0;
    QubitOperation operation = QubitOperation::None;
    std::vector<int> finals;

    friend bool operator==(const QubitRow&, const QubitRow&) = default;
};

struct GateExplanation {
    std::size_t step = 0;
    BasisLabel input_label;
    std::vector<QubitRow> rows;  // one per qubit, qubit 0 first
    std::vector<BasisLabel> output_labels;

    friend bool operator==(const GateExplanation&, const GateExplanation&) = default;
};

// Per-qubit view of how `step`'s gate acts on a single basis label.
inline GateExplanation explain_gate(const Step& step, const BasisLabel& input) {
    const std::size_t n = input.num_qubits();
    check_operands(step.gate, n);
    const auto ops = step.gate.operands();

    GateExplanation out{step.step_index, input, {}, {}};
    out.rows.reserve(n);
    for (std::size_t q = 0; q < n; ++q)
        out.rows.push_back({q, input.bit(q), QubitOperation::None, {input.bit(q)}});

    auto& r0 = out.rows[ops[0]];
    switch (step.gate.kind()) {
    case GateKind::H:
        r0.operation = QubitOperation::Hadamard;
        r0.finals = {0, 1};
        out.output_labels = {input.with_bit(ops[0], 0), input.with_bit(ops[0], 1)};
        break;
    case GateKind::X:
        r0.operation = QubitOperation::Not;
        r0.finals = {1 - r0.initial};
        out.output_labels = {input.with_bit(ops[0], 1 - r0.initial)};
        break;
    case GateKind::CNOT: {
        auto& tgt = out.rows[ops[1]];
        r0.operation = QubitOperation::Control;
        tgt.operation = QubitOperation::Target;
        const int flipped = r0.initial ? 1 - tgt.initial : tgt.initial;
        tgt.finals = {flipped};
        out.output_labels = {input.with_bit(ops[1], flipped)};
        break;
    }
    case GateKind::SWAP: {
        auto& r1 = out.rows[ops[1]];
        r0.operation = r1.operation = QubitOperation::SwapPair;
        r0.finals = {r1.initial};
        r1.finals = {r0.initial};
        out.output_labels = {input.with_bit(ops[0], r1.initial).with_bit(ops[1], r0.initial)};
        break;
    }
    case GateKind::CP:
        r0.operation = out.rows[ops[1]].operation = QubitOperation::Phase;
        out.output_labels = {input};
        break;
    }
    return out;
}

inline GateExplanation explain_gate(const StepTrace& trace, std::size_t step,
                                    const BasisLabel& input) {
    if (step >= trace.step_count())
        throw RangeError("step " + std::to_string(step) + " outside [0, " +
                         std::to_string(trace.step_count()) + ")");
    if (input.num_qubits() != trace.num_qubits())
        throw BoundsError("label '" + input.bits() + "' does not match the register width");
    if (!is_alive(trace.states[step].amplitude(input)))
        throw DeadState("basis state |" + input.bits() + "> is not populated before step " +
                        std::to_string(step));
    return explain_gate(trace.steps[step], input);
}

// State before and after gate `step`.
inline std::pair<StateVector, StateVector> amplitude_pair(const StepTrace& trace,
                                                          std::size_t step) {
    if (step >= trace.step_count())
        throw RangeError("step " + std::to_string(step) + " outside [0, " +
                         std::to_string(trace.step_count()) + ")");
    return {trace.states[step], trace.states[step + 1]};
}

} // namespace qlens

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qlens/circuit.hpp"
#include "qlens/errors.hpp"

namespace qlens {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// JSON circuit documents
//
//   {"qubits": int, "title": string?,
//    "blocks": [{"name": string,
//                "gates": [{"kind": "h"|"x"|"cnot"|"swap"|"cp",
//                           "operands": [int, ...], "theta": number?}]}]}

namespace detail {

inline void require_object(const json& j, std::string_view what,
                           std::initializer_list<std::string_view> required,
                           std::initializer_list<std::string_view> optional = {}) {
    if (!j.is_object()) throw SchemaError(std::string(what) + " must be an object");
    for (auto key : required)
        if (!j.contains(key)) throw SchemaError(std::string(what) + " is missing \"" + std::string(key) + "\"");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto k : required) known = known || k == key;
        for (auto k : optional) known = known || k == key;
        if (!known) throw SchemaError(std::string(what) + " has unexpected field \"" + key + "\"");
    }
}

inline long long require_integer(const json& j, std::string_view what) {
    if (!j.is_number_integer()) throw SchemaError(std::string(what) + " must be an integer");
    return j.get<long long>();
}

} // namespace detail

inline Circuit circuit_from_json(const json& doc, std::size_t max_qubits = default_max_qubits) {
    detail::require_object(doc, "circuit", {"qubits", "blocks"}, {"title"});
    const long long qubits = detail::require_integer(doc["qubits"], "\"qubits\"");
    if (qubits < 1) throw BoundsError("\"qubits\" must be at least 1");

    std::optional<std::string> title;
    if (doc.contains("title")) {
        if (!doc["title"].is_string()) throw SchemaError("\"title\" must be a string");
        title = doc["title"].get<std::string>();
    }

    const json& blocks_doc = doc["blocks"];
    if (!blocks_doc.is_array()) throw SchemaError("\"blocks\" must be an array");
    if (blocks_doc.empty()) throw EmptyCircuit("circuit has no blocks");

    std::vector<Block> blocks;
    for (const auto& bdoc : blocks_doc) {
        detail::require_object(bdoc, "block", {"name", "gates"});
        if (!bdoc["name"].is_string()) throw SchemaError("block \"name\" must be a string");
        if (!bdoc["gates"].is_array()) throw SchemaError("block \"gates\" must be an array");
        Block block{bdoc["name"].get<std::string>(), {}};
        for (const auto& gdoc : bdoc["gates"]) {
            detail::require_object(gdoc, "gate", {"kind", "operands"}, {"theta"});
            if (!gdoc["kind"].is_string()) throw SchemaError("gate \"kind\" must be a string");
            const auto name = gdoc["kind"].get<std::string>();
            const auto kind = kind_from_name(name);
            if (!kind) throw SchemaError("unknown gate kind \"" + name + "\"");
            if (!gdoc["operands"].is_array()) throw SchemaError("gate \"operands\" must be an array");
            std::vector<std::size_t> operands;
            for (const auto& o : gdoc["operands"]) {
                const long long q = detail::require_integer(o, "operand");
                if (q < 0) throw BoundsError("negative qubit index " + std::to_string(q));
                operands.push_back(static_cast<std::size_t>(q));
            }
            double theta = 0.0;
            if (*kind == GateKind::CP) {
                if (!gdoc.contains("theta")) throw SchemaError("cp gate requires \"theta\"");
                if (!gdoc["theta"].is_number()) throw SchemaError("\"theta\" must be a number");
                theta = gdoc["theta"].get<double>();
            } else if (gdoc.contains("theta")) {
                throw SchemaError("\"theta\" is only allowed on cp gates");
            }
            block.gates.push_back(Gate::make(*kind, std::move(operands), theta));
        }
        blocks.push_back(std::move(block));
    }
    return Circuit(static_cast<std::size_t>(qubits), std::move(blocks), std::move(title), max_qubits);
}

inline Circuit parse_circuit_json(std::string_view text, std::size_t max_qubits = default_max_qubits) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    return circuit_from_json(doc, max_qubits);
}

inline json gate_to_json(const Gate& gate) {
    json j{{"kind", kind_name(gate.kind())}, {"operands", json::array()}};
    for (auto q : gate.operands()) j["operands"].push_back(q);
    if (gate.kind() == GateKind::CP) j["theta"] = gate.theta();
    return j;
}

inline json circuit_to_json(const Circuit& circuit) {
    json j{{"qubits", circuit.num_qubits()}, {"blocks", json::array()}};
    if (circuit.title()) j["title"] = *circuit.title();
    for (const auto& block : circuit.blocks()) {
        json b{{"name", block.name}, {"gates", json::array()}};
        for (const auto& g : block.gates) b["gates"].push_back(gate_to_json(g));
        j["blocks"].push_back(std::move(b));
    }
    return j;
}

// ---------------------------------------------------------------------------
// Line-oriented text format
//
//   qreg q[N]                 exactly once, before any gate
//   h q[i] | x q[i]
//   cx q[c],q[t] | swap q[a],q[b] | cp(θ) q[c],q[t]
//   barrier                   closes the current block
//
// Statements end at ';' or end of line; "//" starts a comment. θ is a
// decimal literal, pi, pi/K, K*pi or K*pi/M, optionally negated.

namespace detail {

class StatementCursor {
public:
    StatementCursor(std::string_view text, std::size_t line, std::size_t column)
        : text_(text), line_(line), column_(column) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    std::string identifier() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_) fail("expected identifier");
        return std::string(text_.substr(start, pos_ - start));
    }

    bool peek_identifier(std::string_view word) {
        skip_space();
        if (text_.substr(pos_, word.size()) != word) return false;
        const std::size_t end = pos_ + word.size();
        return end >= text_.size() ||
               !(std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_');
    }

    std::size_t unsigned_integer() {
        skip_space();
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
        if (ec != std::errc{} || ptr == text_.data() + pos_) fail("expected non-negative integer");
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return value;
    }

    double decimal() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                text_[pos_] == 'e' || text_[pos_] == 'E' ||
                ((text_[pos_] == '-' || text_[pos_] == '+') && pos_ > start &&
                 (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
            ++pos_;
        const std::string token(text_.substr(start, pos_ - start));
        if (token.empty()) fail("expected number");
        std::istringstream in(token);
        in.imbue(std::locale::classic());
        double v = 0;
        in >> v;
        if (in.fail() || !in.eof()) {
            pos_ = start;
            fail("malformed number '" + token + "'");
        }
        return v;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(line_, column_ + pos_, message);
    }

    [[noreturn]] void fail_at(std::size_t column, const std::string& message) const {
        throw ParseError(line_, column, message);
    }

    // Column of the next token.
    std::size_t column() {
        skip_space();
        return column_ + pos_;
    }

private:
    std::string_view text_;
    std::size_t line_;
    std::size_t column_;  // 1-based column of text_[0]
    std::size_t pos_ = 0;
};

inline double parse_angle(StatementCursor& cur) {
    const bool negative = cur.accept('-');
    double value = 0;
    if (cur.peek_identifier("pi")) {
        cur.identifier();
        value = std::numbers::pi;
    } else {
        value = cur.decimal();
        if (cur.accept('*')) {
            if (!cur.peek_identifier("pi")) cur.fail("expected 'pi'");
            cur.identifier();
            value *= std::numbers::pi;
        }
    }
    if (cur.accept('/')) {
        const double d = cur.decimal();
        if (d == 0.0) cur.fail("division by zero in angle");
        value /= d;
    }
    return negative ? -value : value;
}

inline std::size_t parse_qubit_ref(StatementCursor& cur, const std::string& reg) {
    const std::size_t col = cur.column();
    const auto name = cur.identifier();
    if (name != reg) cur.fail_at(col, "unknown register '" + name + "'");
    cur.expect('[');
    const auto q = cur.unsigned_integer();
    cur.expect(']');
    return q;
}

} // namespace detail

inline Circuit parse_circuit_text(std::string_view text, std::size_t max_qubits = default_max_qubits) {
    std::optional<std::size_t> qubits;
    std::string reg;
    std::vector<Block> blocks;
    std::vector<Gate> current;

    const auto close_block = [&] {
        if (current.empty()) return;
        blocks.push_back({"Block " + std::to_string(blocks.size() + 1), std::move(current)});
        current.clear();
    };

    std::size_t line_no = 0;
    std::size_t line_start = 0;
    while (line_start <= text.size()) {
        ++line_no;
        std::size_t line_end = text.find('\n', line_start);
        if (line_end == std::string_view::npos) line_end = text.size();
        std::string_view line = text.substr(line_start, line_end - line_start);
        if (auto c = line.find("//"); c != std::string_view::npos) line = line.substr(0, c);

        std::size_t stmt_start = 0;
        while (stmt_start <= line.size()) {
            std::size_t stmt_end = line.find(';', stmt_start);
            if (stmt_end == std::string_view::npos) stmt_end = line.size();
            const std::string_view stmt = line.substr(stmt_start, stmt_end - stmt_start);
            detail::StatementCursor cur(stmt, line_no, stmt_start + 1);

            if (!cur.at_end()) {
                const std::size_t col = cur.column();
                const std::string word = cur.identifier();
                if (word == "qreg") {
                    if (qubits) cur.fail("duplicate qreg declaration");
                    reg = cur.identifier();
                    cur.expect('[');
                    qubits = cur.unsigned_integer();
                    cur.expect(']');
                    if (*qubits == 0) cur.fail("register needs at least one qubit");
                    if (*qubits > std::min(max_qubits, hard_max_qubits))
                        throw CapExceeded("register has " + std::to_string(*qubits) +
                                          " qubits, cap is " +
                                          std::to_string(std::min(max_qubits, hard_max_qubits)));
                } else if (word == "barrier") {
                    if (!qubits) cur.fail("barrier before qreg declaration");
                    close_block();
                    // Operand lists on barriers are accepted and ignored.
                    while (!cur.at_end()) {
                        detail::parse_qubit_ref(cur, reg);
                        if (!cur.accept(',')) break;
                    }
                } else {
                    std::optional<GateKind> kind;
                    if (word == "h") kind = GateKind::H;
                    else if (word == "x") kind = GateKind::X;
                    else if (word == "cx") kind = GateKind::CNOT;
                    else if (word == "swap") kind = GateKind::SWAP;
                    else if (word == "cp") kind = GateKind::CP;
                    else throw UnsupportedGate(word);
                    if (!qubits) cur.fail_at(col, "gate before qreg declaration");

                    double theta = 0.0;
                    if (*kind == GateKind::CP) {
                        cur.expect('(');
                        theta = detail::parse_angle(cur);
                        cur.expect(')');
                    }
                    std::vector<std::size_t> operands;
                    do {
                        const std::size_t ocol = cur.column();
                        const auto q = detail::parse_qubit_ref(cur, reg);
                        if (q >= *qubits)
                            throw BoundsError("line " + std::to_string(line_no) + ", column " +
                                              std::to_string(ocol) + ": qubit index " +
                                              std::to_string(q) + " out of range");
                        operands.push_back(q);
                    } while (cur.accept(','));
                    if (!cur.at_end()) cur.fail("expected ',' or end of statement");
                    if (operands.size() != arity(*kind))
                        cur.fail_at(col, "'" + word + "' takes " +
                                             std::to_string(arity(*kind)) + " operand(s)");
                    if (operands.size() == 2 && operands[0] == operands[1])
                        cur.fail_at(col, "'" + word + "' operands must differ");
                    current.push_back(Gate::make(*kind, std::move(operands), theta));
                }
                if (!cur.at_end()) cur.fail("unexpected trailing input");
            }
            stmt_start = stmt_end + 1;
        }
        line_start = line_end + 1;
    }
    if (!qubits) throw ParseError(line_no, 1, "missing qreg declaration");
    close_block();
    if (blocks.empty()) throw EmptyCircuit("circuit has no gates");
    return Circuit(*qubits, std::move(blocks), std::nullopt, max_qubits);
}

inline std::string format_angle(double theta) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out.precision(17);
    out << theta;
    return out.str();
}

// Text form of `circuit`. Block names and the title do not survive; blocks
// are separated by barrier lines.
inline std::string serialize_text(const Circuit& circuit) {
    std::ostringstream out;
    if (circuit.title()) out << "// " << *circuit.title() << '\n';
    out << "qreg q[" << circuit.num_qubits() << "];\n";
    for (std::size_t b = 0; b < circuit.blocks().size(); ++b) {
        if (b > 0) out << "barrier;\n";
        for (const auto& g : circuit.blocks()[b].gates) {
            out << g.mnemonic();
            if (g.kind() == GateKind::CP) out << '(' << format_angle(g.theta()) << ')';
            out << ' ';
            for (std::size_t i = 0; i < g.operands().size(); ++i)
                out << (i ? "," : "") << "q[" << g.operands()[i] << ']';
            out << ";\n";
        }
    }
    return out.str();
}

// Dispatches on content: a document starting with '{' is JSON, anything else
// is the text format.
inline Circuit parse_circuit(std::string_view text, std::size_t max_qubits = default_max_qubits) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '{') return parse_circuit_json(text, max_qubits);
        break;
    }
    return parse_circuit_text(text, max_qubits);
}

} // namespace qlens

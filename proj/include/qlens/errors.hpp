#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qlens {

// Base of every error the library raises. code() is the stable identifier
// used in API error bodies ({"error": code, "detail": what()}).
class Error : public std::runtime_error {
public:
    Error(std::string_view code, const std::string& detail)
        : std::runtime_error(detail), code_(code) {}

    std::string_view code() const noexcept { return code_; }

private:
    std::string_view code_;
};

#define QLENS_DEFINE_ERROR(Name, Code)                                      \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& detail) : Error(Code, detail) {}   \
    }

QLENS_DEFINE_ERROR(SchemaError, "schema_error");
QLENS_DEFINE_ERROR(BoundsError, "bounds_error");
QLENS_DEFINE_ERROR(EmptyCircuit, "empty_circuit");
QLENS_DEFINE_ERROR(RangeError, "range_error");
QLENS_DEFINE_ERROR(NodeNotFound, "node_not_found");
QLENS_DEFINE_ERROR(DeadState, "dead_state");
QLENS_DEFINE_ERROR(BadScale, "bad_scale");
QLENS_DEFINE_ERROR(CapExceeded, "cap_exceeded");
QLENS_DEFINE_ERROR(IoError, "io_error");
QLENS_DEFINE_ERROR(NotFound, "not_found");
QLENS_DEFINE_ERROR(BindError, "bind_error");

#undef QLENS_DEFINE_ERROR

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error("parse_error", "line " + std::to_string(line) + ", column " +
                                   std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class UnsupportedGate : public Error {
public:
    explicit UnsupportedGate(std::string mnemonic)
        : Error("unsupported_gate", "unsupported gate '" + mnemonic + "'"),
          mnemonic_(std::move(mnemonic)) {}

    const std::string& mnemonic() const noexcept { return mnemonic_; }

private:
    std::string mnemonic_;
};

} // namespace qlens

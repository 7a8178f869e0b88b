#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qlens/errors.hpp"

namespace qlens {

// Basis-state label. Qubit 0 is the leftmost character of the written label
// and the most significant bit of the index.
class BasisLabel {
public:
    BasisLabel() = default;

    BasisLabel(std::size_t num_qubits, std::size_t index)
        : num_qubits_(num_qubits), index_(index) {
        if (num_qubits == 0 || num_qubits > 63 || index >= (std::size_t{1} << num_qubits))
            throw BoundsError("basis index " + std::to_string(index) +
                              " out of range for " + std::to_string(num_qubits) + " qubits");
    }

    static BasisLabel from_bits(std::string_view bits) {
        if (bits.empty() || bits.size() > 63)
            throw BoundsError("basis label must have 1..63 characters");
        std::size_t index = 0;
        for (char c : bits) {
            if (c != '0' && c != '1')
                throw BoundsError("basis label '" + std::string(bits) + "' is not a bit string");
            index = (index << 1) | static_cast<std::size_t>(c - '0');
        }
        return {bits.size(), index};
    }

    std::size_t num_qubits() const noexcept { return num_qubits_; }
    std::size_t index() const noexcept { return index_; }

    int bit(std::size_t qubit) const noexcept {
        return static_cast<int>((index_ >> (num_qubits_ - 1 - qubit)) & 1U);
    }

    BasisLabel with_bit(std::size_t qubit, int value) const {
        const std::size_t mask = std::size_t{1} << (num_qubits_ - 1 - qubit);
        return {num_qubits_, value ? (index_ | mask) : (index_ & ~mask)};
    }

    std::string bits() const {
        std::string out(num_qubits_, '0');
        for (std::size_t q = 0; q < num_qubits_; ++q)
            if (bit(q)) out[q] = '1';
        return out;
    }

    friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
    friend auto operator<=>(const BasisLabel& a, const BasisLabel& b) {
        return a.index_ <=> b.index_;
    }

private:
    std::size_t num_qubits_ = 1;
    std::size_t index_ = 0;
};

// Mask that selects `qubit` in a basis index of an n-qubit register.
constexpr std::size_t qubit_mask(std::size_t num_qubits, std::size_t qubit) noexcept {
    return std::size_t{1} << (num_qubits - 1 - qubit);
}

inline std::vector<BasisLabel> all_labels(std::size_t num_qubits) {
    std::vector<BasisLabel> out;
    const std::size_t dim = std::size_t{1} << num_qubits;
    out.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) out.emplace_back(num_qubits, i);
    return out;
}

} // namespace qlens

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cliffopt {

/// Gate kinds in tie-break order (H < S < Sdg < CX < CZ < SWAP).
enum class GateKind : std::uint8_t { H = 0, P = 1, Pdag = 2, Cnot = 3, Cz = 4, Swap = 5 };

inline constexpr std::size_t kNumGateKinds = 6;

inline constexpr std::array<GateKind, kNumGateKinds> kAllGateKinds = {
    GateKind::H, GateKind::P, GateKind::Pdag, GateKind::Cnot, GateKind::Cz, GateKind::Swap};

constexpr unsigned arity(GateKind kind) {
    return kind == GateKind::H || kind == GateKind::P || kind == GateKind::Pdag ? 1 : 2;
}

constexpr std::string_view mnemonic(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "H";
        case GateKind::P: return "S";
        case GateKind::Pdag: return "Sdg";
        case GateKind::Cnot: return "CX";
        case GateKind::Cz: return "CZ";
        case GateKind::Swap: return "SWAP";
    }
    return "?";
}

inline std::optional<GateKind> gate_kind_from_mnemonic(std::string_view s) {
    for (auto kind : kAllGateKinds) {
        if (mnemonic(kind) == s) {
            return kind;
        }
    }
    return std::nullopt;
}

/// Bitmask over GateKind.
class GateSet {
public:
    constexpr GateSet() = default;
    constexpr GateSet(std::initializer_list<GateKind> kinds) {
        for (auto k : kinds) {
            insert(k);
        }
    }
    static constexpr GateSet from_mask(std::uint16_t mask) {
        GateSet s;
        s.mask_ = mask & 0x3F;
        return s;
    }

    constexpr void insert(GateKind k) { mask_ |= static_cast<std::uint16_t>(1u << static_cast<unsigned>(k)); }
    constexpr bool contains(GateKind k) const { return (mask_ >> static_cast<unsigned>(k)) & 1u; }
    constexpr bool empty() const { return mask_ == 0; }
    constexpr std::uint16_t mask() const { return mask_; }
    /// True when every member is a CNOT or SWAP, i.e. the set generates linear reversible circuits.
    constexpr bool is_linear() const {
        return !empty() && (mask_ & ~((1u << 3) | (1u << 5))) == 0;
    }

    friend constexpr bool operator==(GateSet, GateSet) = default;

private:
    std::uint16_t mask_ = 0;
};

/// A Clifford gate. Two-qubit gates carry (control, target) for CX.
struct Gate {
    GateKind kind = GateKind::H;
    std::uint32_t q0 = 0;
    std::uint32_t q1 = 0;

    static constexpr Gate h(std::uint32_t q) { return {GateKind::H, q, 0}; }
    static constexpr Gate p(std::uint32_t q) { return {GateKind::P, q, 0}; }
    static constexpr Gate pdag(std::uint32_t q) { return {GateKind::Pdag, q, 0}; }
    static constexpr Gate cnot(std::uint32_t control, std::uint32_t target) { return {GateKind::Cnot, control, target}; }
    static constexpr Gate cz(std::uint32_t a, std::uint32_t b) { return {GateKind::Cz, a, b}; }
    static constexpr Gate swap(std::uint32_t a, std::uint32_t b) { return {GateKind::Swap, a, b}; }

    constexpr unsigned num_qubits() const { return arity(kind); }
    constexpr bool two_qubit() const { return arity(kind) == 2; }
    constexpr bool acts_on(std::uint32_t q) const { return q0 == q || (two_qubit() && q1 == q); }
    constexpr bool overlaps(const Gate& other) const {
        return acts_on(other.q0) || (other.two_qubit() && acts_on(other.q1));
    }
    constexpr std::uint32_t max_qubit() const { return two_qubit() && q1 > q0 ? q1 : q0; }

    /// Single-qubit gates ignore q1 for comparison purposes; callers keep it zero.
    friend constexpr auto operator<=>(const Gate&, const Gate&) = default;
    friend constexpr bool operator==(const Gate&, const Gate&) = default;

    std::string str() const {
        std::string s(mnemonic(kind));
        s += ' ';
        s += std::to_string(q0);
        if (two_qubit()) {
            s += ' ';
            s += std::to_string(q1);
        }
        return s;
    }

    /// Throws std::invalid_argument for duplicate indices or indices >= n.
    void validate(std::size_t n) const {
        if (q0 >= n || (two_qubit() && q1 >= n)) {
            throw std::out_of_range("gate " + str() + ": index out of range");
        }
        if (two_qubit() && q0 == q1) {
            throw std::invalid_argument("gate " + str() + ": duplicate qubit index");
        }
    }
};

/// Physical inverse of a gate (S <-> Sdg; everything else is self-inverse).
constexpr Gate inverse(Gate g) {
    if (g.kind == GateKind::P) {
        g.kind = GateKind::Pdag;
    } else if (g.kind == GateKind::Pdag) {
        g.kind = GateKind::P;
    }
    return g;
}

}  // namespace cliffopt

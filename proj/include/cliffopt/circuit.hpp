#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gate.hpp"

namespace cliffopt {

/// Error raised by the text parsers; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + ", line " + std::to_string(line)), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

inline bool is_permutation_of_range(std::span<const std::uint32_t> p) {
    std::vector<bool> seen(p.size(), false);
    for (auto v : p) {
        if (v >= p.size() || seen[v]) {
            return false;
        }
        seen[v] = true;
    }
    return true;
}

inline std::vector<std::uint32_t> invert_permutation(std::span<const std::uint32_t> p) {
    std::vector<std::uint32_t> inv(p.size());
    for (std::uint32_t i = 0; i < p.size(); ++i) {
        inv[p[i]] = i;
    }
    return inv;
}

/// An ordered gate list over n qubits.
///
/// The optional relabeling records a trailing wire permutation: the state on
/// output wire i is moved to wire relabel[i] (the same effect as a network of
/// SWAP gates appended to the circuit).
class Circuit {
public:
    using const_iterator = std::vector<Gate>::const_iterator;

    Circuit() = default;
    explicit Circuit(std::size_t num_qubits) : n_(num_qubits) {}
    Circuit(std::size_t num_qubits, std::vector<Gate> gates) : n_(num_qubits), gates_(std::move(gates)) {
        for (const auto& g : gates_) {
            g.validate(n_);
        }
    }

    std::size_t num_qubits() const { return n_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }
    bool empty() const { return gates_.empty(); }
    const Gate& operator[](std::size_t i) const { return gates_[i]; }
    const_iterator begin() const { return gates_.begin(); }
    const_iterator end() const { return gates_.end(); }

    void append(Gate g) {
        g.validate(n_);
        if (relabel_) {
            // Keep the relabeling trailing: route the gate through the inverse wire map.
            const auto inv = invert_permutation(*relabel_);
            g.q0 = inv[g.q0];
            if (g.two_qubit()) {
                g.q1 = inv[g.q1];
            }
        }
        gates_.push_back(g);
    }

    /// Appends `other` after this circuit, keeping any relabeling trailing.
    void append(const Circuit& other) {
        if (other.n_ != n_) {
            throw std::invalid_argument("append: qubit count mismatch");
        }
        for (const auto& g : other.gates_) {
            append(g);
        }
        if (other.relabel_) {
            std::vector<std::uint32_t> composed(n_);
            for (std::uint32_t i = 0; i < n_; ++i) {
                std::uint32_t mid = relabel_ ? (*relabel_)[i] : i;
                composed[i] = (*other.relabel_)[mid];
            }
            set_relabel(std::move(composed));
        }
    }

    const std::optional<std::vector<std::uint32_t>>& relabel() const { return relabel_; }

    void set_relabel(std::vector<std::uint32_t> p) {
        if (p.size() != n_ || !is_permutation_of_range(p)) {
            throw std::invalid_argument("relabel is not a permutation of the qubits");
        }
        bool identity = true;
        for (std::uint32_t i = 0; i < p.size(); ++i) {
            identity = identity && p[i] == i;
        }
        if (identity) {
            relabel_.reset();
        } else {
            relabel_ = std::move(p);
        }
    }
    void clear_relabel() { relabel_.reset(); }

    friend bool operator==(const Circuit&, const Circuit&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Gate> gates_;
    std::optional<std::vector<std::uint32_t>> relabel_;
};

/// Renames qubit q to perm[q] in every gate; `width` is the qubit count of the result.
inline Circuit map_qubits(const Circuit& c, std::span<const std::uint32_t> perm, std::size_t width) {
    Circuit out(width);
    for (auto g : c) {
        g.q0 = perm[g.q0];
        if (g.two_qubit()) {
            g.q1 = perm[g.q1];
        }
        out.append(g);
    }
    if (c.relabel()) {
        if (width != c.num_qubits()) {
            throw std::invalid_argument("map_qubits: cannot widen a relabeled circuit");
        }
        std::vector<std::uint32_t> p(width);
        for (std::uint32_t i = 0; i < width; ++i) {
            p[perm[i]] = perm[(*c.relabel())[i]];
        }
        out.set_relabel(std::move(p));
    }
    return out;
}

/// SWAP gates realising a wire permutation: wire i's state ends on wire p[i].
inline std::vector<Gate> swap_network(std::span<const std::uint32_t> p) {
    // where[w]: original wire whose state currently sits on wire w.
    std::vector<std::uint32_t> where(p.size());
    std::vector<std::uint32_t> pos(p.size());
    for (std::uint32_t i = 0; i < p.size(); ++i) {
        where[i] = i;
        pos[i] = i;
    }
    std::vector<Gate> out;
    for (std::uint32_t target = 0; target < p.size(); ++target) {
        // The state destined for `target` is the one with p[i] == target.
        std::uint32_t src = 0;
        while (p[src] != target) {
            ++src;
        }
        std::uint32_t cur = pos[src];
        if (cur != target) {
            out.push_back(Gate::swap(std::min(cur, target), std::max(cur, target)));
            std::uint32_t displaced = where[target];
            where[target] = src;
            where[cur] = displaced;
            pos[src] = target;
            pos[displaced] = cur;
        }
    }
    return out;
}

/// Replaces the relabeling annotation by explicit trailing SWAP gates.
inline Circuit with_explicit_swaps(const Circuit& c) {
    if (!c.relabel()) {
        return c;
    }
    Circuit out(c.num_qubits(), c.gates());
    for (const auto& g : swap_network(*c.relabel())) {
        out.append(g);
    }
    return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') {
            ++j;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

inline std::optional<std::uint64_t> parse_uint(std::string_view s) {
    if (s.empty() || s.size() > 18) {
        return std::nullopt;
    }
    std::uint64_t v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') {
            return std::nullopt;
        }
        v = v * 10 + static_cast<std::uint64_t>(ch - '0');
    }
    return v;
}

}  // namespace detail

/// Parses the line-based circuit text format (`qubits n`, one gate per line,
/// `#` comments, optional trailing `relabel p0 ... p(n-1)`).
inline Circuit parse_circuit(std::istream& in) {
    std::optional<Circuit> circuit;
    std::optional<std::vector<std::uint32_t>> relabel;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        auto tokens = detail::split_ws(line);
        if (!circuit) {
            if (tokens.size() != 2 || tokens[0] != "qubits") {
                throw ParseError("malformed header (expected 'qubits <n>')", line_no);
            }
            auto n = detail::parse_uint(tokens[1]);
            if (!n || *n == 0) {
                throw ParseError("malformed header (bad qubit count)", line_no);
            }
            circuit.emplace(*n);
            continue;
        }
        if (relabel) {
            throw ParseError("relabel must be the last line", line_no);
        }
        const std::size_t n = circuit->num_qubits();
        if (tokens[0] == "relabel") {
            if (tokens.size() != n + 1) {
                throw ParseError("relabel needs exactly " + std::to_string(n) + " entries", line_no);
            }
            std::vector<std::uint32_t> p;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                auto v = detail::parse_uint(tokens[i]);
                if (!v || *v >= n) {
                    throw ParseError("index out of range", line_no);
                }
                p.push_back(static_cast<std::uint32_t>(*v));
            }
            if (!is_permutation_of_range(p)) {
                throw ParseError("relabel is not a permutation", line_no);
            }
            relabel = std::move(p);
            continue;
        }
        auto kind = gate_kind_from_mnemonic(tokens[0]);
        if (!kind) {
            throw ParseError("unknown mnemonic '" + std::string(tokens[0]) + "'", line_no);
        }
        const unsigned k = arity(*kind);
        if (tokens.size() != k + 1) {
            throw ParseError("wrong operand count for " + std::string(tokens[0]), line_no);
        }
        std::array<std::uint32_t, 2> q{0, 0};
        for (unsigned i = 0; i < k; ++i) {
            auto v = detail::parse_uint(tokens[i + 1]);
            if (!v) {
                throw ParseError("malformed qubit index", line_no);
            }
            if (*v >= n) {
                throw ParseError("index out of range", line_no);
            }
            q[i] = static_cast<std::uint32_t>(*v);
        }
        if (k == 2 && q[0] == q[1]) {
            throw ParseError("duplicate indices", line_no);
        }
        circuit->append(Gate{*kind, q[0], q[1]});
    }
    if (!circuit) {
        throw ParseError("malformed header (missing 'qubits <n>')", line_no + 1);
    }
    if (relabel) {
        circuit->set_relabel(std::move(*relabel));
    }
    return std::move(*circuit);
}

inline Circuit parse_circuit(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_circuit(in);
}

inline void emit_circuit(std::ostream& out, const Circuit& c) {
    out << "qubits " << c.num_qubits() << '\n';
    for (const auto& g : c) {
        out << g.str() << '\n';
    }
    if (c.relabel()) {
        out << "relabel";
        for (auto v : *c.relabel()) {
            out << ' ' << v;
        }
        out << '\n';
    }
}

inline std::string emit_circuit(const Circuit& c) {
    std::ostringstream out;
    emit_circuit(out, c);
    return out.str();
}

}  // namespace cliffopt

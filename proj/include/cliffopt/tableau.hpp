#pragma once

#include <array>
#include <cassert>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "circuit.hpp"
#include "gate.hpp"

namespace cliffopt {

/// Column-operation rules for appending a gate to a 2n-column binary
/// symplectic matrix (right multiplication by the gate's matrix).
///
/// `ops.swap(a, b)` exchanges columns a and b; `ops.add(src, dst)` adds
/// column src into column dst. The same rules act on single row vectors.
template <typename Ops>
void apply_gate_rules(Ops&& ops, std::size_t n, const Gate& g) {
    const std::size_t a = g.q0;
    const std::size_t b = g.q1;
    switch (g.kind) {
        case GateKind::H:
            ops.swap(a, n + a);
            break;
        case GateKind::P:
        case GateKind::Pdag:
            ops.add(a, n + a);
            break;
        case GateKind::Cnot:
            ops.add(a, b);
            ops.add(n + b, n + a);
            break;
        case GateKind::Cz:
            ops.add(b, n + a);
            ops.add(a, n + b);
            break;
        case GateKind::Swap:
            ops.swap(a, b);
            ops.swap(n + a, n + b);
            break;
    }
}

/// Column storage for tableaux of at most 8 qubits: one 16-bit word per column.
struct SmallColumns {
    using column_type = std::uint16_t;
    using storage_type = std::array<std::uint16_t, 16>;
    static constexpr std::size_t max_qubits = 8;

    static storage_type make_storage(std::size_t) { return storage_type{}; }
    static column_type zero_column(std::size_t) { return 0; }
    static bool test(column_type c, std::size_t i) { return (c >> i) & 1u; }
    static void flip(column_type& c, std::size_t i) { c = static_cast<column_type>(c ^ (1u << i)); }
    static bool symplectic_product(column_type u, column_type v, std::size_t n) {
        const unsigned low = (1u << n) - 1;
        return std::popcount(static_cast<unsigned>((u & low) & (v >> n)) ^ static_cast<unsigned>((u >> n) & (v & low))) & 1;
    }
};

/// Column storage for arbitrary qubit counts.
struct WideColumns {
    using column_type = boost::dynamic_bitset<std::uint64_t>;
    using storage_type = std::vector<column_type>;
    static constexpr std::size_t max_qubits = std::size_t(1) << 20;

    static storage_type make_storage(std::size_t cols) { return storage_type(cols); }
    static column_type zero_column(std::size_t bits) { return column_type(bits); }
    static bool test(const column_type& c, std::size_t i) { return c.test(i); }
    static void flip(column_type& c, std::size_t i) { c.flip(i); }
    static bool symplectic_product(const column_type& u, const column_type& v, std::size_t n) {
        return (((u & (v >> n)).count() + ((u >> n) & v).count()) & 1u) != 0;
    }
};

/// Binary symplectic matrix of a Clifford unitary, signs dropped.
///
/// Stored column-major; bit i of column j is entry (i, j). Row i is the
/// image of the i-th basis Pauli (X_0..X_{n-1}, then Z_0..Z_{n-1}) in the
/// (x | z) encoding, and appending a gate multiplies on the right, so the
/// tableau of C1;C2 is tableau(C1) * tableau(C2).
template <typename Columns>
class BasicTableau {
public:
    using column_type = typename Columns::column_type;

    BasicTableau() : BasicTableau(1) {}

    /// Identity on n qubits.
    explicit BasicTableau(std::size_t n) : n_(n), cols_(Columns::make_storage(2 * n)) {
        if (n == 0 || n > Columns::max_qubits) {
            throw std::invalid_argument("tableau: unsupported qubit count " + std::to_string(n));
        }
        for (std::size_t j = 0; j < 2 * n; ++j) {
            cols_[j] = Columns::zero_column(2 * n);
            Columns::flip(cols_[j], j);
        }
    }

    static BasicTableau identity(std::size_t n) { return BasicTableau(n); }

    static BasicTableau zeros(std::size_t n) {
        BasicTableau t(n);
        for (std::size_t j = 0; j < 2 * n; ++j) {
            t.cols_[j] = Columns::zero_column(2 * n);
        }
        return t;
    }

    std::size_t num_qubits() const { return n_; }
    std::size_t dim() const { return 2 * n_; }

    const column_type& column(std::size_t j) const { return cols_[j]; }
    column_type& column(std::size_t j) { return cols_[j]; }

    bool bit(std::size_t row, std::size_t col) const { return Columns::test(cols_[col], row); }
    void set_bit(std::size_t row, std::size_t col, bool v) {
        if (bit(row, col) != v) {
            Columns::flip(cols_[col], row);
        }
    }

    void swap_columns(std::size_t a, std::size_t b) { std::swap(cols_[a], cols_[b]); }
    void add_column(std::size_t src, std::size_t dst) { cols_[dst] ^= cols_[src]; }

    /// In-place right multiplication by the gate's matrix.
    BasicTableau& apply(const Gate& g) {
        g.validate(n_);
        apply_unchecked(g);
        assert(is_symplectic());
        return *this;
    }

    void apply_unchecked(const Gate& g) {
        struct Ops {
            BasicTableau& t;
            void swap(std::size_t a, std::size_t b) { t.swap_columns(a, b); }
            void add(std::size_t s, std::size_t d) { t.add_column(s, d); }
        };
        apply_gate_rules(Ops{*this}, n_, g);
    }

    BasicTableau compose(const BasicTableau& rhs) const {
        if (rhs.n_ != n_) {
            throw std::invalid_argument("compose: dimension mismatch");
        }
        BasicTableau out = zeros(n_);
        for (std::size_t j = 0; j < dim(); ++j) {
            for (std::size_t i = 0; i < dim(); ++i) {
                if (rhs.bit(i, j)) {
                    out.cols_[j] ^= cols_[i];
                }
            }
        }
        return out;
    }

    friend BasicTableau operator*(const BasicTableau& a, const BasicTableau& b) { return a.compose(b); }

    /// Inverse of a symplectic matrix: Omega * M^T * Omega.
    BasicTableau inverse() const {
        BasicTableau out = zeros(n_);
        const std::size_t d = dim();
        for (std::size_t i = 0; i < d; ++i) {
            const std::size_t si = i < n_ ? i + n_ : i - n_;
            for (std::size_t j = 0; j < d; ++j) {
                const std::size_t sj = j < n_ ? j + n_ : j - n_;
                if (bit(sj, si)) {
                    Columns::flip(out.cols_[j], i);
                }
            }
        }
        return out;
    }

    BasicTableau transpose() const {
        BasicTableau out = zeros(n_);
        for (std::size_t i = 0; i < dim(); ++i) {
            for (std::size_t j = 0; j < dim(); ++j) {
                if (bit(i, j)) {
                    Columns::flip(out.cols_[i], j);
                }
            }
        }
        return out;
    }

    /// Block conditions A^T C = C^T A, B^T D = D^T B, A^T D + C^T B = I,
    /// checked as symplectic products between columns.
    bool is_symplectic() const {
        for (std::size_t i = 0; i < dim(); ++i) {
            for (std::size_t j = i; j < dim(); ++j) {
                const bool expected = (j == i + n_) && i < n_;
                if (Columns::symplectic_product(cols_[i], cols_[j], n_) != expected) {
                    return false;
                }
            }
        }
        return true;
    }

    bool is_identity() const { return *this == identity(n_); }

    /// Row i as a 2n-bit vector (x bits then z bits).
    boost::dynamic_bitset<std::uint64_t> row(std::size_t i) const {
        boost::dynamic_bitset<std::uint64_t> r(dim());
        for (std::size_t j = 0; j < dim(); ++j) {
            r[j] = bit(i, j);
        }
        return r;
    }

    friend bool operator==(const BasicTableau& a, const BasicTableau& b) {
        if (a.n_ != b.n_) {
            return false;
        }
        for (std::size_t j = 0; j < a.dim(); ++j) {
            if (a.cols_[j] != b.cols_[j]) {
                return false;
            }
        }
        return true;
    }

    template <typename Other>
    static BasicTableau convert(const BasicTableau<Other>& src) {
        BasicTableau out = zeros(src.num_qubits());
        for (std::size_t i = 0; i < src.dim(); ++i) {
            for (std::size_t j = 0; j < src.dim(); ++j) {
                if (src.bit(i, j)) {
                    out.set_bit(i, j, true);
                }
            }
        }
        return out;
    }

private:
    std::size_t n_;
    typename Columns::storage_type cols_;
};

using SmallTableau = BasicTableau<SmallColumns>;
using Tableau = BasicTableau<WideColumns>;

/// Fold of the gate rules from the identity; a relabeling is applied as a
/// trailing permutation of column pairs.
template <typename T = Tableau>
T from_circuit(const Circuit& c) {
    T t(c.num_qubits());
    for (const auto& g : c) {
        t.apply(g);
    }
    if (c.relabel()) {
        const auto& p = *c.relabel();
        const std::size_t n = c.num_qubits();
        T moved = t;
        for (std::size_t i = 0; i < n; ++i) {
            moved.column(p[i]) = t.column(i);
            moved.column(n + p[i]) = t.column(n + i);
        }
        t = std::move(moved);
    }
    return t;
}

/// Matrix of a single gate on n qubits.
template <typename T = Tableau>
T gate_matrix(std::size_t n, const Gate& g) {
    T t(n);
    t.apply(g);
    return t;
}

/// Tableau text format: `n <n>` then 2n rows of 2n characters in {0,1}.
template <typename T>
void emit_tableau(std::ostream& out, const T& t) {
    out << "n " << t.num_qubits() << '\n';
    for (std::size_t i = 0; i < t.dim(); ++i) {
        for (std::size_t j = 0; j < t.dim(); ++j) {
            out << (t.bit(i, j) ? '1' : '0');
        }
        out << '\n';
    }
}

template <typename T>
std::string emit_tableau(const T& t) {
    std::ostringstream out;
    emit_tableau(out, t);
    return out.str();
}

template <typename T = Tableau>
T parse_tableau(std::istream& in) {
    std::string raw;
    std::size_t line_no = 0;
    std::size_t n = 0;
    std::size_t row = 0;
    T t(1);
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
        if (n == 0) {
            auto tokens = detail::split_ws(line);
            auto v = tokens.size() == 2 && tokens[0] == "n" ? detail::parse_uint(tokens[1]) : std::nullopt;
            if (!v || *v == 0 || *v > 4096) {
                throw ParseError("malformed tableau header (expected 'n <n>')", line_no);
            }
            n = *v;
            t = T::zeros(n);
            continue;
        }
        if (row >= 2 * n) {
            throw ParseError("too many tableau rows", line_no);
        }
        if (line.size() != 2 * n) {
            throw ParseError("tableau row must have " + std::to_string(2 * n) + " entries", line_no);
        }
        for (std::size_t j = 0; j < 2 * n; ++j) {
            if (line[j] != '0' && line[j] != '1') {
                throw ParseError("tableau entries must be 0 or 1", line_no);
            }
            t.set_bit(row, j, line[j] == '1');
        }
        ++row;
    }
    if (n == 0 || row != 2 * n) {
        throw ParseError("incomplete tableau", line_no);
    }
    if (!t.is_symplectic()) {
        throw ParseError("tableau is not symplectic", line_no);
    }
    return t;
}

template <typename T = Tableau>
T parse_tableau(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_tableau<T>(in);
}

}  // namespace cliffopt

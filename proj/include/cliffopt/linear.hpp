#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "gate.hpp"
#include "tableau.hpp"

namespace cliffopt {

/// Invertible n x n matrix over GF(2) for CNOT-only circuits; the top-left
/// block of the block-diagonal tableau diag(A, A^{-T}).
class LinearMatrix {
public:
    static constexpr std::size_t max_qubits = 16;
    using column_type = std::uint16_t;

    LinearMatrix() : LinearMatrix(1) {}

    explicit LinearMatrix(std::size_t n) : n_(n) {
        if (n == 0 || n > max_qubits) {
            throw std::invalid_argument("linear matrix: unsupported size " + std::to_string(n));
        }
        for (std::size_t j = 0; j < n; ++j) {
            cols_[j] = static_cast<column_type>(1u << j);
        }
    }

    static LinearMatrix identity(std::size_t n) { return LinearMatrix(n); }
    static LinearMatrix zeros(std::size_t n) {
        LinearMatrix m(n);
        m.cols_.fill(0);
        return m;
    }

    std::size_t num_qubits() const { return n_; }
    column_type column(std::size_t j) const { return cols_[j]; }
    column_type& column(std::size_t j) { return cols_[j]; }
    bool bit(std::size_t row, std::size_t col) const { return (cols_[col] >> row) & 1u; }
    void set_bit(std::size_t row, std::size_t col, bool v) {
        if (bit(row, col) != v) {
            cols_[col] = static_cast<column_type>(cols_[col] ^ (1u << row));
        }
    }

    /// CNOT(control -> target): column target += column control.
    LinearMatrix& apply_cnot(std::size_t control, std::size_t target) {
        if (control >= n_ || target >= n_ || control == target) {
            throw std::out_of_range("linear matrix: bad CNOT indices");
        }
        cols_[target] ^= cols_[control];
        return *this;
    }

    LinearMatrix& apply(const Gate& g) {
        g.validate(n_);
        apply_unchecked(g);
        return *this;
    }

    void apply_unchecked(const Gate& g) {
        switch (g.kind) {
            case GateKind::Cnot:
                cols_[g.q1] ^= cols_[g.q0];
                break;
            case GateKind::Swap:
                std::swap(cols_[g.q0], cols_[g.q1]);
                break;
            default:
                throw std::invalid_argument("linear matrix: gate " + g.str() + " is not linear reversible");
        }
    }

    LinearMatrix compose(const LinearMatrix& rhs) const {
        if (rhs.n_ != n_) {
            throw std::invalid_argument("compose: dimension mismatch");
        }
        LinearMatrix out = zeros(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            for (std::size_t i = 0; i < n_; ++i) {
                if (rhs.bit(i, j)) {
                    out.cols_[j] ^= cols_[i];
                }
            }
        }
        return out;
    }

    friend LinearMatrix operator*(const LinearMatrix& a, const LinearMatrix& b) { return a.compose(b); }

    LinearMatrix transpose() const {
        LinearMatrix out = zeros(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                out.set_bit(j, i, bit(i, j));
            }
        }
        return out;
    }

    /// Gauss-Jordan inverse; throws when singular.
    LinearMatrix inverse() const {
        // Work on rows: row r of [A | I].
        std::array<std::uint32_t, max_qubits> rows{};
        for (std::size_t r = 0; r < n_; ++r) {
            std::uint32_t v = 0;
            for (std::size_t c = 0; c < n_; ++c) {
                v |= static_cast<std::uint32_t>(bit(r, c)) << c;
            }
            rows[r] = v | (1u << (n_ + r));
        }
        for (std::size_t c = 0; c < n_; ++c) {
            std::size_t pivot = c;
            while (pivot < n_ && !((rows[pivot] >> c) & 1u)) {
                ++pivot;
            }
            if (pivot == n_) {
                throw std::domain_error("linear matrix is singular");
            }
            std::swap(rows[c], rows[pivot]);
            for (std::size_t r = 0; r < n_; ++r) {
                if (r != c && ((rows[r] >> c) & 1u)) {
                    rows[r] ^= rows[c];
                }
            }
        }
        LinearMatrix out = zeros(n_);
        for (std::size_t r = 0; r < n_; ++r) {
            for (std::size_t c = 0; c < n_; ++c) {
                out.set_bit(r, c, (rows[r] >> (n_ + c)) & 1u);
            }
        }
        return out;
    }

    bool is_invertible() const {
        try {
            (void)inverse();
            return true;
        } catch (const std::domain_error&) {
            return false;
        }
    }

    /// Full block-diagonal tableau diag(A, A^{-T}).
    template <typename T = Tableau>
    T to_tableau() const {
        T t = T::zeros(n_);
        const LinearMatrix b = inverse().transpose();
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                t.set_bit(i, j, bit(i, j));
                t.set_bit(n_ + i, n_ + j, b.bit(i, j));
            }
        }
        return t;
    }

    friend bool operator==(const LinearMatrix& a, const LinearMatrix& b) {
        if (a.n_ != b.n_) {
            return false;
        }
        for (std::size_t j = 0; j < a.n_; ++j) {
            if (a.cols_[j] != b.cols_[j]) {
                return false;
            }
        }
        return true;
    }

private:
    std::size_t n_;
    std::array<column_type, max_qubits> cols_{};
};

/// Top-left block of a block-diagonal (linear reversible) tableau.
template <typename T>
LinearMatrix linear_from_tableau(const T& t) {
    const std::size_t n = t.num_qubits();
    if (n > LinearMatrix::max_qubits) {
        throw std::invalid_argument("linear_from_tableau: too many qubits");
    }
    LinearMatrix a = LinearMatrix::zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (t.bit(i, n + j) || t.bit(n + i, j)) {
                throw std::invalid_argument("linear_from_tableau: tableau is not linear reversible");
            }
            a.set_bit(i, j, t.bit(i, j));
        }
    }
    return a;
}

inline LinearMatrix linear_apply_cnot(LinearMatrix a, std::size_t control, std::size_t target) {
    a.apply_cnot(control, target);
    return a;
}

}  // namespace cliffopt

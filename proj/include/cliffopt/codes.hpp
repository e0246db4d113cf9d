#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qecc.hpp"
#include "sample.hpp"

namespace cliffopt {

/// A named stabilizer code for benchmarks. `distance` is set only where the
/// construction fixes it.
struct CodeSpec {
    std::string name;
    std::string family;
    std::optional<std::size_t> distance;
    StabilizerGroup group;

    std::string label() const {
        std::string s = "[[" + std::to_string(group.n) + "," + std::to_string(group.k());
        if (distance) {
            s += "," + std::to_string(*distance);
        }
        return s + "]]";
    }
};

namespace codes {

inline StabilizerGroup from_rows(std::size_t n, std::vector<BitRow> rows) {
    validate_generators(n, rows);
    return {n, std::move(rows)};
}

/// Keeps rows that are independent of the ones kept before them.
inline std::vector<BitRow> independent_subset(const std::vector<BitRow>& rows) {
    std::vector<BitRow> kept;
    for (const auto& r : rows) {
        kept.push_back(r);
        if (gf2_rank(kept) < kept.size()) {
            kept.pop_back();
        }
    }
    return kept;
}

inline StabilizerGroup five_qubit() { return parse_stabilizers("XZZXI\nIXZZX\nXIXZZ\nZXIXZ\n"); }

/// Cyclic code on a prime length p: X on quadratic residues, Z on non-residues, shifted.
inline StabilizerGroup quadratic_residue(std::size_t p) {
    std::vector<bool> residue(p, false);
    for (std::size_t i = 1; i < p; ++i) {
        residue[(i * i) % p] = true;
    }
    std::vector<BitRow> rows;
    for (std::size_t shift = 0; shift < p; ++shift) {
        BitRow r(2 * p);
        for (std::size_t i = 1; i < p; ++i) {
            r.set(residue[i] ? (i + shift) % p : p + (i + shift) % p);
        }
        rows.push_back(r);
    }
    return from_rows(p, independent_subset(rows));
}

/// Inner code on every block, outer generators with each Pauli replaced by
/// the inner logical operator (X^5, Z^5, Y^5 for the five-qubit code).
inline StabilizerGroup concatenated_five_qubit() {
    const auto inner = five_qubit();
    const std::size_t n = 25;
    std::vector<BitRow> rows;
    for (std::size_t b = 0; b < 5; ++b) {
        for (const auto& g : inner.generators) {
            BitRow r(2 * n);
            for (std::size_t q = 0; q < 5; ++q) {
                r[5 * b + q] = g[q];
                r[n + 5 * b + q] = g[5 + q];
            }
            rows.push_back(r);
        }
    }
    for (const auto& g : inner.generators) {
        BitRow r(2 * n);
        for (std::size_t b = 0; b < 5; ++b) {
            for (std::size_t q = 0; q < 5; ++q) {
                r[5 * b + q] = g[b];
                r[n + 5 * b + q] = g[5 + b];
            }
        }
        rows.push_back(r);
    }
    return from_rows(n, rows);
}

/// Rotated surface code on a d x d grid: weight-4 plaquettes in a
/// checkerboard, weight-2 X checks on the top/bottom edges and Z checks on
/// the left/right edges.
inline StabilizerGroup rotated_surface(std::size_t d) {
    const std::size_t n = d * d;
    std::vector<BitRow> rows;
    for (std::size_t i = 0; i <= d; ++i) {
        for (std::size_t j = 0; j <= d; ++j) {
            const bool x_type = (i + j) % 2 == 0;
            std::vector<std::size_t> support;
            for (std::size_t a : {i - 1, i}) {
                for (std::size_t b : {j - 1, j}) {
                    if (a < d && b < d) {
                        support.push_back(a * d + b);
                    }
                }
            }
            const bool horizontal_edge = i == 0 || i == d;
            const bool vertical_edge = j == 0 || j == d;
            if (support.size() < 2 || (support.size() == 2 && (horizontal_edge ? !x_type : x_type)) ||
                (horizontal_edge && vertical_edge)) {
                continue;
            }
            BitRow r(2 * n);
            for (auto q : support) {
                r.set(x_type ? q : n + q);
            }
            rows.push_back(r);
        }
    }
    return from_rows(n, rows);
}

/// Hypergraph product of the repetition codes of lengths a and b.
inline StabilizerGroup repetition_product(std::size_t a, std::size_t b) {
    const std::size_t n = a * b + (a - 1) * (b - 1);
    auto left = [&](std::size_t i, std::size_t j) { return i * b + j; };            // a x b block
    auto right = [&](std::size_t i, std::size_t j) { return a * b + i * (b - 1) + j; };  // (a-1) x (b-1) block
    std::vector<BitRow> rows;
    // X checks: H_a (x) I_b | I_(a-1) (x) H_b^T, indexed by (check i of rep a, bit j of rep b).
    for (std::size_t i = 0; i + 1 < a; ++i) {
        for (std::size_t j = 0; j < b; ++j) {
            BitRow r(2 * n);
            r.set(left(i, j));
            r.set(left(i + 1, j));
            if (j > 0) {
                r.flip(right(i, j - 1));
            }
            if (j + 1 < b) {
                r.flip(right(i, j));
            }
            rows.push_back(r);
        }
    }
    // Z checks: I_a (x) H_b | H_a^T (x) I_(b-1), indexed by (bit i of rep a, check j of rep b).
    for (std::size_t i = 0; i < a; ++i) {
        for (std::size_t j = 0; j + 1 < b; ++j) {
            BitRow r(2 * n);
            r.set(n + left(i, j));
            r.set(n + left(i, j + 1));
            if (i > 0) {
                r.flip(n + right(i - 1, j));
            }
            if (i + 1 < a) {
                r.flip(n + right(i, j));
            }
            rows.push_back(r);
        }
    }
    return from_rows(n, rows);
}

/// Shor-type code: m blocks of l qubits, ZZ checks inside blocks and X
/// checks on adjacent block pairs.
inline StabilizerGroup generalized_shor(std::size_t m, std::size_t l) {
    const std::size_t n = m * l;
    std::vector<BitRow> rows;
    for (std::size_t b = 0; b < m; ++b) {
        for (std::size_t q = 0; q + 1 < l; ++q) {
            BitRow r(2 * n);
            r.set(n + b * l + q);
            r.set(n + b * l + q + 1);
            rows.push_back(r);
        }
    }
    for (std::size_t b = 0; b + 1 < m; ++b) {
        BitRow r(2 * n);
        for (std::size_t q = 0; q < 2 * l; ++q) {
            r.set(b * l + q);
        }
        rows.push_back(r);
    }
    return from_rows(n, rows);
}

/// Images of Z on the last n-k wires under a uniformly random Clifford.
inline StabilizerGroup random_code(std::size_t n, std::size_t k, std::uint64_t seed) {
    const auto t = random_clifford<Tableau>(n, seed);
    std::vector<BitRow> rows;
    for (auto slot : ancilla_slots(n, n - k)) {
        rows.push_back(tableau_row(t, slot));
    }
    return from_rows(n, rows);
}

/// Benchmark codes on 25..30 qubits.
inline std::vector<CodeSpec> benchmark_codes() {
    std::vector<CodeSpec> out;
    out.push_back({"concat5", "concatenated five-qubit", 9, concatenated_five_qubit()});
    out.push_back({"qr29", "quadratic residue", 11, quadratic_residue(29)});
    out.push_back({"surface5", "rotated surface", 5, rotated_surface(5)});
    out.push_back({"planar4", "repetition hypergraph product", 4, repetition_product(4, 4)});
    out.push_back({"planar3x6", "repetition hypergraph product", 3, repetition_product(3, 6)});
    out.push_back({"shor5x5", "generalized Shor", 5, generalized_shor(5, 5)});
    out.push_back({"shor3x9", "generalized Shor", 3, generalized_shor(3, 9)});
    const std::pair<std::size_t, std::size_t> shapes[] = {{26, 1}, {26, 4}, {27, 2}, {27, 9}, {28, 0},
                                                          {28, 3}, {29, 5}, {30, 2}, {30, 8}};
    for (std::size_t i = 0; i < std::size(shapes); ++i) {
        const auto [n, k] = shapes[i];
        out.push_back({"random" + std::to_string(n) + "_" + std::to_string(k), "random", std::nullopt,
                       random_code(n, k, 1000 + i)});
    }
    return out;
}

}  // namespace codes
}  // namespace cliffopt

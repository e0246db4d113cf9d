#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bits.hpp"
#include "gate.hpp"
#include "linear.hpp"
#include "tableau.hpp"

namespace cliffopt {

/// Which qubit renamings are factored out of the search.
enum class EquivMode : std::uint8_t { Exact = 0, Simultaneous = 1, Independent = 2 };

inline std::string to_string(EquivMode m) {
    switch (m) {
        case EquivMode::Exact: return "exact";
        case EquivMode::Simultaneous: return "simultaneous";
        case EquivMode::Independent: return "independent";
    }
    return "?";
}

inline std::uint64_t factorial(std::size_t n) {
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

/// Clifford tableaux (2n x 2n, qubit q owns columns/rows q and n+q).
struct CliffordDomain {
    using element_type = SmallTableau;
    static constexpr bool paired = true;
    static constexpr std::size_t max_key_qubits = 5;

    static std::size_t height(std::size_t n) { return 2 * n; }
    static std::size_t width(std::size_t n) { return 2 * n; }
    static unsigned key_bits(std::size_t n) { return static_cast<unsigned>(4 * n * n); }
    static std::uint16_t column(const element_type& e, std::size_t j) { return e.column(j); }
    static void set_column(element_type& e, std::size_t j, std::uint16_t v) { e.column(j) = v; }
    static element_type identity(std::size_t n) { return element_type(n); }
    static element_type zeros(std::size_t n) { return element_type::zeros(n); }
    static bool admits(GateKind) { return true; }

    /// 2^{n^2} * prod_{j=1..n} (4^j - 1).
    static Key group_order(std::size_t n) {
        Key order = Key{1} << (n * n);
        for (std::size_t j = 1; j <= n; ++j) {
            order *= (Key{1} << (2 * j)) - 1;
        }
        return order;
    }
};

/// Invertible GF(2) matrices reached by CNOT circuits.
struct LinearDomain {
    using element_type = LinearMatrix;
    static constexpr bool paired = false;
    static constexpr std::size_t max_key_qubits = 11;

    static std::size_t height(std::size_t n) { return n; }
    static std::size_t width(std::size_t n) { return n; }
    static unsigned key_bits(std::size_t n) { return static_cast<unsigned>(n * n); }
    static std::uint16_t column(const element_type& e, std::size_t j) { return e.column(j); }
    static void set_column(element_type& e, std::size_t j, std::uint16_t v) { e.column(j) = v; }
    static element_type identity(std::size_t n) { return element_type(n); }
    static element_type zeros(std::size_t n) { return element_type::zeros(n); }
    static bool admits(GateKind k) { return k == GateKind::Cnot || k == GateKind::Swap; }

    /// prod_{i=0..n-1} (2^n - 2^i).
    static Key group_order(std::size_t n) {
        Key order = 1;
        for (std::size_t i = 0; i < n; ++i) {
            order *= (Key{1} << n) - (Key{1} << i);
        }
        return order;
    }
};

/// Canonical key of an equivalence class: the minimal column-major encoding
/// (column 0 most significant, each column a little-endian integer) over
/// the class.
struct CanonicalKey {
    EquivMode mode = EquivMode::Exact;
    std::uint8_t n = 0;
    Key value = 0;

    friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;

    template <typename Domain = CliffordDomain>
    std::vector<std::uint8_t> bytes() const {
        std::vector<std::uint8_t> out(key_bytes_for_bits(Domain::key_bits(n)));
        store_key(value, out);
        return out;
    }
};

/// Key plus the size of the renaming stabilizer; orbit size = group / stabilizer.
struct CanonicalForm {
    Key key = 0;
    std::uint64_t stabilizer = 1;
};

namespace detail {

using Columns16 = std::array<std::uint16_t, 16>;

/// Heap's-algorithm transposition sequence plus row-swap lookup tables.
struct PermutationTables {
    std::size_t n = 0;
    std::size_t height = 0;
    std::vector<std::pair<std::uint8_t, std::uint8_t>> heap_swaps;
    // tables[a * n + b] maps a column word to the word with rows of qubits a and b exchanged.
    std::vector<std::vector<std::uint16_t>> tables;

    const std::uint16_t* table(std::size_t a, std::size_t b) const { return tables[a * n + b].data(); }
};

inline std::vector<std::pair<std::uint8_t, std::uint8_t>> heap_transpositions(std::size_t n) {
    std::vector<std::pair<std::uint8_t, std::uint8_t>> out;
    std::vector<std::size_t> c(n, 0);
    std::size_t i = 1;
    while (i < n) {
        if (c[i] < i) {
            std::size_t a = (i % 2 == 0) ? 0 : c[i];
            out.emplace_back(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(i));
            ++c[i];
            i = 1;
        } else {
            c[i] = 0;
            ++i;
        }
    }
    return out;
}

template <bool Paired>
PermutationTables build_tables(std::size_t n) {
    PermutationTables pt;
    pt.n = n;
    pt.height = Paired ? 2 * n : n;
    pt.heap_swaps = heap_transpositions(n);
    pt.tables.resize(n * n);
    const std::size_t size = std::size_t(1) << pt.height;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            std::vector<std::uint16_t> t(size);
            for (std::size_t x = 0; x < size; ++x) {
                auto v = static_cast<std::uint16_t>(x);
                v = swap_bits<std::uint16_t>(v, static_cast<unsigned>(a), static_cast<unsigned>(b));
                if (Paired) {
                    v = swap_bits<std::uint16_t>(v, static_cast<unsigned>(n + a), static_cast<unsigned>(n + b));
                }
                t[x] = v;
            }
            pt.tables[b * n + a] = t;
            pt.tables[a * n + b] = std::move(t);
        }
    }
    return pt;
}

template <bool Paired>
const PermutationTables& permutation_tables(std::size_t n) {
    static std::array<std::once_flag, 17> flags;
    static std::array<std::unique_ptr<PermutationTables>, 17> cache;
    if (n == 0 || n > (Paired ? 8u : 16u)) {
        throw std::invalid_argument("permutation tables: unsupported size");
    }
    std::call_once(flags[n], [n] { cache[n] = std::make_unique<PermutationTables>(build_tables<Paired>(n)); });
    return *cache[n];
}

template <typename Domain>
Columns16 load_columns(const typename Domain::element_type& e) {
    Columns16 cols{};
    for (std::size_t j = 0; j < Domain::width(e.num_qubits()); ++j) {
        cols[j] = Domain::column(e, j);
    }
    return cols;
}

inline Key encode_columns(const Columns16& cols, std::size_t width, std::size_t height) {
    Key k = 0;
    for (std::size_t j = 0; j < width; ++j) {
        k = (k << height) | cols[j];
    }
    return k;
}

template <bool Paired>
inline void swap_qubit_columns(Columns16& cols, std::size_t n, std::size_t a, std::size_t b) {
    std::swap(cols[a], cols[b]);
    if (Paired) {
        std::swap(cols[n + a], cols[n + b]);
    }
}

inline void swap_qubit_rows(Columns16& cols, std::size_t width, const std::uint16_t* table) {
    for (std::size_t j = 0; j < width; ++j) {
        cols[j] = table[cols[j]];
    }
}

/// Sorts column groups ascending and returns the encoding of the result.
template <bool Paired>
inline Key sorted_column_key(const Columns16& cols, std::size_t n, std::size_t height) {
    std::array<std::uint32_t, 16> packed{};
    for (std::size_t q = 0; q < n; ++q) {
        packed[q] = Paired ? (static_cast<std::uint32_t>(cols[q]) << height) | cols[n + q] : cols[q];
    }
    // Insertion sort; n is at most 8 (or 16 for linear).
    for (std::size_t i = 1; i < n; ++i) {
        std::uint32_t v = packed[i];
        std::size_t j = i;
        while (j > 0 && packed[j - 1] > v) {
            packed[j] = packed[j - 1];
            --j;
        }
        packed[j] = v;
    }
    Key k = 0;
    const std::uint32_t mask = (1u << height) - 1;
    for (std::size_t q = 0; q < n; ++q) {
        k = (k << height) | (Paired ? (packed[q] >> height) : packed[q]);
    }
    if (Paired) {
        for (std::size_t q = 0; q < n; ++q) {
            k = (k << height) | (packed[q] & mask);
        }
    }
    return k;
}

}  // namespace detail

template <typename Domain>
Key encode(const typename Domain::element_type& e) {
    const std::size_t n = e.num_qubits();
    return detail::encode_columns(detail::load_columns<Domain>(e), Domain::width(n), Domain::height(n));
}

template <typename Domain>
typename Domain::element_type decode(Key k, std::size_t n) {
    auto e = Domain::zeros(n);
    const std::size_t w = Domain::width(n);
    const std::size_t h = Domain::height(n);
    const Key mask = low_mask(static_cast<unsigned>(h));
    for (std::size_t j = w; j-- > 0;) {
        Domain::set_column(e, j, static_cast<std::uint16_t>(k & mask));
        k >>= h;
    }
    return e;
}

template <typename Domain>
Key group_size(std::size_t n, EquivMode mode) {
    switch (mode) {
        case EquivMode::Exact: return 1;
        case EquivMode::Simultaneous: return factorial(n);
        case EquivMode::Independent: return Key{factorial(n)} * factorial(n);
    }
    return 1;
}

/// Minimal encoding over the renaming orbit, and how many renamings reach it.
template <typename Domain>
CanonicalForm canonical_form(const typename Domain::element_type& e, EquivMode mode) {
    const std::size_t n = e.num_qubits();
    if (n > Domain::max_key_qubits) {
        throw std::invalid_argument("canonical form: too many qubits for a key");
    }
    const std::size_t w = Domain::width(n);
    const std::size_t h = Domain::height(n);
    auto cols = detail::load_columns<Domain>(e);
    if (mode == EquivMode::Exact) {
        return {detail::encode_columns(cols, w, h), 1};
    }
    const auto& pt = detail::permutation_tables<Domain::paired>(n);
    CanonicalForm best;
    if (mode == EquivMode::Simultaneous) {
        best.key = detail::encode_columns(cols, w, h);
        for (auto [a, b] : pt.heap_swaps) {
            detail::swap_qubit_columns<Domain::paired>(cols, n, a, b);
            detail::swap_qubit_rows(cols, w, pt.table(a, b));
            Key k = detail::encode_columns(cols, w, h);
            if (k < best.key) {
                best.key = k;
                best.stabilizer = 1;
            } else if (k == best.key) {
                ++best.stabilizer;
            }
        }
        return best;
    }
    // Independent: minimise over row permutations, sorting column groups for each.
    best.key = detail::sorted_column_key<Domain::paired>(cols, n, h);
    for (auto [a, b] : pt.heap_swaps) {
        detail::swap_qubit_rows(cols, w, pt.table(a, b));
        Key k = detail::sorted_column_key<Domain::paired>(cols, n, h);
        if (k < best.key) {
            best.key = k;
            best.stabilizer = 1;
        } else if (k == best.key) {
            ++best.stabilizer;
        }
    }
    return best;
}

template <typename Domain>
Key orbit_size(const typename Domain::element_type& e, EquivMode mode) {
    return group_size<Domain>(e.num_qubits(), mode) / canonical_form<Domain>(e, mode).stabilizer;
}

inline CanonicalKey canonicalize(const SmallTableau& t, EquivMode mode) {
    return {mode, static_cast<std::uint8_t>(t.num_qubits()), canonical_form<CliffordDomain>(t, mode).key};
}

inline CanonicalKey canonicalize(const Tableau& t, EquivMode mode) {
    return canonicalize(SmallTableau::convert(t), mode);
}

inline CanonicalKey canonicalize_linear(const LinearMatrix& a, EquivMode mode = EquivMode::Simultaneous) {
    return {mode, static_cast<std::uint8_t>(a.num_qubits()), canonical_form<LinearDomain>(a, mode).key};
}

/// Every distinct member of the renaming orbit, sorted by encoding.
template <typename Domain>
std::vector<typename Domain::element_type> orbit(const typename Domain::element_type& e, EquivMode mode) {
    using Element = typename Domain::element_type;
    const std::size_t n = e.num_qubits();
    const std::size_t w = Domain::width(n);
    const std::size_t h = Domain::height(n);
    std::vector<Key> keys;
    auto cols = detail::load_columns<Domain>(e);
    if (mode == EquivMode::Exact) {
        return {e};
    }
    const auto& pt = detail::permutation_tables<Domain::paired>(n);
    if (mode == EquivMode::Simultaneous) {
        keys.push_back(detail::encode_columns(cols, w, h));
        for (auto [a, b] : pt.heap_swaps) {
            detail::swap_qubit_columns<Domain::paired>(cols, n, a, b);
            detail::swap_qubit_rows(cols, w, pt.table(a, b));
            keys.push_back(detail::encode_columns(cols, w, h));
        }
    } else {
        auto column_sweep = [&](detail::Columns16 c) {
            keys.push_back(detail::encode_columns(c, w, h));
            for (auto [a, b] : pt.heap_swaps) {
                detail::swap_qubit_columns<Domain::paired>(c, n, a, b);
                keys.push_back(detail::encode_columns(c, w, h));
            }
        };
        column_sweep(cols);
        for (auto [a, b] : pt.heap_swaps) {
            detail::swap_qubit_rows(cols, w, pt.table(a, b));
            column_sweep(cols);
        }
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<Element> out;
    out.reserve(keys.size());
    for (Key k : keys) {
        out.push_back(decode<Domain>(k, n));
    }
    return out;
}

/// Members reachable by permuting column groups only (output renamings).
template <typename Domain>
std::vector<typename Domain::element_type> column_orbit(const typename Domain::element_type& e) {
    const std::size_t n = e.num_qubits();
    const std::size_t w = Domain::width(n);
    const std::size_t h = Domain::height(n);
    const auto& pt = detail::permutation_tables<Domain::paired>(n);
    auto cols = detail::load_columns<Domain>(e);
    std::vector<Key> keys{detail::encode_columns(cols, w, h)};
    for (auto [a, b] : pt.heap_swaps) {
        detail::swap_qubit_columns<Domain::paired>(cols, n, a, b);
        keys.push_back(detail::encode_columns(cols, w, h));
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<typename Domain::element_type> out;
    for (Key k : keys) {
        out.push_back(decode<Domain>(k, n));
    }
    return out;
}

/// Explicit renaming: entry (i, j) moves to (rows[i], cols[j]) where qubit
/// permutations are lifted to the paired index space.
template <typename Domain>
typename Domain::element_type permute_qubits(const typename Domain::element_type& e,
                                             std::span<const std::uint32_t> row_perm,
                                             std::span<const std::uint32_t> col_perm) {
    const std::size_t n = e.num_qubits();
    auto lift = [n](std::span<const std::uint32_t> p, std::size_t i) -> std::size_t {
        if (!Domain::paired || i < n) {
            return p[i];
        }
        return n + p[i - n];
    };
    auto out = Domain::zeros(n);
    for (std::size_t i = 0; i < Domain::height(n); ++i) {
        for (std::size_t j = 0; j < Domain::width(n); ++j) {
            if (e.bit(i, j)) {
                out.set_bit(lift(row_perm, i), lift(col_perm, j), true);
            }
        }
    }
    return out;
}

}  // namespace cliffopt

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "canonical.hpp"
#include "circuit.hpp"
#include "cost_model.hpp"
#include "database.hpp"
#include "gf2.hpp"
#include "linear.hpp"
#include "moves.hpp"
#include "tableau.hpp"

namespace cliffopt {

/// Generators of a stabilizer group as (x | z) rows; signs are not kept.
struct StabilizerGroup {
    std::size_t n = 0;
    std::vector<BitRow> generators;

    std::size_t num_generators() const { return generators.size(); }
    /// Logical qubits: the first k wires carry the input state.
    std::size_t k() const { return n - generators.size(); }
};

inline BitRow pauli_row(std::string_view s) {
    const std::size_t n = s.size();
    BitRow row(2 * n);
    for (std::size_t q = 0; q < n; ++q) {
        switch (s[q]) {
            case 'I': break;
            case 'X': row.set(q); break;
            case 'Z': row.set(n + q); break;
            case 'Y':
                row.set(q);
                row.set(n + q);
                break;
            default: throw std::invalid_argument("pauli string: unexpected character '" + std::string(1, s[q]) + "'");
        }
    }
    return row;
}

inline std::string pauli_string(const BitRow& row) {
    const std::size_t n = row.size() / 2;
    std::string s(n, 'I');
    for (std::size_t q = 0; q < n; ++q) {
        const bool x = row.test(q);
        const bool z = row.test(n + q);
        s[q] = x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
    }
    return s;
}

/// Throws std::invalid_argument naming the first violated invariant.
inline void validate_generators(std::size_t n, const std::vector<BitRow>& rows) {
    if (rows.empty()) {
        throw std::invalid_argument("stabilizer group has no generators");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != 2 * n) {
            throw std::invalid_argument("unequal lengths: generator " + std::to_string(i + 1));
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            if (symplectic_product(rows[i], rows[j])) {
                throw std::invalid_argument("anticommuting rows: generators " + std::to_string(i + 1) + " and " +
                                            std::to_string(j + 1));
            }
        }
    }
    for (std::size_t i = 1; i <= rows.size(); ++i) {
        if (gf2_rank({rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(i)}) < i) {
            throw std::invalid_argument("dependent rows: generator " + std::to_string(i));
        }
    }
}

/// One Pauli string per line over {I, X, Y, Z} with an optional leading sign;
/// `#` starts a comment. Signs are dropped and reported through `warnings`.
inline StabilizerGroup parse_stabilizers(std::istream& in, std::vector<std::string>* warnings = nullptr) {
    StabilizerGroup g;
    std::vector<std::size_t> lines;
    std::string raw;
    std::size_t line_no = 0;
    bool signed_input = false;
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
        if (line.front() == '+' || line.front() == '-') {
            signed_input = signed_input || line.front() == '-';
            line = detail::trim(line.substr(1));
        } else if (line.starts_with("−")) {
            signed_input = true;
            line = detail::trim(line.substr(3));
        }
        BitRow row;
        try {
            row = pauli_row(line);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), line_no);
        }
        if (g.generators.empty()) {
            if (line.empty()) {
                throw ParseError("empty Pauli string", line_no);
            }
            g.n = line.size();
        } else if (line.size() != g.n) {
            throw ParseError("unequal lengths (expected " + std::to_string(g.n) + " qubits, got " +
                                 std::to_string(line.size()) + ")",
                             line_no);
        }
        g.generators.push_back(std::move(row));
        lines.push_back(line_no);
    }
    if (g.generators.empty()) {
        throw ParseError("no stabilizer generators", line_no + 1);
    }
    for (std::size_t i = 0; i < g.generators.size(); ++i) {
        for (std::size_t j = i + 1; j < g.generators.size(); ++j) {
            if (symplectic_product(g.generators[i], g.generators[j])) {
                throw ParseError("anticommuting rows (with line " + std::to_string(lines[i]) + ")", lines[j]);
            }
        }
    }
    for (std::size_t i = 1; i <= g.generators.size(); ++i) {
        if (gf2_rank({g.generators.begin(), g.generators.begin() + static_cast<std::ptrdiff_t>(i)}) < i) {
            throw ParseError("dependent rows", lines[i - 1]);
        }
    }
    if (signed_input && warnings) {
        warnings->push_back("generator signs discarded; encoders are correct up to a final Pauli layer");
    }
    return g;
}

inline StabilizerGroup parse_stabilizers(std::string_view text, std::vector<std::string>* warnings = nullptr) {
    std::istringstream in{std::string(text)};
    return parse_stabilizers(in, warnings);
}

inline std::string emit_stabilizers(const StabilizerGroup& g) {
    std::string out;
    for (const auto& row : g.generators) {
        out += pauli_string(row);
        out += '\n';
    }
    return out;
}

/// Rows of a tableau as symplectic vectors.
template <typename T>
BitRow tableau_row(const T& t, std::size_t i) {
    BitRow row(t.dim());
    for (std::size_t j = 0; j < t.dim(); ++j) {
        row[j] = t.bit(i, j);
    }
    return row;
}

/// Tableau rows holding the images of Z on the ancilla wires k..n-1.
inline std::vector<std::size_t> ancilla_slots(std::size_t n, std::size_t r) {
    std::vector<std::size_t> slots;
    for (std::size_t i = n - r; i < n; ++i) {
        slots.push_back(n + i);
    }
    return slots;
}

/// True iff the circuit maps the ancilla Z operators onto the group's row space.
inline bool verify_encoder(const Circuit& c, const StabilizerGroup& s) {
    if (c.num_qubits() != s.n) {
        return false;
    }
    const auto t = from_circuit<Tableau>(c);
    std::vector<BitRow> rows;
    for (auto slot : ancilla_slots(s.n, s.num_generators())) {
        rows.push_back(tableau_row(t, slot));
    }
    return same_row_space(rows, s.generators);
}

namespace detail {

/// Applies gates to a set of symplectic rows and records them. Every gate's
/// matrix is an involution, so the recorded gates in reverse order undo the
/// transformation.
class RowReducer {
public:
    explicit RowReducer(const StabilizerGroup& s) : n_(s.n), rows_(s.generators), ops_(s.n) {}

    std::vector<BitRow>& rows() { return rows_; }
    std::size_t n() const { return n_; }

    void apply(const Gate& g) {
        ops_.append(g);
        for (auto& row : rows_) {
            struct Ops {
                BitRow& r;
                void swap(std::size_t a, std::size_t b) {
                    const bool t = r[a];
                    r[a] = r[b];
                    r[b] = t;
                }
                void add(std::size_t s, std::size_t d) { r[d] = r[d] ^ r[s]; }
            };
            apply_gate_rules(Ops{row}, n_, g);
        }
    }

    /// Moves Z on `from` to Z on `to` when every row is a single-qubit Z and
    /// no row acts on `to`.
    void move_z(std::uint32_t from, std::uint32_t to) {
        apply(Gate::cnot(to, from));
        apply(Gate::cnot(from, to));
    }

    Circuit reversed() const {
        Circuit c(n_);
        for (auto it = ops_.gates().rbegin(); it != ops_.gates().rend(); ++it) {
            c.append(*it);
        }
        return c;
    }

private:
    std::size_t n_;
    std::vector<BitRow> rows_;
    Circuit ops_;
};

inline void check_reduced(const std::vector<BitRow>& rows, std::size_t n) {
    const auto expected = ancilla_slots(n, rows.size());
    std::vector<BitRow> target;
    for (auto slot : expected) {
        BitRow r(2 * n);
        r.set(slot);
        target.push_back(r);
    }
    if (!same_row_space(rows, target)) {
        throw std::logic_error("encoder construction did not reach the ancilla stabilizers");
    }
}

}  // namespace detail

struct StagedOptions {
    bool expand_cz = true;  ///< write each CZ as H CX H so the output uses H, S, CX only
};

/// Encoder built in homogeneous stages. The reduction to ancilla Z
/// operators runs CX (X block), CX (Z-only rows), S, CZ, H, CX (moves onto
/// ancilla wires); the encoder is that sequence reversed.
inline Circuit encode_staged(const StabilizerGroup& s, const StagedOptions& opt = {}) {
    validate_generators(s.n, s.generators);
    const std::size_t n = s.n;
    const std::size_t r = s.num_generators();
    const std::size_t k = s.k();
    detail::RowReducer red(s);
    auto& rows = red.rows();

    std::vector<std::uint32_t> order;
    for (std::size_t q = k; q < n; ++q) {
        order.push_back(static_cast<std::uint32_t>(q));
    }
    for (std::size_t q = 0; q < k; ++q) {
        order.push_back(static_cast<std::uint32_t>(q));
    }
    // Gauss-Jordan on the columns in `order`, offset selects the X or Z half.
    auto eliminate = [&](std::size_t first, std::size_t offset, std::vector<std::uint32_t>& pivots) {
        std::size_t rank = first;
        for (auto col : order) {
            if (rank == r) {
                break;
            }
            std::size_t p = rank;
            while (p < r && !rows[p].test(offset + col)) {
                ++p;
            }
            if (p == r) {
                continue;
            }
            std::swap(rows[rank], rows[p]);
            for (std::size_t i = first; i < r; ++i) {
                if (i != rank && rows[i].test(offset + col)) {
                    rows[i] ^= rows[rank];
                }
            }
            pivots.push_back(col);
            ++rank;
        }
        return rank;
    };

    // X block: rows [0, sx) become X on their pivot times some Z.
    std::vector<std::uint32_t> pivot;
    const std::size_t sx = eliminate(0, 0, pivot);
    for (std::size_t i = 0; i < sx; ++i) {
        for (std::size_t t = 0; t < n; ++t) {
            if (t != pivot[i] && rows[i].test(t)) {
                red.apply(Gate::cnot(pivot[i], static_cast<std::uint32_t>(t)));
            }
        }
    }
    // Z-only rows avoid the X pivots (they commute with them); clear each to a single Z.
    if (eliminate(sx, n, pivot) != r) {
        throw std::logic_error("encode_staged: generators are dependent");
    }
    for (std::size_t i = sx; i < r; ++i) {
        for (std::size_t t = 0; t < n; ++t) {
            if (t != pivot[i] && rows[i].test(n + t)) {
                red.apply(Gate::cnot(static_cast<std::uint32_t>(t), pivot[i]));
            }
        }
    }
    for (std::size_t i = 0; i < sx; ++i) {
        for (std::size_t j = sx; j < r; ++j) {
            if (rows[i].test(n + pivot[j])) {
                rows[i] ^= rows[j];
            }
        }
    }
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivot) {
        is_pivot[p] = true;
    }

    // The Z block restricted to the X pivots is now symmetric.
    for (std::size_t i = 0; i < sx; ++i) {
        if (rows[i].test(n + pivot[i])) {
            red.apply(Gate::p(pivot[i]));
        }
    }
    auto cz = [&](std::uint32_t a, std::uint32_t b) {
        if (opt.expand_cz) {
            red.apply(Gate::h(b));
            red.apply(Gate::cnot(a, b));
            red.apply(Gate::h(b));
        } else {
            red.apply(Gate::cz(a, b));
        }
    };
    for (std::size_t i = 0; i < sx; ++i) {
        for (std::size_t j = i + 1; j < sx; ++j) {
            if (rows[i].test(n + pivot[j])) {
                cz(pivot[i], pivot[j]);
            }
        }
    }
    for (std::size_t i = 0; i < sx; ++i) {
        for (std::size_t d = 0; d < n; ++d) {
            if (!is_pivot[d] && rows[i].test(n + d)) {
                cz(pivot[i], static_cast<std::uint32_t>(d));
            }
        }
    }
    for (std::size_t i = 0; i < sx; ++i) {
        red.apply(Gate::h(pivot[i]));
    }
    std::size_t free_anc = k;
    for (auto& p : pivot) {
        if (p >= k) {
            continue;
        }
        while (is_pivot[free_anc]) {
            ++free_anc;
        }
        red.move_z(p, static_cast<std::uint32_t>(free_anc));
        is_pivot[p] = false;
        is_pivot[free_anc] = true;
        p = static_cast<std::uint32_t>(free_anc);
    }
    detail::check_reduced(rows, n);
    return red.reversed();
}

/// Encoder built one generator at a time with controlled Paulis: clear
/// earlier pivots, pick a pivot carrying X, clear every other qubit with a
/// controlled X, Z or Y from the pivot (each a CX wrapped in its own local
/// gates), then rotate the pivot to Z. Gate kinds interleave freely.
inline Circuit encode_unstaged(const StabilizerGroup& s) {
    validate_generators(s.n, s.generators);
    const std::size_t n = s.n;
    const std::size_t r = s.num_generators();
    const std::size_t k = s.k();
    detail::RowReducer red(s);
    auto& rows = red.rows();
    std::vector<std::uint32_t> pivots;
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (rows[i].test(n + pivots[j])) {
                rows[i] ^= rows[j];
            }
        }
        // Ancilla wires first, then the logical wires.
        auto pick = [&](std::size_t offset) -> std::optional<std::uint32_t> {
            for (std::size_t m = 0; m < n; ++m) {
                const std::size_t q = (k + m) % n;
                if (rows[i].test(offset + q)) {
                    return static_cast<std::uint32_t>(q);
                }
            }
            return std::nullopt;
        };
        auto pivot = pick(0);
        if (!pivot) {
            pivot = pick(n);
            if (!pivot) {
                throw std::logic_error("encode_unstaged: generator reduced to the identity");
            }
            red.apply(Gate::h(*pivot));
        }
        const std::uint32_t c = *pivot;
        if (rows[i].test(n + c)) {
            red.apply(Gate::p(c));
        }
        for (std::size_t q = 0; q < n; ++q) {
            const auto t = static_cast<std::uint32_t>(q);
            if (t == c) {
                continue;
            }
            const bool x = rows[i].test(q);
            const bool z = rows[i].test(n + q);
            if (x && z) {
                red.apply(Gate::p(t));
                red.apply(Gate::cnot(c, t));
                red.apply(Gate::p(t));
            } else if (x) {
                red.apply(Gate::cnot(c, t));
            } else if (z) {
                red.apply(Gate::h(t));
                red.apply(Gate::cnot(c, t));
                red.apply(Gate::h(t));
            }
        }
        red.apply(Gate::h(c));
        pivots.push_back(c);
        used[c] = true;
    }
    std::size_t free_anc = k;
    for (auto& p : pivots) {
        if (p >= k) {
            continue;
        }
        while (used[free_anc]) {
            ++free_anc;
        }
        red.move_z(p, static_cast<std::uint32_t>(free_anc));
        used[p] = false;
        used[free_anc] = true;
        p = static_cast<std::uint32_t>(free_anc);
    }
    detail::check_reduced(rows, n);
    return red.reversed();
}

/// Specified rows of an encoder's tableau. Only their row space matters.
struct PartialTarget {
    std::size_t n = 0;
    std::vector<BitRow> rows;
    std::vector<std::size_t> slots;  ///< tableau rows that must span `rows`; defaults to ancilla Z rows

    static PartialTarget from_group(const StabilizerGroup& s) {
        return {s.n, s.generators, ancilla_slots(s.n, s.num_generators())};
    }
};

enum class DedupPolicy { Rref, GlOrbit };

struct PartialSearchOptions {
    DedupPolicy dedup = DedupPolicy::Rref;
    std::optional<std::size_t> max_states;  ///< visited states across both directions
    std::optional<std::uint64_t> max_cost;
    bool bidirectional = true;              ///< used when every move costs 1
    unsigned threads = 1;
};

struct PartialSearchResult {
    std::optional<Circuit> circuit;
    std::optional<std::uint64_t> cost;
    std::uint64_t lower_bound = 0;           ///< every cheaper circuit has been ruled out
    std::uint64_t states = 0;
    std::vector<std::uint64_t> forward_layers;  ///< distinct states first reached at each cost
};

/// All invertible r x r matrices over GF(2), by brute force (r <= 4).
inline std::vector<LinearMatrix> general_linear_group(std::size_t r) {
    if (r == 0 || r > 4) {
        throw std::invalid_argument("general_linear_group: r must be in 1..4");
    }
    std::vector<LinearMatrix> out;
    for (std::uint32_t bits = 0; bits < (1u << (r * r)); ++bits) {
        LinearMatrix a = LinearMatrix::zeros(r);
        for (std::size_t e = 0; e < r * r; ++e) {
            a.set_bit(e / r, e % r, (bits >> e) & 1u);
        }
        if (a.is_invertible()) {
            out.push_back(a);
        }
    }
    return out;
}

/// Every element of GL(r, 2) recovered from a complete linear database on r wires.
inline std::vector<LinearMatrix> general_linear_group(const LayerDatabase<LinearDomain>& db) {
    if (!db.exhaustive()) {
        throw std::invalid_argument("general_linear_group: database is not complete");
    }
    std::vector<Key> seen;
    std::vector<LinearMatrix> out;
    for (const auto& layer : db.layers()) {
        for (std::size_t i = 0; i < layer.size(); ++i) {
            for (const auto& m : orbit<LinearDomain>(decode<LinearDomain>(layer[i], db.num_qubits()), db.mode())) {
                seen.push_back(encode<LinearDomain>(m));
                out.push_back(m);
            }
        }
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        throw std::logic_error("general_linear_group: database orbits overlap");
    }
    return out;
}

inline std::vector<BitRow> left_multiply(const LinearMatrix& a, const std::vector<BitRow>& rows) {
    std::vector<BitRow> out(rows.size(), BitRow(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (a.bit(i, j)) {
                out[i] ^= rows[j];
            }
        }
    }
    return out;
}

/// All left multiples A * target for A in GL(r, 2), with the group read
/// from a linear database on r wires.
inline std::vector<std::vector<BitRow>> gl_orbit_via_linear_db(const std::vector<BitRow>& target,
                                                               const LayerDatabase<LinearDomain>& db) {
    if (target.size() != db.num_qubits()) {
        throw std::invalid_argument("gl_orbit_via_linear_db: database size differs from the row count");
    }
    std::vector<std::vector<BitRow>> out;
    for (const auto& a : general_linear_group(db)) {
        out.push_back(left_multiply(a, target));
    }
    return out;
}

namespace detail {

/// Up to 8 rows of a 16-bit symplectic vector, packed row i at bits [16i, 16i+16).
struct PackedRows {
    std::array<std::uint16_t, 8> rows{};
    std::size_t count = 0;
};

inline Key pack(const PackedRows& s) {
    Key k = 0;
    for (std::size_t i = 0; i < s.count; ++i) {
        k |= Key{s.rows[i]} << (16 * i);
    }
    return k;
}

inline PackedRows unpack(Key k, std::size_t count) {
    PackedRows s;
    s.count = count;
    for (std::size_t i = 0; i < count; ++i) {
        s.rows[i] = static_cast<std::uint16_t>(k >> (16 * i));
    }
    return s;
}

inline PackedRows rref_rows(PackedRows s) {
    std::size_t rank = 0;
    for (unsigned col = 0; col < 16 && rank < s.count; ++col) {
        const std::uint16_t bit = static_cast<std::uint16_t>(1u << col);
        std::size_t p = rank;
        while (p < s.count && !(s.rows[p] & bit)) {
            ++p;
        }
        if (p == s.count) {
            continue;
        }
        std::swap(s.rows[rank], s.rows[p]);
        for (std::size_t i = 0; i < s.count; ++i) {
            if (i != rank && (s.rows[i] & bit)) {
                s.rows[i] ^= s.rows[rank];
            }
        }
        ++rank;
    }
    return s;
}

struct PartialMove {
    std::vector<Gate> gates;
    std::uint32_t weight = 1;
    std::array<std::uint16_t, 16> matrix_rows{};  ///< row j of the move's symplectic matrix
};

inline std::vector<PartialMove> partial_moves(std::size_t n, const CostModel& model) {
    if (!model.unit_or_zero_weights()) {
        throw std::invalid_argument("partial synthesis supports gate weights 0 and 1 only");
    }
    const auto instances = gate_instances(n, model.gates());
    std::vector<std::vector<Gate>> layers;
    std::vector<std::uint32_t> weights;
    if (model.metric() != Metric::Depth) {
        for (const auto& g : instances) {
            layers.push_back({g});
            weights.push_back(*model.weight(g.kind));
        }
    } else {
        std::vector<Gate> singles;
        std::vector<Gate> pairs;
        for (const auto& g : instances) {
            (g.two_qubit() ? pairs : singles).push_back(g);
        }
        std::vector<Gate> current;
        enumerate_layers(n, 0, 0, singles, pairs, current, layers);
        for (auto& layer : layers) {
            std::sort(layer.begin(), layer.end());
        }
        std::sort(layers.begin(), layers.end());
        weights.assign(layers.size(), 1);
    }
    std::vector<PartialMove> moves;
    std::vector<std::array<std::uint16_t, 16>> seen;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        SmallTableau t(n);
        for (const auto& g : layers[i]) {
            t.apply_unchecked(g);
        }
        PartialMove m{layers[i], weights[i], {}};
        for (std::size_t row = 0; row < 2 * n; ++row) {
            std::uint16_t v = 0;
            for (std::size_t col = 0; col < 2 * n; ++col) {
                v |= static_cast<std::uint16_t>(t.bit(row, col)) << col;
            }
            m.matrix_rows[row] = v;
        }
        if (model.metric() == Metric::Depth) {
            if (std::find(seen.begin(), seen.end(), m.matrix_rows) != seen.end()) {
                continue;
            }
            seen.push_back(m.matrix_rows);
        }
        moves.push_back(std::move(m));
    }
    return moves;
}

inline PackedRows apply_partial_move(const PackedRows& s, const PartialMove& m) {
    PackedRows out;
    out.count = s.count;
    for (std::size_t i = 0; i < s.count; ++i) {
        std::uint16_t v = 0;
        for (std::uint16_t bits = s.rows[i]; bits; bits &= static_cast<std::uint16_t>(bits - 1)) {
            v ^= m.matrix_rows[static_cast<unsigned>(std::countr_zero(bits))];
        }
        out.rows[i] = v;
    }
    return out;
}

/// State keys that depend only on the row space.
class RowSpaceKeyer {
public:
    RowSpaceKeyer(DedupPolicy policy, std::size_t r) : policy_(policy) {
        if (policy_ == DedupPolicy::GlOrbit) {
            group_ = general_linear_group(r);
        }
    }

    Key operator()(const PackedRows& s) const {
        if (policy_ == DedupPolicy::Rref) {
            return pack(rref_rows(s));
        }
        Key best = ~Key{0};
        for (const auto& a : group_) {
            PackedRows m;
            m.count = s.count;
            for (std::size_t i = 0; i < s.count; ++i) {
                for (std::size_t j = 0; j < s.count; ++j) {
                    if (a.bit(i, j)) {
                        m.rows[i] ^= s.rows[j];
                    }
                }
            }
            best = std::min(best, pack(m));
        }
        return best;
    }

private:
    DedupPolicy policy_;
    std::vector<LinearMatrix> group_;
};

struct KeyHash {
    std::size_t operator()(Key k) const { return static_cast<std::size_t>(hash_key(k)); }
};

struct Visit {
    Key parent = 0;
    std::uint32_t move = 0;
    std::uint64_t cost = 0;
    bool root = false;
};

using VisitMap = std::unordered_map<Key, Visit, KeyHash>;

inline std::vector<std::uint32_t> trace(const VisitMap& visited, Key k) {
    std::vector<std::uint32_t> path;
    for (auto it = visited.find(k); !it->second.root; it = visited.find(it->second.parent)) {
        path.push_back(it->second.move);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

/// One search direction: states stored as representative matrices keyed by row space.
struct Frontier {
    VisitMap visited;
    std::vector<std::pair<Key, PackedRows>> layer;
    std::uint64_t depth = 0;
};

}  // namespace detail

/// Minimal-cost circuit whose designated tableau rows span the target rows.
/// Searches over row spaces, expanding in cost order; with unit weights the
/// search runs from both ends and meets in the middle.
inline PartialSearchResult synth_partial(const PartialTarget& target, const CostModel& model,
                                         const PartialSearchOptions& opt = {}) {
    const std::size_t n = target.n;
    const std::size_t r = target.rows.size();
    if (n == 0 || n > 8) {
        throw std::invalid_argument("synth_partial: supports 1..8 qubits");
    }
    if (r == 0 || r != target.slots.size()) {
        throw std::invalid_argument("synth_partial: row and slot counts differ");
    }
    validate_generators(n, target.rows);
    for (auto slot : target.slots) {
        if (slot >= 2 * n) {
            throw std::invalid_argument("synth_partial: slot out of range");
        }
    }
    const auto moves = detail::partial_moves(n, model);
    const detail::RowSpaceKeyer keyer(opt.dedup, r);
    const unsigned threads = resolve_threads(opt.threads);

    detail::PackedRows start;
    detail::PackedRows goal;
    start.count = goal.count = r;
    for (std::size_t i = 0; i < r; ++i) {
        start.rows[i] = static_cast<std::uint16_t>(1u << target.slots[i]);
        for (std::size_t j = 0; j < 2 * n; ++j) {
            goal.rows[i] |= static_cast<std::uint16_t>(target.rows[i].test(j)) << j;
        }
    }
    const Key start_key = keyer(start);
    const Key goal_key = keyer(goal);

    PartialSearchResult result;
    auto emit = [&](const std::vector<std::uint32_t>& forward, const std::vector<std::uint32_t>& backward) {
        Circuit c(n);
        for (auto m : forward) {
            for (const auto& g : moves[m].gates) {
                c.append(g);
            }
        }
        for (auto it = backward.rbegin(); it != backward.rend(); ++it) {
            for (const auto& g : moves[*it].gates) {
                c.append(g);
            }
        }
        result.cost = cost(c, model);
        result.lower_bound = *result.cost;
        result.circuit = std::move(c);
    };

    // Children of a layer, computed in parallel and merged in frontier order.
    auto expand = [&](detail::Frontier& f, bool zero_weight) {
        std::vector<std::vector<std::tuple<Key, detail::PackedRows, std::uint32_t>>> children(f.layer.size());
        detail::parallel_for(f.layer.size(), threads, [&](std::size_t i, unsigned) {
            for (std::uint32_t m = 0; m < moves.size(); ++m) {
                if ((moves[m].weight == 0) != zero_weight) {
                    continue;
                }
                const auto next = detail::apply_partial_move(f.layer[i].second, moves[m]);
                const Key key = keyer(next);
                if (!f.visited.contains(key)) {
                    children[i].emplace_back(key, next, m);
                }
            }
        });
        std::vector<std::pair<Key, detail::PackedRows>> fresh;
        const std::uint64_t next_cost = f.depth + (zero_weight ? 0 : 1);
        for (std::size_t i = 0; i < f.layer.size(); ++i) {
            for (const auto& [key, rows, m] : children[i]) {
                if (f.visited.emplace(key, detail::Visit{f.layer[i].first, m, next_cost, false}).second) {
                    fresh.emplace_back(key, rows);
                }
            }
        }
        return fresh;
    };
    auto over_budget = [&](std::size_t states) { return opt.max_states && states > *opt.max_states; };

    detail::Frontier fwd;
    fwd.visited.emplace(start_key, detail::Visit{0, 0, 0, true});
    fwd.layer.emplace_back(start_key, start);
    if (start_key == goal_key) {
        emit({}, {});
        result.states = 1;
        result.forward_layers = {1};
        return result;
    }
    const bool has_zero = std::any_of(moves.begin(), moves.end(), [](const auto& m) { return m.weight == 0; });

    if (opt.bidirectional && !has_zero) {
        detail::Frontier bwd;
        bwd.visited.emplace(goal_key, detail::Visit{0, 0, 0, true});
        bwd.layer.emplace_back(goal_key, goal);
        result.forward_layers = {1};
        for (;;) {
            const std::uint64_t reached = fwd.depth + bwd.depth;
            if ((opt.max_cost && reached >= *opt.max_cost) || over_budget(fwd.visited.size() + bwd.visited.size()) ||
                fwd.layer.empty() || bwd.layer.empty()) {
                result.lower_bound = reached + 1;
                result.states = fwd.visited.size() + bwd.visited.size();
                return result;
            }
            const bool forward = fwd.layer.size() <= bwd.layer.size();
            auto& side = forward ? fwd : bwd;
            const auto& other = forward ? bwd : fwd;
            auto fresh = expand(side, false);
            side.depth += 1;
            if (forward) {
                result.forward_layers.push_back(fresh.size());
            }
            std::optional<Key> meet;
            for (const auto& [key, rows] : fresh) {
                if (other.visited.contains(key)) {
                    meet = key;
                    break;
                }
            }
            side.layer = std::move(fresh);
            if (meet) {
                result.states = fwd.visited.size() + bwd.visited.size();
                emit(detail::trace(fwd.visited, *meet), detail::trace(bwd.visited, *meet));
                return result;
            }
        }
    }

    // Cost-ordered search: saturate each cost level under free moves, then step.
    result.forward_layers.clear();
    for (;;) {
        std::size_t level_size = fwd.layer.size();
        auto level = fwd.layer;
        for (auto frontier = fwd.layer; has_zero && !frontier.empty();) {
            fwd.layer = std::move(frontier);
            frontier = expand(fwd, true);
            level_size += frontier.size();
            level.insert(level.end(), frontier.begin(), frontier.end());
        }
        fwd.layer = std::move(level);
        result.forward_layers.push_back(level_size);
        if (fwd.visited.contains(goal_key)) {
            result.states = fwd.visited.size();
            emit(detail::trace(fwd.visited, goal_key), {});
            return result;
        }
        if ((opt.max_cost && fwd.depth >= *opt.max_cost) || over_budget(fwd.visited.size()) || fwd.layer.empty()) {
            result.lower_bound = fwd.depth + 1;
            result.states = fwd.visited.size();
            return result;
        }
        fwd.layer = expand(fwd, false);
        fwd.depth += 1;
    }
}

}  // namespace cliffopt

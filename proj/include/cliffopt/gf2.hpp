#pragma once

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cliffopt {

/// A GF(2) row vector; symplectic rows hold x bits in [0, n) and z bits in [n, 2n).
using BitRow = boost::dynamic_bitset<std::uint64_t>;

/// Reduced row echelon form with zero rows dropped. Pivots are taken from
/// the lowest column index, so equal row spaces give identical results.
inline std::vector<BitRow> rref(std::vector<BitRow> rows) {
    if (rows.empty()) {
        return rows;
    }
    const std::size_t width = rows.front().size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < width && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && !rows[pivot].test(col)) {
            ++pivot;
        }
        if (pivot == rows.size()) {
            continue;
        }
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != rank && rows[i].test(col)) {
                rows[i] ^= rows[rank];
            }
        }
        ++rank;
    }
    rows.resize(rank);
    return rows;
}

inline std::size_t gf2_rank(std::vector<BitRow> rows) { return rref(std::move(rows)).size(); }

inline bool same_row_space(const std::vector<BitRow>& a, const std::vector<BitRow>& b) {
    return rref(a) == rref(b);
}

/// ⟨u, v⟩ = u_x·v_z + u_z·v_x mod 2.
inline bool symplectic_product(const BitRow& u, const BitRow& v) {
    const std::size_t n = u.size() / 2;
    if (u.size() != v.size() || u.size() % 2 != 0) {
        throw std::invalid_argument("symplectic_product: row widths differ or are odd");
    }
    bool s = false;
    for (std::size_t j = 0; j < n; ++j) {
        s ^= (u.test(j) && v.test(n + j)) != (u.test(n + j) && v.test(j));
    }
    return s;
}

}  // namespace cliffopt

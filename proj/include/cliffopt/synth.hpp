#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "circuit.hpp"
#include "database.hpp"
#include "linear.hpp"
#include "tableau.hpp"

namespace cliffopt {

/// Raised when a database lookup contradicts the layer structure.
class DatabaseInconsistency : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace detail {

/// For a permutation of qubit column groups, rho[i] is the column group holding e_i.
template <typename Domain>
std::optional<std::vector<std::uint32_t>> column_permutation(const typename Domain::element_type& e) {
    const std::size_t n = e.num_qubits();
    std::vector<std::uint32_t> rho(n, 0);
    std::vector<bool> seen(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        const auto c = Domain::column(e, j);
        if (c == 0 || (c & (c - 1)) != 0) {
            return std::nullopt;
        }
        const auto i = static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(c)));
        if (i >= n || seen[i]) {
            return std::nullopt;
        }
        if (Domain::paired && Domain::column(e, n + j) != (1u << (n + i))) {
            return std::nullopt;
        }
        seen[i] = true;
        rho[i] = static_cast<std::uint32_t>(j);
    }
    return rho;
}

template <typename Domain>
bool is_terminal(const typename Domain::element_type& e, EquivMode mode) {
    if (mode == EquivMode::Independent) {
        return column_permutation<Domain>(e).has_value();
    }
    return e == Domain::identity(e.num_qubits());
}

}  // namespace detail

/// Optimal circuit for `target` read back from the database, or nullopt when
/// its cost exceeds the stored layers. Exact and Simultaneous results
/// reproduce the target exactly; Independent results carry the output
/// relabeling (or explicit SWAPs when requested).
template <typename Domain>
std::optional<Circuit> reconstruct(const LayerDatabase<Domain>& db, const typename Domain::element_type& target,
                                   bool explicit_swaps = false) {
    using Element = typename Domain::element_type;
    auto cost = db.lookup(target);
    if (!cost) {
        return std::nullopt;
    }
    const std::size_t n = db.num_qubits();
    const EquivMode mode = db.mode();
    std::vector<const Move*> unit_moves;
    std::vector<const Move*> zero_moves;
    for (const auto& m : db.moves()) {
        (m.weight == 0 ? zero_moves : unit_moves).push_back(&m);
    }
    auto step_down = [&](const Element& cur, unsigned c) -> const Move* {
        if (c == 0) {
            return nullptr;
        }
        for (const Move* m : unit_moves) {
            Element next = cur;
            apply_move(next, *m);
            if (db.lookup_key(db.key_of(next)) == c - 1) {
                return m;
            }
        }
        return nullptr;
    };

    std::vector<const Move*> path;
    Element cur = target;
    unsigned c = *cost;
    for (;;) {
        if (c == 0 && detail::is_terminal<Domain>(cur, mode)) {
            break;
        }
        if (const Move* m = step_down(cur, c)) {
            apply_move(cur, *m);
            path.push_back(m);
            --c;
            continue;
        }
        // Free gates first: search the zero-weight neighbourhood for a state
        // that either terminates or admits a cost-reducing step.
        std::map<Key, std::pair<Key, const Move*>> parent;
        std::deque<Element> queue{cur};
        parent.emplace(encode<Domain>(cur), std::pair<Key, const Move*>{0, nullptr});
        std::optional<Element> found;
        while (!queue.empty() && !found) {
            Element s = queue.front();
            queue.pop_front();
            for (const Move* m : zero_moves) {
                Element next = s;
                apply_move(next, *m);
                const Key k = encode<Domain>(next);
                if (!parent.emplace(k, std::pair<Key, const Move*>{encode<Domain>(s), m}).second) {
                    continue;
                }
                if ((c == 0 && detail::is_terminal<Domain>(next, mode)) || step_down(next, c)) {
                    found = next;
                    break;
                }
                queue.push_back(next);
            }
        }
        if (!found) {
            throw DatabaseInconsistency("reconstruction stalled at cost " + std::to_string(c));
        }
        std::vector<const Move*> hop;
        for (Key k = encode<Domain>(*found); parent.at(k).second != nullptr; k = parent.at(k).first) {
            hop.push_back(parent.at(k).second);
        }
        path.insert(path.end(), hop.rbegin(), hop.rend());
        cur = *found;
    }

    // target * m_1 * ... * m_j = cur, and every move is an involution.
    Circuit out(n);
    if (mode == EquivMode::Independent) {
        out.set_relabel(*detail::column_permutation<Domain>(cur));
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
        for (const auto& g : (*it)->gates) {
            out.append(g);
        }
    }
    if (explicit_swaps) {
        return with_explicit_swaps(out);
    }
    return out;
}

inline std::optional<Circuit> reconstruct(const LayerDatabase<CliffordDomain>& db, const Tableau& target,
                                          bool explicit_swaps = false) {
    return reconstruct(db, SmallTableau::convert(target), explicit_swaps);
}

struct MimOptions {
    unsigned threads = 1;
    bool explicit_swaps = false;
};

struct MimResult {
    std::optional<Circuit> circuit;
    std::optional<unsigned> cost;
    std::uint64_t candidates = 0;  ///< orbit members tested against the database
};

namespace detail {

template <typename Element>
Element inverse_of(const Element& e) {
    return e.inverse();
}

}  // namespace detail

/// Meet-in-the-middle: optimal circuits up to twice the stored cost. For
/// each total cost only the split whose right half comes from the smallest
/// layer is scanned; if the optimum equals that total, every split of an
/// optimal circuit produces a hit, so one split is enough.
template <typename Domain>
MimResult mim_search(const LayerDatabase<Domain>& db, const typename Domain::element_type& target,
                     const MimOptions& options = {}) {
    using Element = typename Domain::element_type;
    MimResult result;
    if (auto c = db.lookup(target)) {
        result.cost = *c;
        result.circuit = reconstruct(db, target, options.explicit_swaps);
        return result;
    }
    const unsigned c = db.max_cost();
    if (db.exhaustive()) {
        throw DatabaseInconsistency("exhaustive database does not contain the target");
    }
    const unsigned threads = std::max(1u, options.threads);
    for (unsigned tally = c + 1; tally <= 2 * c; ++tally) {
        unsigned d = tally - c;
        for (unsigned e = tally - c; e <= c; ++e) {
            if (db.layers()[e].size() < db.layers()[d].size()) {
                d = e;
            }
        }
        const Layer& layer = db.layers()[d];
        const unsigned want = tally - d;
        // Lowest key index with a hit wins, independent of the thread count.
        std::atomic<std::size_t> best{std::numeric_limits<std::size_t>::max()};
        std::vector<std::optional<std::pair<Element, Element>>> hits(threads);
        std::vector<std::size_t> hit_index(threads, std::numeric_limits<std::size_t>::max());
        std::atomic<std::uint64_t> visited{0};
        auto scan = [&](unsigned id) {
            std::uint64_t local = 0;
            for (std::size_t i = id; i < layer.size(); i += threads) {
                if (i > best.load(std::memory_order_relaxed)) {
                    break;
                }
                const Element rep = decode<Domain>(layer[i], db.num_qubits());
                std::vector<Element> members;
                switch (db.mode()) {
                    case EquivMode::Exact: members = {rep}; break;
                    case EquivMode::Simultaneous: members = orbit<Domain>(rep, EquivMode::Simultaneous); break;
                    case EquivMode::Independent: members = column_orbit<Domain>(rep); break;
                }
                for (const auto& b : members) {
                    ++local;
                    const Element a = target * detail::inverse_of(b);
                    if (db.lookup_key(db.key_of(a)) == want) {
                        hits[id] = std::pair<Element, Element>{a, b};
                        hit_index[id] = i;
                        std::size_t cur = best.load();
                        while (i < cur && !best.compare_exchange_weak(cur, i)) {
                        }
                        break;
                    }
                }
                if (hits[id]) {
                    break;
                }
            }
            visited += local;
        };
        if (threads == 1) {
            scan(0);
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; ++t) {
                pool.emplace_back(scan, t);
            }
            for (auto& th : pool) {
                th.join();
            }
        }
        result.candidates += visited.load();
        const std::size_t winner = best.load();
        if (winner == std::numeric_limits<std::size_t>::max()) {
            continue;
        }
        for (unsigned t = 0; t < threads; ++t) {
            if (hit_index[t] == winner) {
                const auto& [a, b] = *hits[t];
                Circuit left = *reconstruct(db, a);
                const Circuit right = *reconstruct(db, b);
                left.append(right);
                result.cost = tally;
                result.circuit = options.explicit_swaps ? with_explicit_swaps(left) : left;
                return result;
            }
        }
    }
    return result;
}

inline MimResult mim_search(const LayerDatabase<CliffordDomain>& db, const Tableau& target,
                            const MimOptions& options = {}) {
    return mim_search(db, SmallTableau::convert(target), options);
}

/// Database lookup with a meet-in-the-middle fallback.
template <typename Domain>
std::optional<unsigned> optimal_cost(const LayerDatabase<Domain>& db, const typename Domain::element_type& e,
                                     bool use_mim, std::uint64_t* candidates = nullptr) {
    if (auto c = db.lookup(e)) {
        return c;
    }
    if (!use_mim || db.exhaustive()) {
        return std::nullopt;
    }
    auto r = mim_search(db, e);
    if (candidates) {
        *candidates += r.candidates;
    }
    return r.cost;
}

}  // namespace cliffopt

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "canonical.hpp"
#include "cost_model.hpp"
#include "gate.hpp"

namespace cliffopt {

/// One search step: a single gate, or a full parallel layer for the depth metric.
struct Move {
    std::vector<Gate> gates;
    std::uint32_t weight = 1;

    friend bool operator==(const Move&, const Move&) = default;
};

template <typename Element>
void apply_move(Element& e, const Move& m) {
    for (const auto& g : m.gates) {
        e.apply_unchecked(g);
    }
}

namespace detail {

/// All placements of the admitted kinds on n qubits. S and Sdg share a
/// symplectic matrix, so Sdg is only used when S is not admitted.
inline std::vector<Gate> gate_instances(std::size_t n, GateSet gates) {
    std::vector<Gate> out;
    for (auto kind : kAllGateKinds) {
        if (!gates.contains(kind)) {
            continue;
        }
        if (kind == GateKind::Pdag && gates.contains(GateKind::P)) {
            continue;
        }
        auto q = [](std::size_t v) { return static_cast<std::uint32_t>(v); };
        if (arity(kind) == 1) {
            for (std::size_t a = 0; a < n; ++a) {
                out.push_back({kind, q(a), 0});
            }
        } else if (kind == GateKind::Cnot) {
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b) {
                    if (a != b) {
                        out.push_back({kind, q(a), q(b)});
                    }
                }
            }
        } else {
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = a + 1; b < n; ++b) {
                    out.push_back({kind, q(a), q(b)});
                }
            }
        }
    }
    return out;
}

inline void enumerate_layers(std::size_t n, std::size_t q, std::uint32_t used, const std::vector<Gate>& singles,
                             const std::vector<Gate>& pairs, std::vector<Gate>& current,
                             std::vector<std::vector<Gate>>& out) {
    while (q < n && ((used >> q) & 1u)) {
        ++q;
    }
    if (q == n) {
        if (!current.empty()) {
            out.push_back(current);
        }
        return;
    }
    const std::uint32_t mark = used | (1u << q);
    enumerate_layers(n, q + 1, mark, singles, pairs, current, out);
    for (const auto& g : singles) {
        if (g.q0 == q) {
            current.push_back(g);
            enumerate_layers(n, q + 1, mark, singles, pairs, current, out);
            current.pop_back();
        }
    }
    for (const auto& g : pairs) {
        std::uint32_t other;
        if (g.q0 == q) {
            other = g.q1;
        } else if (g.q1 == q) {
            other = g.q0;
        } else {
            continue;
        }
        if (other < q || ((used >> other) & 1u)) {
            continue;
        }
        current.push_back(g);
        enumerate_layers(n, q + 1, mark | (1u << other), singles, pairs, current, out);
        current.pop_back();
    }
}

}  // namespace detail

/// Search steps for a cost model, in tie-break order. Every move's matrix is
/// an involution, which the layered searches rely on.
template <typename Domain>
std::vector<Move> make_moves(std::size_t n, const CostModel& model) {
    for (auto k : kAllGateKinds) {
        if (model.gates().contains(k) && !Domain::admits(k)) {
            throw std::invalid_argument("gate " + std::string(mnemonic(k)) + " is not admitted in this domain");
        }
    }
    if (!model.unit_or_zero_weights()) {
        throw std::invalid_argument("layered search supports gate weights 0 and 1 only");
    }
    const auto instances = detail::gate_instances(n, model.gates());
    std::vector<Move> moves;
    if (model.metric() != Metric::Depth) {
        for (const auto& g : instances) {
            moves.push_back({{g}, *model.weight(g.kind)});
        }
    } else {
        std::vector<Gate> singles;
        std::vector<Gate> pairs;
        for (const auto& g : instances) {
            (g.two_qubit() ? pairs : singles).push_back(g);
        }
        std::vector<std::vector<Gate>> layers;
        std::vector<Gate> current;
        detail::enumerate_layers(n, 0, 0, singles, pairs, current, layers);
        for (auto& layer : layers) {
            std::sort(layer.begin(), layer.end());
        }
        std::sort(layers.begin(), layers.end());
        // Layers with equal matrices are interchangeable; keep the first.
        std::map<Key, bool> seen;
        for (auto& layer : layers) {
            auto e = Domain::identity(n);
            for (const auto& g : layer) {
                e.apply_unchecked(g);
            }
            if (seen.emplace(encode<Domain>(e), true).second) {
                moves.push_back({std::move(layer), 1});
            }
        }
    }
    for (const auto& m : moves) {
        auto e = Domain::identity(n);
        apply_move(e, m);
        apply_move(e, m);
        if (!(e == Domain::identity(n))) {
            throw std::logic_error("search move is not an involution");
        }
    }
    return moves;
}

}  // namespace cliffopt

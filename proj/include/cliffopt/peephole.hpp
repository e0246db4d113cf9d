#pragma once

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "cost_model.hpp"
#include "database.hpp"
#include "synth.hpp"
#include "tableau.hpp"

namespace cliffopt {

/// Static table of gate pairs that commute as operators (not merely up to
/// Pauli factors). Every entry is checked against the tableau algebra in the tests.
inline bool gates_commute(const Gate& a, const Gate& b) {
    if (!a.overlaps(b) || a == b) {
        return true;
    }
    auto diagonal = [](const Gate& g) {
        return g.kind == GateKind::P || g.kind == GateKind::Pdag || g.kind == GateKind::Cz;
    };
    if (diagonal(a) && diagonal(b)) {
        return true;
    }
    if (a.kind == GateKind::Cnot && b.kind == GateKind::Cnot) {
        // Shared control or shared target, never control against target.
        return a.q0 != b.q1 && a.q1 != b.q0;
    }
    if (a.kind == GateKind::Cnot && diagonal(b)) {
        return !b.acts_on(a.q1);
    }
    if (b.kind == GateKind::Cnot && diagonal(a)) {
        return !a.acts_on(b.q1);
    }
    return false;
}

struct PeepholeConfig {
    std::size_t max_qubits = 4;
    std::optional<std::size_t> window;  ///< gates scanned past the pivot; unbounded when empty
    std::optional<std::size_t> max_passes;
    bool use_mim = false;               ///< fall back to meet-in-the-middle for lookups beyond the database
    std::size_t max_qubit_sets = 32;    ///< qubit sets tried per pivot
    std::size_t dead_after = 4;         ///< blocked gates on a qubit before it stops collecting
};

/// A set of gates that can be made contiguous with the pivot.
struct Subcircuit {
    std::vector<std::size_t> gate_indices;  ///< ascending, first is the pivot
    std::vector<std::uint32_t> qubits;      ///< ascending; local qubit i is qubits[i]
    Circuit local;
};

namespace detail {

inline std::vector<std::uint32_t> gate_qubits(const Gate& g) {
    if (g.two_qubit()) {
        return {std::min(g.q0, g.q1), std::max(g.q0, g.q1)};
    }
    return {g.q0};
}

class SubcircuitScanner {
public:
    SubcircuitScanner(const std::vector<Gate>& gates, std::size_t n, const PeepholeConfig& cfg)
        : gates_(gates), cfg_(cfg), skipped_(n), in_q_(n, false), dead_(n, false) {}

    /// Gates ⊆ q that commute back to the pivot, plus qubit sets that would
    /// let one more blocked gate join.
    std::pair<std::vector<std::size_t>, std::vector<std::vector<std::uint32_t>>> scan(
        std::size_t pivot, const std::vector<std::uint32_t>& q) {
        for (auto v : q) {
            in_q_[v] = true;
            dead_[v] = false;
        }
        std::vector<std::size_t> chosen{pivot};
        std::vector<std::vector<std::uint32_t>> grow;
        std::size_t alive = q.size();
        const std::size_t end =
            cfg_.window ? std::min(gates_.size(), pivot + 1 + *cfg_.window) : gates_.size();
        for (std::size_t i = pivot + 1; i < end && alive > 0; ++i) {
            const Gate& g = gates_[i];
            const bool t0 = in_q_[g.q0];
            const bool t1 = g.two_qubit() && in_q_[g.q1];
            if (t0 || t1) {
                const bool inside = t0 && (!g.two_qubit() || t1);
                if (movable(g)) {
                    if (inside) {
                        chosen.push_back(i);
                        continue;
                    }
                    if (q.size() < cfg_.max_qubits) {
                        auto bigger = q;
                        bigger.push_back(t0 ? g.q1 : g.q0);
                        std::sort(bigger.begin(), bigger.end());
                        grow.push_back(std::move(bigger));
                    }
                }
                for (auto v : gate_qubits(g)) {
                    if (in_q_[v] && !dead_[v] &&
                        (g.kind == GateKind::H || g.kind == GateKind::Swap || skipped_[v].size() + 1 >= cfg_.dead_after)) {
                        dead_[v] = true;
                        --alive;
                    }
                }
            }
            skip(i);
        }
        for (auto v : q) {
            in_q_[v] = false;
        }
        for (auto v : touched_) {
            skipped_[v].clear();
        }
        touched_.clear();
        return {std::move(chosen), std::move(grow)};
    }

private:
    bool movable(const Gate& g) const {
        for (auto v : gate_qubits(g)) {
            for (std::size_t s : skipped_[v]) {
                if (!gates_commute(g, gates_[s])) {
                    return false;
                }
            }
        }
        return true;
    }

    void skip(std::size_t i) {
        for (auto v : gate_qubits(gates_[i])) {
            if (skipped_[v].empty()) {
                touched_.push_back(v);
            }
            skipped_[v].push_back(i);
        }
    }

    const std::vector<Gate>& gates_;
    const PeepholeConfig& cfg_;
    std::vector<std::vector<std::size_t>> skipped_;
    std::vector<bool> in_q_;
    std::vector<bool> dead_;
    std::vector<std::uint32_t> touched_;
};

inline Subcircuit make_subcircuit(const std::vector<Gate>& gates, std::vector<std::size_t> indices,
                                  std::vector<std::uint32_t> qubits) {
    Subcircuit s;
    s.local = Circuit(qubits.size());
    for (std::size_t i : indices) {
        Gate g = gates[i];
        auto local = [&](std::uint32_t v) {
            return static_cast<std::uint32_t>(std::lower_bound(qubits.begin(), qubits.end(), v) - qubits.begin());
        };
        g.q0 = local(g.q0);
        if (g.two_qubit()) {
            g.q1 = local(g.q1);
        }
        s.local.append(g);
    }
    s.gate_indices = std::move(indices);
    s.qubits = std::move(qubits);
    return s;
}

inline std::vector<Subcircuit> gather(const std::vector<Gate>& gates, std::size_t n, std::size_t pivot,
                                      const PeepholeConfig& cfg) {
    if (pivot >= gates.size()) {
        throw std::out_of_range("gather_subcircuits: pivot out of range");
    }
    if (detail::gate_qubits(gates[pivot]).size() > cfg.max_qubits) {
        return {};
    }
    SubcircuitScanner scanner(gates, n, cfg);
    std::vector<Subcircuit> out;
    std::set<std::vector<std::uint32_t>> seen_sets;
    std::set<std::vector<std::size_t>> seen_gates;
    std::vector<std::vector<std::uint32_t>> todo{gate_qubits(gates[pivot])};
    seen_sets.insert(todo.front());
    for (std::size_t next = 0; next < todo.size() && next < cfg.max_qubit_sets; ++next) {
        const auto q = todo[next];
        auto [chosen, grow] = scanner.scan(pivot, q);
        for (auto& bigger : grow) {
            if (seen_sets.insert(bigger).second) {
                todo.push_back(std::move(bigger));
            }
        }
        if (seen_gates.insert(chosen).second) {
            out.push_back(make_subcircuit(gates, std::move(chosen), q));
        }
    }
    return out;
}

}  // namespace detail

inline std::vector<Subcircuit> gather_subcircuits(const Circuit& c, std::size_t pivot, const PeepholeConfig& cfg) {
    return detail::gather(c.gates(), c.num_qubits(), pivot, cfg);
}

struct PeepholePass {
    std::size_t gates = 0;
    std::uint64_t depth = 0;
    std::uint64_t scanned = 0;
    std::uint64_t replacements = 0;
    double seconds = 0;
};

struct PeepholeReport {
    std::size_t input_gates = 0;
    std::uint64_t input_depth = 0;
    std::uint64_t input_cost = 0;
    std::size_t output_gates = 0;
    std::uint64_t output_depth = 0;
    std::uint64_t output_cost = 0;
    std::uint64_t not_found = 0;       ///< subcircuits whose optimal cost was out of reach
    std::uint64_t padding_rejects = 0; ///< replacements that would have used an idle qubit
    double seconds = 0;
    std::vector<PeepholePass> passes;
};

inline nlohmann::json to_json(const PeepholeReport& r) {
    nlohmann::json passes = nlohmann::json::array();
    for (std::size_t i = 0; i < r.passes.size(); ++i) {
        const auto& p = r.passes[i];
        passes.push_back({{"pass", i + 1},
                          {"gates", p.gates},
                          {"depth", p.depth},
                          {"scanned", p.scanned},
                          {"replacements", p.replacements},
                          {"seconds", p.seconds}});
    }
    return {{"schema", "cliffopt.peephole/1"},
            {"input", {{"gates", r.input_gates}, {"depth", r.input_depth}, {"cost", r.input_cost}}},
            {"output", {{"gates", r.output_gates}, {"depth", r.output_depth}, {"cost", r.output_cost}}},
            {"not_found", r.not_found},
            {"padding_rejects", r.padding_rejects},
            {"seconds", r.seconds},
            {"passes", passes}};
}

struct PeepholeResult {
    Circuit circuit;
    PeepholeReport report;
};

/// Replaces small subcircuits by optimal ones from a simultaneous-renaming
/// database until a full sweep changes nothing.
inline PeepholeResult optimize(const Circuit& input, const LayerDatabase<CliffordDomain>& db,
                               const PeepholeConfig& cfg = {}) {
    using clock = std::chrono::steady_clock;
    if (db.mode() == EquivMode::Independent) {
        throw std::invalid_argument("peephole optimization needs an exact or simultaneous database");
    }
    if (cfg.max_qubits == 0 || cfg.max_qubits > db.num_qubits()) {
        throw std::invalid_argument("peephole: subcircuit width exceeds the database");
    }
    if (cfg.window && *cfg.window == 0) {
        throw std::invalid_argument("peephole: window must be at least 1");
    }
    if (input.relabel()) {
        throw std::invalid_argument("peephole: circuits with a relabeling are not supported");
    }
    const auto start = clock::now();
    const CostModel& model = db.model();
    const std::size_t width = db.num_qubits();
    PeepholeResult result{input, {}};
    PeepholeReport& rep = result.report;
    rep.input_gates = input.size();
    rep.input_depth = depth(input);
    rep.input_cost = cost(input, model);

    std::vector<Gate> gates = input.gates();
    for (std::size_t pass = 0; !cfg.max_passes || pass < *cfg.max_passes; ++pass) {
        const auto pass_start = clock::now();
        PeepholePass stats;
        for (std::size_t pivot = 0; pivot < gates.size();) {
            std::optional<Subcircuit> best;
            std::optional<Circuit> best_circuit;
            std::uint64_t best_gain = 0;
            auto consider = [&](const Subcircuit& sub) -> bool {
                const std::uint64_t before = cost(sub.local, model);
                if (sub.gate_indices.size() < 2 || before == 0) {
                    return true;
                }
                const SmallTableau t = from_circuit<SmallTableau>(Circuit(width, sub.local.gates()));
                std::optional<Circuit> replacement;
                if (db.lookup(t)) {
                    replacement = reconstruct(db, t);
                } else if (cfg.use_mim && !db.exhaustive()) {
                    replacement = mim_search(db, t).circuit;
                }
                if (!replacement) {
                    return false;
                }
                const std::uint64_t after = cost(*replacement, model);
                if (after >= before || before - after <= best_gain) {
                    return true;
                }
                const bool fits = std::all_of(replacement->begin(), replacement->end(), [&](const Gate& g) {
                    return g.max_qubit() < sub.qubits.size();
                });
                if (!fits) {
                    ++rep.padding_rejects;
                    return true;
                }
                best = sub;
                best_gain = before - after;
                best_circuit = std::move(replacement);
                return true;
            };
            for (const auto& sub : detail::gather(gates, input.num_qubits(), pivot, cfg)) {
                ++stats.scanned;
                if (consider(sub)) {
                    continue;
                }
                ++rep.not_found;
                // Out of reach as a whole: a prefix with at most max_cost gates is always in range.
                if (model.metric() == Metric::GateCount && sub.gate_indices.size() > db.max_cost()) {
                    std::vector<std::size_t> prefix(sub.gate_indices.begin(),
                                                     sub.gate_indices.begin() + db.max_cost());
                    ++stats.scanned;
                    consider(detail::make_subcircuit(gates, std::move(prefix), sub.qubits));
                }
            }
            if (!best) {
                ++pivot;
                continue;
            }
            std::vector<Gate> next(gates.begin(), gates.begin() + static_cast<std::ptrdiff_t>(pivot));
            for (Gate g : *best_circuit) {
                g.q0 = best->qubits[g.q0];
                if (g.two_qubit()) {
                    g.q1 = best->qubits[g.q1];
                }
                next.push_back(g);
            }
            std::size_t k = 0;
            for (std::size_t i = pivot; i < gates.size(); ++i) {
                if (k < best->gate_indices.size() && best->gate_indices[k] == i) {
                    ++k;
                    continue;
                }
                next.push_back(gates[i]);
            }
            gates = std::move(next);
            ++stats.replacements;
        }
        const Circuit current(input.num_qubits(), gates);
        stats.gates = current.size();
        stats.depth = depth(current);
        stats.seconds = std::chrono::duration<double>(clock::now() - pass_start).count();
        rep.passes.push_back(stats);
        if (stats.replacements == 0) {
            break;
        }
    }
    result.circuit = Circuit(input.num_qubits(), gates);
    rep.output_gates = result.circuit.size();
    rep.output_depth = depth(result.circuit);
    rep.output_cost = cost(result.circuit, model);
    rep.seconds = std::chrono::duration<double>(clock::now() - start).count();
    return result;
}

}  // namespace cliffopt

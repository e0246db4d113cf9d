#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "gate.hpp"

namespace cliffopt {

enum class Metric : std::uint8_t { GateCount = 0, Depth = 1, Weighted = 2 };

inline std::string to_string(Metric m) {
    switch (m) {
        case Metric::GateCount: return "gates";
        case Metric::Depth: return "depth";
        case Metric::Weighted: return "weighted";
    }
    return "?";
}

using WeightTable = std::array<std::optional<std::uint32_t>, kNumGateKinds>;

/// How circuits are priced and which gates the searches may use.
class CostModel {
public:
    CostModel() : CostModel(Metric::GateCount, default_gates(), {}) {}

    static GateSet default_gates() { return {GateKind::H, GateKind::P, GateKind::Cnot}; }

    static CostModel gate_count(GateSet gates = default_gates()) { return {Metric::GateCount, gates, {}}; }
    static CostModel depth(GateSet gates = default_gates()) { return {Metric::Depth, gates, {}}; }
    static CostModel weighted(GateSet gates, WeightTable weights) { return {Metric::Weighted, gates, weights}; }

    /// Counts controlled-Z gates only; single-qubit Cliffords are free.
    static CostModel cz_count() {
        WeightTable w{};
        w[static_cast<std::size_t>(GateKind::H)] = 0;
        w[static_cast<std::size_t>(GateKind::P)] = 0;
        w[static_cast<std::size_t>(GateKind::Pdag)] = 0;
        w[static_cast<std::size_t>(GateKind::Cz)] = 1;
        return weighted({GateKind::H, GateKind::P, GateKind::Pdag, GateKind::Cz}, w);
    }

    Metric metric() const { return metric_; }
    GateSet gates() const { return gates_; }
    const WeightTable& weights() const { return weights_; }

    /// Per-gate price; GateCount and Depth price every kind at 1.
    std::optional<std::uint32_t> weight(GateKind k) const {
        if (metric_ != Metric::Weighted) {
            return 1;
        }
        return weights_[static_cast<std::size_t>(k)];
    }

    /// True when all admitted gates cost 0 or 1, which the layered searches require.
    bool unit_or_zero_weights() const {
        for (auto k : kAllGateKinds) {
            if (gates_.contains(k) && *weight(k) > 1) {
                return false;
            }
        }
        return true;
    }

    friend bool operator==(const CostModel&, const CostModel&) = default;

private:
    CostModel(Metric metric, GateSet gates, WeightTable weights)
        : metric_(metric), gates_(gates), weights_(weights) {
        if (gates_.empty()) {
            throw std::invalid_argument("cost model: gate set is empty");
        }
        if (metric_ == Metric::Weighted) {
            bool positive = false;
            for (auto k : kAllGateKinds) {
                if (gates_.contains(k) && !weights_[static_cast<std::size_t>(k)]) {
                    throw std::invalid_argument("cost model: no weight for admitted gate " +
                                                std::string(mnemonic(k)));
                }
                positive = positive || weights_[static_cast<std::size_t>(k)].value_or(0) > 0;
            }
            if (!positive) {
                throw std::invalid_argument("cost model: every weight is zero");
            }
        } else {
            weights_ = {};
        }
    }

    Metric metric_;
    GateSet gates_;
    WeightTable weights_;
};

/// ASAP depth: gates sharing a qubit never share a time step.
inline std::uint64_t depth(const Circuit& c) {
    std::vector<std::uint64_t> level(c.num_qubits(), 0);
    std::uint64_t d = 0;
    for (const auto& g : c) {
        std::uint64_t l = level[g.q0];
        if (g.two_qubit()) {
            l = std::max(l, level[g.q1]);
        }
        ++l;
        level[g.q0] = l;
        if (g.two_qubit()) {
            level[g.q1] = l;
        }
        d = std::max(d, l);
    }
    return d;
}

inline std::uint64_t cost(const Circuit& c, const CostModel& m) {
    switch (m.metric()) {
        case Metric::GateCount: return c.size();
        case Metric::Depth: return depth(c);
        case Metric::Weighted: {
            std::uint64_t total = 0;
            for (const auto& g : c) {
                auto w = m.weights()[static_cast<std::size_t>(g.kind)];
                if (!w) {
                    throw std::invalid_argument("cost: gate kind " + std::string(mnemonic(g.kind)) +
                                                " has no weight");
                }
                total += *w;
            }
            return total;
        }
    }
    return 0;
}

}  // namespace cliffopt

#include <gtest/gtest.h>

#include <random>

#include <cliffopt/peephole.hpp>

#include "test_support.hpp"

using namespace cliffopt;

namespace {

const LayerDatabase<CliffordDomain>& db3() {
    static const auto db = build_database<CliffordDomain>(3, EquivMode::Simultaneous, CostModel::gate_count()).db;
    return db;
}

std::vector<Gate> all_gates(std::size_t n) {
    std::vector<Gate> out;
    for (auto k : kAllGateKinds) {
        for (std::uint32_t a = 0; a < n; ++a) {
            if (arity(k) == 1) {
                out.push_back({k, a, 0});
                continue;
            }
            for (std::uint32_t b = 0; b < n; ++b) {
                if (a != b) {
                    out.push_back({k, a, b});
                }
            }
        }
    }
    return out;
}

Circuit random_hpc_circuit(std::size_t n, std::size_t gates, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<std::uint32_t> q(0, static_cast<std::uint32_t>(n - 1));
    Circuit c(n);
    while (c.size() < gates) {
        const int k = kind(rng);
        const auto a = q(rng);
        if (k == 0) {
            c.append(Gate::h(a));
        } else if (k == 1) {
            c.append(Gate::p(a));
        } else {
            const auto b = q(rng);
            if (a != b) {
                c.append(Gate::cnot(a, b));
            }
        }
    }
    return c;
}

}  // namespace

TEST(Commutation, TableIsSoundOnTableaux) {
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto gates = all_gates(n);
        for (const auto& a : gates) {
            for (const auto& b : gates) {
                if (gates_commute(a, b)) {
                    ASSERT_EQ(gate_matrix<SmallTableau>(n, a) * gate_matrix<SmallTableau>(n, b),
                              gate_matrix<SmallTableau>(n, b) * gate_matrix<SmallTableau>(n, a))
                        << a.str() << " " << b.str();
                }
                ASSERT_EQ(gates_commute(a, b), gates_commute(b, a));
            }
        }
    }
}

// Stronger than the tableau check: the unitaries themselves commute, so
// moving gates never introduces a Pauli correction.
TEST(Commutation, TableIsSoundOnUnitaries) {
    const std::size_t n = 3;
    for (const auto& a : all_gates(n)) {
        for (const auto& b : all_gates(n)) {
            if (!gates_commute(a, b)) {
                continue;
            }
            const auto ua = testsupport::gate_unitary(n, a);
            const auto ub = testsupport::gate_unitary(n, b);
            const auto ab = testsupport::multiply(ua, ub);
            const auto ba = testsupport::multiply(ub, ua);
            for (std::size_t i = 0; i < ab.size(); ++i) {
                for (std::size_t j = 0; j < ab.size(); ++j) {
                    ASSERT_LT(std::abs(ab[i][j] - ba[i][j]), 1e-9) << a.str() << " " << b.str();
                }
            }
        }
    }
}

TEST(Commutation, TableEntries) {
    EXPECT_TRUE(gates_commute(Gate::cnot(0, 1), Gate::cnot(0, 2)));
    EXPECT_TRUE(gates_commute(Gate::cnot(0, 1), Gate::cnot(2, 1)));
    EXPECT_FALSE(gates_commute(Gate::cnot(0, 1), Gate::cnot(1, 2)));
    EXPECT_TRUE(gates_commute(Gate::p(0), Gate::cz(0, 3)));
    EXPECT_TRUE(gates_commute(Gate::cz(0, 2), Gate::cnot(0, 1)));
    EXPECT_FALSE(gates_commute(Gate::cz(1, 2), Gate::cnot(0, 1)));
    EXPECT_FALSE(gates_commute(Gate::h(0), Gate::p(0)));
}

TEST(Gather, DisjointGateCommutesAway) {
    PeepholeConfig cfg;
    cfg.max_qubits = 1;
    const auto subs = gather_subcircuits(Circuit(2, {Gate::h(0), Gate::h(1)}), 0, cfg);
    ASSERT_EQ(subs.size(), 1u);
    EXPECT_EQ(subs[0].gate_indices, (std::vector<std::size_t>{0}));
    EXPECT_EQ(subs[0].local.gates(), (std::vector<Gate>{Gate::h(0)}));
}

TEST(Gather, SkipsDisjointGate) {
    PeepholeConfig cfg;
    cfg.max_qubits = 2;
    const auto subs = gather_subcircuits(Circuit(3, {Gate::cnot(0, 1), Gate::h(2), Gate::cnot(0, 1)}), 0, cfg);
    ASSERT_FALSE(subs.empty());
    EXPECT_EQ(subs[0].gate_indices, (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(subs[0].qubits, (std::vector<std::uint32_t>{0, 1}));
}

TEST(Gather, CommutesAcrossSharedControl) {
    PeepholeConfig cfg;
    cfg.max_qubits = 2;
    const Circuit c(3, {Gate::cnot(0, 1), Gate::cnot(0, 2), Gate::cnot(0, 1)});
    const auto subs = gather_subcircuits(c, 0, cfg);
    ASSERT_FALSE(subs.empty());
    EXPECT_EQ(subs[0].gate_indices, (std::vector<std::size_t>{0, 2}));
    // Growing to {0, 1, 2} is not allowed at width 2.
    for (const auto& s : subs) {
        EXPECT_LE(s.qubits.size(), 2u);
    }
    cfg.max_qubits = 3;
    bool all_three = false;
    for (const auto& s : gather_subcircuits(c, 0, cfg)) {
        all_three = all_three || s.gate_indices.size() == 3;
    }
    EXPECT_TRUE(all_three);
}

TEST(Gather, ExtractedGatesCanBeMadeContiguous) {
    std::mt19937_64 rng(31);
    PeepholeConfig cfg;
    cfg.max_qubits = 3;
    for (int trial = 0; trial < 100; ++trial) {
        const Circuit c = testsupport::random_circuit(6, 40, rng);
        for (std::size_t pivot = 0; pivot < c.size(); pivot += 7) {
            for (const auto& s : gather_subcircuits(c, pivot, cfg)) {
                ASSERT_EQ(s.gate_indices.front(), pivot);
                ASSERT_LE(s.qubits.size(), 3u);
                // Reorder: chosen gates first, then the rest; the tableau must not change.
                std::vector<Gate> reordered(c.gates().begin(), c.gates().begin() + static_cast<std::ptrdiff_t>(pivot));
                for (auto i : s.gate_indices) {
                    reordered.push_back(c[i]);
                }
                for (std::size_t i = pivot; i < c.size(); ++i) {
                    if (!std::binary_search(s.gate_indices.begin(), s.gate_indices.end(), i)) {
                        reordered.push_back(c[i]);
                    }
                }
                ASSERT_EQ(from_circuit<Tableau>(Circuit(6, reordered)), from_circuit<Tableau>(c));
                ASSERT_EQ(s.local.size(), s.gate_indices.size());
            }
        }
    }
}

TEST(Optimize, Examples) {
    EXPECT_TRUE(optimize(Circuit(1, {Gate::h(0), Gate::h(0)}), db3(), {.max_qubits = 3}).circuit.empty());
    EXPECT_EQ(optimize(Circuit(3, {Gate::cnot(0, 1), Gate::cnot(0, 1), Gate::h(2)}), db3(), {.max_qubits = 3})
                  .circuit.gates(),
              (std::vector<Gate>{Gate::h(2)}));
    EXPECT_TRUE(gate_matrix(1, Gate::p(0)).compose(gate_matrix(1, Gate::p(0))).is_identity());
    EXPECT_TRUE(
        optimize(Circuit(1, {Gate::p(0), Gate::p(0), Gate::p(0), Gate::p(0)}), db3(), {.max_qubits = 3}).circuit.empty());
}

TEST(Optimize, PreservesTableauAndNeverGrows) {
    std::mt19937_64 rng(8);
    PeepholeConfig cfg;
    cfg.max_qubits = 3;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 10 + trial;
        const Circuit c = trial % 2 ? random_hpc_circuit(n, 100 + 20 * trial, rng)
                                    : testsupport::random_circuit(n, 100 + 20 * trial, rng);
        const auto r = optimize(c, db3(), cfg);
        ASSERT_EQ(from_circuit<Tableau>(r.circuit), from_circuit<Tableau>(c));
        ASSERT_LE(r.circuit.size(), c.size());
        std::size_t prev = c.size();
        for (const auto& p : r.report.passes) {
            ASSERT_LE(p.gates, prev);
            prev = p.gates;
        }
        EXPECT_EQ(r.report.passes.back().replacements, 0u);
        EXPECT_EQ(r.report.output_gates, r.circuit.size());
    }
}

TEST(Optimize, BoundedWindowAndReport) {
    std::mt19937_64 rng(3);
    const Circuit c = random_hpc_circuit(12, 400, rng);
    PeepholeConfig narrow;
    narrow.max_qubits = 3;
    narrow.window = 10;
    PeepholeConfig wide = narrow;
    wide.window.reset();
    const auto a = optimize(c, db3(), narrow);
    const auto b = optimize(c, db3(), wide);
    EXPECT_EQ(from_circuit<Tableau>(a.circuit), from_circuit<Tableau>(c));
    EXPECT_EQ(from_circuit<Tableau>(b.circuit), from_circuit<Tableau>(c));
    EXPECT_LT(a.circuit.size(), c.size());
    const auto j = to_json(a.report);
    EXPECT_EQ(j["input"]["gates"], c.size());
    EXPECT_EQ(j["output"]["gates"], a.circuit.size());
    ASSERT_FALSE(j["passes"].empty());
    EXPECT_TRUE(j["passes"][0].contains("scanned"));
    EXPECT_TRUE(j["passes"][0].contains("seconds"));
}

TEST(Optimize, TruncatedDatabaseStillSound) {
    const auto small =
        build_database<CliffordDomain>(3, EquivMode::Simultaneous, CostModel::gate_count(), {.max_cost = 4}).db;
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 5; ++trial) {
        const Circuit c = random_hpc_circuit(8, 150, rng);
        for (bool mim : {false, true}) {
            PeepholeConfig cfg;
            cfg.max_qubits = 3;
            cfg.use_mim = mim;
            const auto r = optimize(c, small, cfg);
            ASSERT_EQ(from_circuit<Tableau>(r.circuit), from_circuit<Tableau>(c));
            ASSERT_LE(r.circuit.size(), c.size());
        }
    }
}

TEST(Optimize, RejectsBadConfig) {
    PeepholeConfig cfg;
    cfg.max_qubits = 4;
    EXPECT_THROW(optimize(Circuit(2), db3(), cfg), std::invalid_argument);
    cfg.max_qubits = 3;
    cfg.window = 0;
    EXPECT_THROW(optimize(Circuit(2), db3(), cfg), std::invalid_argument);
}

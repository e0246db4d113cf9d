#include <gtest/gtest.h>

#include <random>

#include <cliffopt/circuit.hpp>
#include <cliffopt/cost_model.hpp>
#include <cliffopt/tableau.hpp>

#include "test_support.hpp"

using namespace cliffopt;

TEST(CircuitParse, SingleGate) {
    const Circuit c = parse_circuit("qubits 1\nH 0\n");
    EXPECT_EQ(c.num_qubits(), 1u);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0], Gate::h(0));
}

TEST(CircuitParse, TwoGates) {
    const Circuit c = parse_circuit("qubits 2\nCX 0 1\nS 1\n");
    EXPECT_EQ(c.gates(), (std::vector<Gate>{Gate::cnot(0, 1), Gate::p(1)}));
}

TEST(CircuitParse, IndexOutOfRangeNamesLine) {
    try {
        parse_circuit("qubits 2\nCX 1 5\n");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_NE(std::string(e.what()).find("index out of range, line 2"), std::string::npos) << e.what();
    }
}

TEST(CircuitParse, Errors) {
    EXPECT_THROW(parse_circuit("qbits 2\n"), ParseError);
    EXPECT_THROW(parse_circuit("qubits 2\nT 0\n"), ParseError);
    EXPECT_THROW(parse_circuit("qubits 2\nCX 1 1\n"), ParseError);
    EXPECT_THROW(parse_circuit("qubits 2\nH 0 1\n"), ParseError);
    EXPECT_THROW(parse_circuit("qubits 2\nrelabel 0 0\n"), ParseError);
    EXPECT_THROW(parse_circuit("qubits 2\nrelabel 1 0\nH 0\n"), ParseError);
    EXPECT_THROW(parse_circuit(""), ParseError);
}

TEST(CircuitParse, CommentsAndBlankLines) {
    const Circuit c = parse_circuit("# header comment\n\nqubits 3  # three\n  SWAP 0 2\nSdg 1\nCZ 2 1\n");
    EXPECT_EQ(c.gates(), (std::vector<Gate>{Gate::swap(0, 2), Gate::pdag(1), Gate::cz(2, 1)}));
}

TEST(CircuitEmit, Examples) {
    EXPECT_EQ(emit_circuit(Circuit(1, {Gate::h(0)})), "qubits 1\nH 0\n");
    EXPECT_EQ(emit_circuit(Circuit(2)), "qubits 2\n");
    EXPECT_EQ(emit_circuit(Circuit(3, {Gate::cnot(2, 0)})), "qubits 3\nCX 2 0\n");
}

TEST(CircuitEmit, RoundTripRandom) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Circuit c = testsupport::random_circuit(1 + trial % 6, trial % 30, rng);
        if (trial % 3 == 0 && c.num_qubits() > 1) {
            std::vector<std::uint32_t> p(c.num_qubits());
            std::iota(p.begin(), p.end(), 0u);
            std::shuffle(p.begin(), p.end(), rng);
            c.set_relabel(p);
        }
        const Circuit back = parse_circuit(emit_circuit(c));
        EXPECT_EQ(back, c);
        EXPECT_EQ(emit_circuit(back), emit_circuit(c));
    }
}

TEST(Cost, Examples) {
    EXPECT_EQ(cost(Circuit(2, {Gate::h(0), Gate::h(1)}), CostModel::depth()), 1u);
    EXPECT_EQ(cost(Circuit(2, {Gate::h(0), Gate::p(0), Gate::cnot(0, 1)}), CostModel::gate_count()), 3u);
    EXPECT_EQ(cost(Circuit(3, {Gate::cnot(0, 1), Gate::cnot(1, 2), Gate::cnot(0, 1)}), CostModel::depth()), 3u);
}

namespace {

// Depth oracle: the longest chain of gates in which consecutive gates share a qubit.
std::uint64_t longest_chain(const Circuit& c) {
    std::vector<std::uint64_t> best(c.size(), 1);
    std::uint64_t out = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            if (c[i].overlaps(c[j])) {
                best[j] = std::max(best[j], best[i] + 1);
            }
        }
        out = std::max(out, best[j]);
    }
    return out;
}

}  // namespace

TEST(Cost, DepthProperties) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 7;
        const Circuit c = testsupport::random_circuit(n, trial % 25, rng);
        const auto d = depth(c);
        EXPECT_LE(d, c.size());
        EXPECT_EQ(d, longest_chain(c));
        std::vector<std::uint32_t> p(n);
        std::iota(p.begin(), p.end(), 0u);
        std::shuffle(p.begin(), p.end(), rng);
        const Circuit renamed = map_qubits(c, p, n);
        EXPECT_EQ(depth(renamed), d);
        EXPECT_EQ(cost(renamed, CostModel::gate_count()), c.size());
    }
}

TEST(Cost, Weighted) {
    const CostModel cz = CostModel::cz_count();
    EXPECT_EQ(cost(Circuit(2, {Gate::h(0), Gate::cz(0, 1), Gate::p(1), Gate::cz(1, 0)}), cz), 2u);
    EXPECT_THROW(cost(Circuit(2, {Gate::cnot(0, 1)}), cz), std::invalid_argument);
}

TEST(CostModelValidation, Rejects) {
    EXPECT_THROW(CostModel::gate_count(GateSet{}), std::invalid_argument);
    WeightTable zeros{};
    zeros[static_cast<std::size_t>(GateKind::H)] = 0;
    EXPECT_THROW(CostModel::weighted({GateKind::H}, zeros), std::invalid_argument);
    EXPECT_THROW(CostModel::weighted({GateKind::H, GateKind::Cnot}, zeros), std::invalid_argument);
}

TEST(Relabel, AppendKeepsRelabelTrailing) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 4;
        std::vector<std::uint32_t> p(n);
        std::iota(p.begin(), p.end(), 0u);
        std::shuffle(p.begin(), p.end(), rng);
        Circuit c = testsupport::random_circuit(n, 5, rng);
        c.set_relabel(p);
        const Gate g = testsupport::random_gate(n, rng);
        const Tableau before = from_circuit(c);
        c.append(g);
        EXPECT_EQ(from_circuit(c), before * gate_matrix(n, g));
    }
}

TEST(Relabel, AppendCircuitComposes) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 4;
        auto perm = [&] {
            std::vector<std::uint32_t> p(n);
            std::iota(p.begin(), p.end(), 0u);
            std::shuffle(p.begin(), p.end(), rng);
            return p;
        };
        Circuit a = testsupport::random_circuit(n, 6, rng);
        Circuit b = testsupport::random_circuit(n, 6, rng);
        a.set_relabel(perm());
        b.set_relabel(perm());
        const Tableau expected = from_circuit(a) * from_circuit(b);
        a.append(b);
        EXPECT_EQ(from_circuit(a), expected);
    }
}

TEST(Relabel, SwapNetworkMatchesAnnotation) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 7;
        std::vector<std::uint32_t> p(n);
        std::iota(p.begin(), p.end(), 0u);
        std::shuffle(p.begin(), p.end(), rng);
        Circuit c = testsupport::random_circuit(n, 8, rng);
        c.set_relabel(p);
        const Circuit explicit_swaps = with_explicit_swaps(c);
        EXPECT_FALSE(explicit_swaps.relabel().has_value());
        EXPECT_LE(explicit_swaps.size(), c.size() + n - 1);
        EXPECT_EQ(from_circuit(explicit_swaps), from_circuit(c));
    }
}

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include <cliffopt/linear.hpp>
#include <cliffopt/tableau.hpp>

#include "test_support.hpp"

using namespace cliffopt;

namespace {

template <typename T>
T from_rows(std::size_t n, const std::vector<std::vector<int>>& rows) {
    T t = T::zeros(n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            t.set_bit(i, j, rows[i][j] != 0);
        }
    }
    return t;
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

}  // namespace

TEST(Tableau, Identity) {
    EXPECT_EQ(Tableau::identity(1), from_rows<Tableau>(1, {{1, 0}, {0, 1}}));
    for (std::size_t n = 1; n <= 6; ++n) {
        const Tableau t = Tableau::identity(n);
        EXPECT_TRUE(t.is_symplectic());
        EXPECT_TRUE(t.is_identity());
        for (std::size_t i = 0; i < 2 * n; ++i) {
            for (std::size_t j = 0; j < 2 * n; ++j) {
                EXPECT_EQ(t.bit(i, j), i == j);
            }
        }
    }
    EXPECT_THROW(Tableau(0), std::invalid_argument);
}

TEST(Tableau, GateRuleExamples) {
    EXPECT_EQ(gate_matrix(1, Gate::h(0)), from_rows<Tableau>(1, {{0, 1}, {1, 0}}));
    // X -> Y, Z -> Z.
    EXPECT_EQ(gate_matrix(1, Gate::p(0)), from_rows<Tableau>(1, {{1, 1}, {0, 1}}));
    // Columns e1, e1+e2, e3+e4, e4: X0 -> X0 X1 and Z1 -> Z0 Z1.
    EXPECT_EQ(gate_matrix(2, Gate::cnot(0, 1)),
              from_rows<Tableau>(2, {{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 1, 1}}));
}

TEST(Tableau, CzEqualsHadamardConjugatedCnot) {
    for (std::size_t n = 2; n <= 4; ++n) {
        for (std::uint32_t a = 0; a < n; ++a) {
            for (std::uint32_t b = 0; b < n; ++b) {
                if (a == b) {
                    continue;
                }
                const Tableau expected = from_circuit(Circuit(n, {Gate::h(b), Gate::cnot(a, b), Gate::h(b)}));
                EXPECT_EQ(gate_matrix(n, Gate::cz(a, b)), expected);
                EXPECT_EQ(gate_matrix(n, Gate::cz(a, b)), gate_matrix(n, Gate::cz(b, a)));
            }
        }
    }
}

TEST(Tableau, SwapEqualsThreeCnots) {
    const Tableau expected = from_circuit(Circuit(3, {Gate::cnot(0, 2), Gate::cnot(2, 0), Gate::cnot(0, 2)}));
    EXPECT_EQ(gate_matrix(3, Gate::swap(0, 2)), expected);
}

TEST(Tableau, InvolutionsAndSymplecticExhaustive) {
    for (std::size_t n = 1; n <= 4; ++n) {
        for (const auto& g : all_gates(n)) {
            const Tableau m = gate_matrix(n, g);
            EXPECT_TRUE(m.is_symplectic()) << g.str();
            EXPECT_TRUE((m * m).is_identity()) << g.str();
        }
    }
    EXPECT_EQ(gate_matrix(3, Gate::p(1)), gate_matrix(3, Gate::pdag(1)));
}

TEST(Tableau, IndexOutOfRange) {
    Tableau t(2);
    EXPECT_THROW(t.apply(Gate::h(2)), std::out_of_range);
    EXPECT_THROW(t.apply(Gate::cnot(0, 0)), std::invalid_argument);
}

TEST(Tableau, ComposeExamples) {
    const Tableau h = gate_matrix(1, Gate::h(0));
    const Tableau p = gate_matrix(1, Gate::p(0));
    EXPECT_EQ(h * Tableau::identity(1), h);
    EXPECT_TRUE((h * h).is_identity());
    EXPECT_TRUE((p * p).is_identity());
    EXPECT_THROW(h * Tableau::identity(2), std::invalid_argument);
}

TEST(Tableau, FromCircuitExamples) {
    EXPECT_TRUE(from_circuit(Circuit(3)).is_identity());
    EXPECT_EQ(from_circuit(Circuit(1, {Gate::h(0), Gate::p(0), Gate::h(0)})), from_rows<Tableau>(1, {{1, 0}, {1, 1}}));
}

TEST(Tableau, InverseExamples) {
    EXPECT_TRUE(Tableau::identity(3).inverse().is_identity());
    const Tableau cx = gate_matrix(2, Gate::cnot(0, 1));
    EXPECT_EQ(cx.inverse(), cx);
}

TEST(Tableau, RandomSequencesStaySymplectic) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const Circuit c = testsupport::random_circuit(n, 1 + trial % 20, rng);
        const SmallTableau t = from_circuit<SmallTableau>(c);
        ASSERT_TRUE(t.is_symplectic());
        ASSERT_TRUE((t * t.inverse()).is_identity());
        ASSERT_TRUE((t.inverse() * t).is_identity());
    }
}

TEST(Tableau, HomomorphismAndAssociativity) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const Circuit a = testsupport::random_circuit(n, trial % 15, rng);
        const Circuit b = testsupport::random_circuit(n, trial % 11, rng);
        const Circuit c = testsupport::random_circuit(n, trial % 7, rng);
        Circuit ab = a;
        ab.append(b);
        const Tableau ta = from_circuit(a);
        const Tableau tb = from_circuit(b);
        const Tableau tc = from_circuit(c);
        EXPECT_EQ(from_circuit(ab), ta * tb);
        EXPECT_EQ((ta * tb) * tc, ta * (tb * tc));
    }
}

TEST(Tableau, ReversedInvolutionCircuitIsInverse) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const Circuit c = testsupport::random_circuit(n, trial % 20, rng);
        std::vector<Gate> rev(c.gates().rbegin(), c.gates().rend());
        EXPECT_TRUE((from_circuit(c) * from_circuit(Circuit(n, rev))).is_identity());
    }
}

TEST(Tableau, SmallAndWideAgree) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 8;
        const Circuit c = testsupport::random_circuit(n, 30, rng);
        const Tableau wide = from_circuit<Tableau>(c);
        const SmallTableau small = from_circuit<SmallTableau>(c);
        EXPECT_EQ(SmallTableau::convert(wide), small);
        EXPECT_EQ(Tableau::convert(small), wide);
        EXPECT_EQ(Tableau::convert(small.inverse()), wide.inverse());
    }
}

// Conjugating explicit Pauli matrices by the circuit unitary must reproduce
// the tableau rows (up to sign).
TEST(Tableau, BruteForcePauliConjugation) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 2;
        const Circuit c = testsupport::random_circuit(n, trial % 12, rng);
        EXPECT_EQ(testsupport::tableau_rows(from_circuit(c)), testsupport::conjugation_rows(c));
    }
    // A few three-qubit circuits as well.
    for (int trial = 0; trial < 30; ++trial) {
        const Circuit c = testsupport::random_circuit(3, 10, rng);
        EXPECT_EQ(testsupport::tableau_rows(from_circuit(c)), testsupport::conjugation_rows(c));
    }
}

TEST(Tableau, TextRoundTrip) {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 50; ++trial) {
        const Tableau t = from_circuit(testsupport::random_circuit(1 + trial % 6, 20, rng));
        std::istringstream in(emit_tableau(t));
        EXPECT_EQ(parse_tableau<Tableau>(in), t);
    }
    std::istringstream bad("n 1\n11\n11\n");
    EXPECT_THROW(parse_tableau<Tableau>(bad), std::exception);
    std::istringstream short_rows("n 2\n1000\n0100\n");
    EXPECT_THROW(parse_tableau<Tableau>(short_rows), ParseError);
}

TEST(Linear, Examples) {
    EXPECT_EQ(linear_from_tableau(Tableau::identity(3)), LinearMatrix::identity(3));
    const LinearMatrix a = linear_apply_cnot(LinearMatrix::identity(2), 0, 1);
    // Column 1 = e1 + e2, i.e. row 0 = (1, 1).
    EXPECT_TRUE(a.bit(0, 0));
    EXPECT_TRUE(a.bit(0, 1));
    EXPECT_FALSE(a.bit(1, 0));
    EXPECT_TRUE(a.bit(1, 1));
    EXPECT_THROW(linear_from_tableau(gate_matrix(1, Gate::h(0))), std::invalid_argument);
}

TEST(Linear, BlockDiagonalReconstruction) {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<std::uint32_t> q(0, 5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + trial % 5;
        Circuit c(n);
        LinearMatrix a = LinearMatrix::identity(n);
        for (int k = 0; k < 25; ++k) {
            const std::uint32_t x = q(rng) % n;
            const std::uint32_t y = q(rng) % n;
            if (x == y) {
                continue;
            }
            c.append(Gate::cnot(x, y));
            a.apply_cnot(x, y);
        }
        const Tableau t = from_circuit(c);
        EXPECT_EQ(linear_from_tableau(t), a);
        EXPECT_EQ(a.to_tableau<Tableau>(), t);
        EXPECT_EQ((a * a.inverse()), LinearMatrix::identity(n));
    }
}

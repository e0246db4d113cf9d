#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <set>

#include <cliffopt/codes.hpp>
#include <cliffopt/qecc.hpp>

#include "test_support.hpp"

using namespace cliffopt;

namespace {

const char* kFiveQubit = "XZZXI\nIXZZX\nXIXZZ\nZXIXZ\n";

std::string error_of(const std::string& text) {
    try {
        parse_stabilizers(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

std::vector<BitRow> designated_rows(const Circuit& c, const std::vector<std::size_t>& slots) {
    const auto t = from_circuit<Tableau>(c);
    std::vector<BitRow> rows;
    for (auto s : slots) {
        rows.push_back(tableau_row(t, s));
    }
    return rows;
}

// Stabilizer groups of random states: Z images of the last r wires under a random circuit.
StabilizerGroup random_group(std::size_t n, std::size_t r, std::mt19937_64& rng) {
    const auto c = testsupport::random_circuit(n, 6 * n, rng);
    return {n, designated_rows(c, ancilla_slots(n, r))};
}

}  // namespace

TEST(Stabilizers, ParsesFiveQubitCode) {
    const auto g = parse_stabilizers(kFiveQubit);
    EXPECT_EQ(g.n, 5u);
    ASSERT_EQ(g.num_generators(), 4u);
    EXPECT_EQ(g.k(), 1u);
    EXPECT_EQ(pauli_string(g.generators[0]), "XZZXI");
    EXPECT_EQ(emit_stabilizers(g), kFiveQubit);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            EXPECT_FALSE(symplectic_product(g.generators[i], g.generators[j]));
        }
    }
}

TEST(Stabilizers, EncodingOfPaulis) {
    const auto row = pauli_row("XZYI");
    EXPECT_EQ(row.size(), 8u);
    EXPECT_TRUE(row[0] && !row[4]);
    EXPECT_TRUE(!row[1] && row[5]);
    EXPECT_TRUE(row[2] && row[6]);
    EXPECT_TRUE(!row[3] && !row[7]);
    EXPECT_EQ(pauli_string(row), "XZYI");
}

TEST(Stabilizers, BellPairAndErrors) {
    EXPECT_EQ(parse_stabilizers("XX\nZZ").num_generators(), 2u);
    EXPECT_NE(error_of("XI\nZI").find("anticommuting"), std::string::npos);
    EXPECT_NE(error_of("XI\nZI").find("line 2"), std::string::npos);
    EXPECT_NE(error_of("XX\nZZZ").find("unequal lengths"), std::string::npos);
    EXPECT_NE(error_of("XX\nZZ\nYY").find("dependent"), std::string::npos);
    EXPECT_NE(error_of("XX\nZZ\nYY").find("line 3"), std::string::npos);
    EXPECT_NE(error_of("XQ").find("unexpected character"), std::string::npos);
    EXPECT_NE(error_of("# only a comment\n").find("no stabilizer"), std::string::npos);
}

TEST(Stabilizers, SignsWarn) {
    std::vector<std::string> warnings;
    const auto g = parse_stabilizers("+XX\n-ZZ\n", &warnings);
    EXPECT_EQ(g.num_generators(), 2u);
    EXPECT_EQ(warnings.size(), 1u);
    warnings.clear();
    parse_stabilizers("XX\nZZ\n", &warnings);
    EXPECT_TRUE(warnings.empty());
}

TEST(Stabilizers, DataFile) {
    std::ifstream in(std::string(CLIFFOPT_DATA_DIR) + "/five_qubit_code.stab");
    ASSERT_TRUE(in.good());
    EXPECT_EQ(emit_stabilizers(parse_stabilizers(in)), kFiveQubit);
}

TEST(Gf2, RrefIsARowSpaceInvariant) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<BitRow> rows(3, BitRow(10));
        for (auto& r : rows) {
            for (std::size_t j = 0; j < 10; ++j) {
                r[j] = rng() & 1u;
            }
        }
        auto mixed = rows;
        mixed[0] ^= mixed[1];
        mixed[2] ^= mixed[0];
        std::swap(mixed[1], mixed[2]);
        EXPECT_TRUE(same_row_space(rows, mixed));
        EXPECT_EQ(gf2_rank(rows), gf2_rank(mixed));
    }
    EXPECT_FALSE(same_row_space({pauli_row("ZI")}, {pauli_row("IZ")}));
}

TEST(Encoders, VerifyEncoderExamples) {
    const auto ancilla_z = parse_stabilizers("IZ");
    EXPECT_TRUE(verify_encoder(Circuit(2), ancilla_z));
    const auto five = parse_stabilizers(kFiveQubit);
    auto c = encode_staged(five);
    EXPECT_TRUE(verify_encoder(c, five));
    c.append(Gate::h(4));
    EXPECT_FALSE(verify_encoder(c, five));
    EXPECT_FALSE(verify_encoder(Circuit(3), ancilla_z));
}

TEST(Encoders, SingleZZGenerator) {
    const auto g = parse_stabilizers("ZZ");
    const auto staged = encode_staged(g);
    EXPECT_EQ(staged.gates(), (std::vector<Gate>{Gate::cnot(0, 1)}));
    EXPECT_EQ(pauli_string(tableau_row(from_circuit(staged), 3)), "ZZ");
    EXPECT_TRUE(verify_encoder(encode_unstaged(g), g));
}

TEST(Encoders, BellPair) {
    const auto g = parse_stabilizers("XX\nZZ");
    for (const auto& c : {encode_staged(g), encode_unstaged(g)}) {
        EXPECT_TRUE(verify_encoder(c, g));
        EXPECT_TRUE(same_row_space(designated_rows(c, {2, 3}), g.generators));
    }
}

TEST(Encoders, StagedStructure) {
    const auto g = parse_stabilizers(kFiveQubit);
    const auto c = encode_staged(g);
    // Homogeneous runs: kind changes far less often than in the unstaged construction.
    auto runs = [](const Circuit& x) {
        std::size_t count = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            count += i == 0 || x[i].kind != x[i - 1].kind;
        }
        return count;
    };
    EXPECT_TRUE(verify_encoder(c, g));
    EXPECT_TRUE(verify_encoder(encode_unstaged(g), g));
    EXPECT_TRUE(verify_encoder(encode_staged(g, {.expand_cz = false}), g));
    for (const auto& gate : c) {
        EXPECT_TRUE(gate.kind == GateKind::H || gate.kind == GateKind::P || gate.kind == GateKind::Cnot);
    }
    EXPECT_LE(runs(encode_staged(g, {.expand_cz = false})), 8u);
}

TEST(Encoders, RandomGroupsVerify) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 12;
        const std::size_t r = 1 + (rng() % n);
        const auto g = random_group(n, r, rng);
        ASSERT_TRUE(verify_encoder(encode_staged(g), g)) << emit_stabilizers(g);
        ASSERT_TRUE(verify_encoder(encode_staged(g, {.expand_cz = false}), g)) << emit_stabilizers(g);
        ASSERT_TRUE(verify_encoder(encode_unstaged(g), g)) << emit_stabilizers(g);
    }
}

TEST(Codes, BenchmarkCatalog) {
    const auto all = codes::benchmark_codes();
    EXPECT_GE(all.size(), 10u);
    std::set<std::string> names;
    for (const auto& spec : all) {
        EXPECT_TRUE(names.insert(spec.name).second);
        EXPECT_GE(spec.group.n, 25u);
        EXPECT_LE(spec.group.n, 30u);
        EXPECT_NO_THROW(validate_generators(spec.group.n, spec.group.generators));
        const auto c1 = encode_staged(spec.group);
        const auto c2 = encode_unstaged(spec.group);
        EXPECT_TRUE(verify_encoder(c1, spec.group)) << spec.name;
        EXPECT_TRUE(verify_encoder(c2, spec.group)) << spec.name;
    }
}

TEST(Codes, KnownParameters) {
    EXPECT_EQ(codes::concatenated_five_qubit().k(), 1u);
    EXPECT_EQ(codes::quadratic_residue(5).k(), 1u);
    EXPECT_TRUE(same_row_space(codes::quadratic_residue(5).generators, parse_stabilizers(kFiveQubit).generators));
    EXPECT_EQ(codes::quadratic_residue(13).k(), 1u);
    EXPECT_EQ(codes::quadratic_residue(29).k(), 1u);
    EXPECT_EQ(codes::rotated_surface(3).k(), 1u);
    EXPECT_EQ(codes::rotated_surface(5).k(), 1u);
    EXPECT_EQ(codes::repetition_product(4, 4).n, 25u);
    EXPECT_EQ(codes::repetition_product(4, 4).k(), 1u);
    EXPECT_EQ(codes::repetition_product(3, 6).k(), 1u);
    EXPECT_EQ(codes::generalized_shor(3, 3).k(), 1u);
    EXPECT_EQ(codes::random_code(26, 4, 7).k(), 4u);
}

TEST(PartialSynth, TrivialTarget) {
    const auto r = synth_partial(PartialTarget::from_group(parse_stabilizers("IZ")), CostModel::gate_count());
    ASSERT_TRUE(r.circuit.has_value());
    EXPECT_TRUE(r.circuit->empty());
    EXPECT_EQ(r.cost, 0u);
}

TEST(PartialSynth, SingleCnot) {
    const auto g = parse_stabilizers("ZZ");
    for (bool bidir : {false, true}) {
        PartialSearchOptions opt;
        opt.bidirectional = bidir;
        const auto r = synth_partial(PartialTarget::from_group(g), CostModel::gate_count(), opt);
        ASSERT_TRUE(r.circuit.has_value());
        EXPECT_EQ(r.cost, 1u);
        EXPECT_EQ(r.circuit->gates(), (std::vector<Gate>{Gate::cnot(0, 1)}));
    }
}

// Oracle: brute force over all gate sequences of increasing length.
TEST(PartialSynth, MatchesExhaustiveSequenceSearch) {
    std::mt19937_64 rng(5);
    const auto gates = detail::gate_instances(3, CostModel::default_gates());
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t r = 1 + trial % 3;
        const auto g = random_group(3, r, rng);
        const auto target = PartialTarget::from_group(g);
        std::optional<std::size_t> best;
        std::vector<std::size_t> idx;
        for (std::size_t len = 0; !best && len <= 5; ++len) {
            idx.assign(len, 0);
            for (;;) {
                Circuit c(3);
                for (auto i : idx) {
                    c.append(gates[i]);
                }
                if (same_row_space(designated_rows(c, target.slots), g.generators)) {
                    best = len;
                    break;
                }
                std::size_t p = 0;
                while (p < len && ++idx[p] == gates.size()) {
                    idx[p++] = 0;
                }
                if (p == len) {
                    break;
                }
            }
        }
        for (bool bidir : {false, true}) {
            PartialSearchOptions opt;
            opt.bidirectional = bidir;
            opt.threads = 1 + trial % 2;
            const auto res = synth_partial(target, CostModel::gate_count(), opt);
            ASSERT_TRUE(res.circuit.has_value());
            ASSERT_TRUE(verify_encoder(*res.circuit, g));
            if (best) {
                ASSERT_EQ(res.cost, best) << emit_stabilizers(g);
            } else {
                ASSERT_GT(*res.cost, 5u);
            }
        }
    }
}

TEST(PartialSynth, DominatesBaselinesAndIgnoresBasis) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const std::size_t r = 1 + trial % n;
        const auto g = random_group(n, r, rng);
        const auto res = synth_partial(PartialTarget::from_group(g), CostModel::gate_count());
        ASSERT_TRUE(res.circuit.has_value());
        EXPECT_TRUE(verify_encoder(*res.circuit, g));
        EXPECT_LE(res.circuit->size(), encode_staged(g).size());
        EXPECT_LE(res.circuit->size(), encode_unstaged(g).size());
        // Left multiplication by an invertible matrix keeps the code.
        const auto group = general_linear_group(r);
        const auto mixed = left_multiply(group[rng() % group.size()], g.generators);
        const auto again = synth_partial({n, mixed, ancilla_slots(n, r)}, CostModel::gate_count());
        EXPECT_EQ(again.cost, res.cost);
    }
}

TEST(PartialSynth, DedupPoliciesExploreTheSameStates) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 3;
        const std::size_t r = 1 + trial % 3;
        const auto target = PartialTarget::from_group(random_group(n, r, rng));
        PartialSearchOptions rref;
        rref.bidirectional = false;
        PartialSearchOptions gl = rref;
        gl.dedup = DedupPolicy::GlOrbit;
        const auto a = synth_partial(target, CostModel::gate_count(), rref);
        const auto b = synth_partial(target, CostModel::gate_count(), gl);
        EXPECT_EQ(a.forward_layers, b.forward_layers);
        EXPECT_EQ(a.states, b.states);
        EXPECT_EQ(a.cost, b.cost);
    }
}

TEST(PartialSynth, WeightedAndDepthMetrics) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = random_group(3, 1 + trial % 3, rng);
        const auto target = PartialTarget::from_group(g);
        const auto cz = synth_partial(target, CostModel::cz_count());
        ASSERT_TRUE(cz.circuit.has_value());
        EXPECT_TRUE(verify_encoder(*cz.circuit, g));
        EXPECT_EQ(cost(*cz.circuit, CostModel::cz_count()), cz.cost);
        const auto d = synth_partial(target, CostModel::depth());
        const auto gc = synth_partial(target, CostModel::gate_count());
        ASSERT_TRUE(d.circuit.has_value());
        EXPECT_TRUE(verify_encoder(*d.circuit, g));
        EXPECT_EQ(depth(*d.circuit), d.cost);
        EXPECT_LE(*d.cost, depth(*gc.circuit));
        EXPECT_LE(*gc.cost, d.circuit->size());
    }
}

TEST(PartialSynth, BudgetGivesLowerBound) {
    const auto target = PartialTarget::from_group(parse_stabilizers(kFiveQubit));
    PartialSearchOptions opt;
    opt.max_cost = 3;
    const auto r = synth_partial(target, CostModel::gate_count(), opt);
    EXPECT_FALSE(r.circuit.has_value());
    EXPECT_GE(r.lower_bound, 4u);
    opt.max_cost.reset();
    opt.max_states = 50;
    const auto s = synth_partial(target, CostModel::gate_count(), opt);
    EXPECT_FALSE(s.circuit.has_value());
    EXPECT_GE(s.lower_bound, 1u);
}

TEST(PartialSynth, RejectsInvalidTargets) {
    EXPECT_THROW(synth_partial({2, {pauli_row("XI"), pauli_row("ZI")}, {2, 3}}, CostModel::gate_count()),
                 std::invalid_argument);
    EXPECT_THROW(synth_partial({2, {pauli_row("XI")}, {2, 3}}, CostModel::gate_count()), std::invalid_argument);
}

TEST(GlOrbit, ViaLinearDatabase) {
    for (std::size_t r = 1; r <= 4; ++r) {
        const auto db =
            build_database<LinearDomain>(r, EquivMode::Simultaneous, CostModel::gate_count({GateKind::Cnot})).db;
        const auto group = general_linear_group(db);
        EXPECT_EQ(group.size(), static_cast<std::size_t>(LinearDomain::group_order(r)));
        EXPECT_EQ(group.size(), general_linear_group(r).size());
    }
    const auto db2 = build_database<LinearDomain>(2, EquivMode::Simultaneous, CostModel::gate_count({GateKind::Cnot})).db;
    const auto target = parse_stabilizers("XX\nZZ").generators;
    const auto orbit = gl_orbit_via_linear_db(target, db2);
    EXPECT_EQ(orbit.size(), 6u);
    std::set<std::vector<std::string>> distinct;
    for (const auto& m : orbit) {
        EXPECT_TRUE(same_row_space(m, target));
        distinct.insert({pauli_string(m[0]), pauli_string(m[1])});
    }
    EXPECT_EQ(distinct.size(), 6u);
    const auto db1 = build_database<LinearDomain>(1, EquivMode::Simultaneous, CostModel::gate_count({GateKind::Cnot})).db;
    EXPECT_EQ(gl_orbit_via_linear_db({pauli_row("ZZ")}, db1).size(), 1u);
}

TEST(GlOrbit, FourRowOrbitOfFiveQubitCode) {
    const auto db4 = build_database<LinearDomain>(4, EquivMode::Simultaneous, CostModel::gate_count({GateKind::Cnot})).db;
    const auto five = parse_stabilizers(kFiveQubit).generators;
    const auto orbit = gl_orbit_via_linear_db(five, db4);
    EXPECT_EQ(orbit.size(), 20160u);
    const auto canonical = rref(five);
    for (std::size_t i = 0; i < orbit.size(); i += 97) {
        EXPECT_EQ(rref(orbit[i]), canonical);
    }
}

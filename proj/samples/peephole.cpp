// Peephole optimization of a long random circuit with a 3-qubit database.

#include <iostream>
#include <random>

#include <cliffopt/cliffopt.hpp>

using namespace cliffopt;

int main() {
    const auto db = build_database<CliffordDomain>(3, EquivMode::Simultaneous, CostModel::gate_count()).db;
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::uint32_t> qubit(0, 19);
    std::uniform_int_distribution<int> kind(0, 2);
    Circuit c(20);
    while (c.size() < 500) {
        const auto a = qubit(rng);
        const auto b = qubit(rng);
        const int k = kind(rng);
        if (k == 0) {
            c.append(Gate::h(a));
        } else if (k == 1) {
            c.append(Gate::p(a));
        } else if (a != b) {
            c.append(Gate::cnot(a, b));
        }
    }
    const auto r = optimize(c, db, {.max_qubits = 3});
    std::cout << to_json(r.report).dump(2) << "\n";
    return from_circuit(r.circuit) == from_circuit(c) ? 0 : 1;
}

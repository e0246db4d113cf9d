// Builds the complete 3-qubit database and reads back an optimal circuit.

#include <iostream>

#include <cliffopt/cliffopt.hpp>

using namespace cliffopt;

int main() {
    const auto db = build_database<CliffordDomain>(3, EquivMode::Simultaneous, CostModel::gate_count()).db;
    std::cout << "classes " << db.total_classes() << ", unitaries " << to_decimal(db.orbit_weighted_total()) << "\n";

    const Circuit input(3, {Gate::h(0), Gate::cnot(0, 1), Gate::h(1), Gate::cnot(1, 2), Gate::h(1), Gate::cnot(0, 1),
                            Gate::p(2), Gate::p(2), Gate::h(0)});
    const auto best = reconstruct(db, from_circuit(input));
    std::cout << "input " << input.size() << " gates, optimal " << best->size() << " gates\n" << emit_circuit(*best);
    return from_circuit(*best) == from_circuit(input) ? 0 : 1;
}

// Estimated gate-count distribution of random 3-qubit Cliffords next to the exact one.

#include <iomanip>
#include <iostream>

#include <cliffopt/cliffopt.hpp>

using namespace cliffopt;

int main() {
    const auto db = build_database<CliffordDomain>(3, EquivMode::Simultaneous, CostModel::gate_count()).db;
    const auto exact = exact_distribution(db);
    const auto est = estimate_distribution(db, 20000, 7);
    std::cout << "cost  estimate  exact   (epsilon " << std::setprecision(4) << est.epsilon << ")\n";
    for (const auto& [c, p] : exact) {
        std::cout << std::setw(4) << c << std::setw(10) << std::fixed << std::setprecision(4) << est.proportion(c)
                  << std::setw(8) << p << "\n";
    }
}

// Encoders for the [[5,1,3]] code: both constructions and the optimal search.

#include <iostream>

#include <cliffopt/cliffopt.hpp>

using namespace cliffopt;

int main() {
    const auto code = parse_stabilizers("XZZXI\nIXZZX\nXIXZZ\nZXIXZ\n");
    const auto staged = encode_staged(code);
    const auto unstaged = encode_unstaged(code);
    const auto best = synth_partial(PartialTarget::from_group(code), CostModel::gate_count());
    std::cout << "staged   " << staged.size() << " gates\n";
    std::cout << "unstaged " << unstaged.size() << " gates\n";
    std::cout << "optimal  " << best.circuit->size() << " gates, " << best.states << " states\n"
              << emit_circuit(*best.circuit);
    return verify_encoder(*best.circuit, code) ? 0 : 1;
}

#pragma once

#include <vector>

#include "lobe/circuit.hpp"
#include "lobe/matrix.hpp"

namespace lobe {

/// Structural checks: qubit bounds, control/target disjointness, finite angles.
void validate_circuit(const Circuit& circuit);

/// Applies the circuit to a statevector in place. Both elbow modes are exact
/// linear maps; in measured mode the right elbow is simulated as its
/// deferred-measurement equivalent (H, conditioned CZ, H), which restores the
/// ancilla to |0> whenever the elbow promise holds.
void apply_circuit(const Circuit& circuit, std::vector<cplx>& state,
                   ElbowMode mode = ElbowMode::unitary);

/// Exact statevector for a basis-state input.
std::vector<cplx> simulate(const Circuit& circuit, std::size_t input,
                           ElbowMode mode = ElbowMode::unitary,
                           int qubit_cap = 24);

/// Full matrix; column k = simulate(circuit, k). Columns run concurrently.
Matrix unitary(const Circuit& circuit, ElbowMode mode = ElbowMode::unitary,
               int qubit_cap = 14);

}  // namespace lobe

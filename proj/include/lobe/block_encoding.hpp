#pragma once

#include <string>

#include "lobe/circuit.hpp"

namespace lobe {

/// A compiled block-encoding: the circuit realizes A/lambda on the subspace
/// where the control (if present) is |1> and every index/BE/clean qubit is
/// |0> on input and output.
struct BlockEncoding {
  Circuit circuit;
  double lambda = 1.0;
  std::string method;

  ResourceReport report(ElbowMode mode = ElbowMode::measured) const {
    ResourceReport r = resources(circuit, mode);
    r.lambda = lambda;
    return r;
  }
};

}  // namespace lobe

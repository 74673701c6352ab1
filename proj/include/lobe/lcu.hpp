#pragma once

#include <optional>
#include <vector>

#include "lobe/block_encoding.hpp"
#include "lobe/pauli.hpp"

namespace lobe {

/// LCU block-encoding of a Pauli sum: Prepare (Grover-Rudolph over
/// |alpha_l|/lambda), Select (unary iteration applying each string), and
/// Prepare inverse. lambda = sum |alpha_l|.
BlockEncoding lcu_encode(const PauliSum& sum, bool controlled = true);

enum class CombineMode { lco, product };

/// lco: Prepare over |alpha_l| * lambda_l, Select dispatching each encoding
///      over a shared BE-ancilla pool; lambda = sum |alpha_l| lambda_l.
///      Children must be controlled; the result is controlled unless
///      controlled_result overrides.
/// product: concatenated circuits on disjoint BE ancillae; lambda = prod.
///      A = E0 E1 ... (E0 leftmost, applied last).
BlockEncoding combine(const std::vector<BlockEncoding>& encodings,
                      const std::vector<double>& coefficients, CombineMode mode,
                      std::optional<bool> controlled_result = std::nullopt);

/// Pauli-path pipelines of the benchmark baselines.
BlockEncoding pauli_expansion_encode(const OperatorExpr& expr, const ModeSpec& modes,
                                     bool controlled = true);
BlockEncoding piecewise_pauli_encode(const OperatorExpr& expr, const ModeSpec& modes,
                                     bool controlled = true);

}  // namespace lobe

#pragma once

#include <optional>
#include <string>

#include "lobe/block_encoding.hpp"
#include "lobe/fock.hpp"
#include "lobe/matrix.hpp"

namespace lobe {

struct VerificationReport {
  double max_abs_error = 0.0;
  double unitarity_error = 0.0;
  double clean_ancilla_leakage = 0.0;
  double lambda_used = 0.0;
  double spectral_norm = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool row_sampled = false;
  int columns_checked = 0;
};

std::string verification_report_json(const VerificationReport& report);

/// Sub-matrix of the circuit's unitary with control = 1 (when present) and
/// index/BE/clean ancillae |0> in and out, over the full system register.
Matrix extract_block(const BlockEncoding& be, ElbowMode mode = ElbowMode::unitary,
                     int qubit_cap = 24);

/// Compares the encoded block against the Fock oracle of `expr` divided by
/// lambda. Above `full_extraction_limit` qubits the check row-samples random
/// oracle columns instead of extracting the full block.
VerificationReport verify_encoding(const BlockEncoding& be, const OperatorExpr& expr,
                                   const ModeSpec& modes, double tol = 1e-10,
                                   int full_extraction_limit = 14,
                                   std::optional<unsigned> sample_seed = std::nullopt,
                                   int qubit_cap = 24);

struct LambdaAudit {
  double asp = 0.0;
  double usp = 0.0;
  bool ok = false;
};

/// lambda_ASP = sum |alpha|, lambda_USP = L * max |alpha|.
LambdaAudit lambda_audit(const std::vector<double>& coefficients);

}  // namespace lobe

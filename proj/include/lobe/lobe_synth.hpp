#pragma once

#include <map>
#include <optional>
#include <vector>

#include "lobe/block_encoding.hpp"
#include "lobe/fock.hpp"

namespace lobe {

enum class TermClass {
  identity,
  fermionic_single,
  fermionic_product,
  fermionic_lc_hc,
  bosonic_product_single_mode,
  bosonic_lc_hc,
  mixed_term,
};

/// Per-mode fermionic action in a mode-ordered term.
enum class FermionPattern { create, annihilate, number };

struct TermShape {
  TermClass cls = TermClass::identity;
  bool with_hc = false;
  std::map<int, FermionPattern> fermion_modes;
  std::map<int, std::pair<int, int>> boson_modes;  // mode -> (R, S)
  int active_modes = 0;      // B
  int non_number_modes = 0;  // C (fermionic, excluding number operators)
  int exponent_sum = 0;      // P
};

TermShape classify(const TermGroup& group);

/// Closed-form per-class costs (measured elbow mode, controlled circuits).
struct LobeCostFormula {
  long t_count = 0;
  long rotation_bound = 0;
  int be_ancillae = 0;
  int clean_ancillae = 0;
  double lambda = 1.0;
  bool t_is_bound = false;  // fermionic classes are exact, bosonic/mixed bounds
};

LobeCostFormula lobe_cost_formula(const TermShape& shape, int omega);

/// Rotation angle written by the uniformly controlled rotation at register
/// value `post_value`, for an (a†)^R a^S pattern under cutoff omega on a
/// W-qubit register. pi on every invalid branch.
double lobe_angles(int post_value, int creation_power, int annihilation_power,
                   int omega, int register_width);

/// True when canonicalizing the h.c. partner needs an odd number of swaps
/// ((C choose 2) odd), which the construction fixes with one CZ.
bool cz_sign_required(int non_number_modes);

struct LobeConfig {
  ModeSpec modes;
  bool controlled = true;
};

/// Direct block-encoding of one normalized term group.
BlockEncoding encode_group(const TermGroup& group, const LobeConfig& cfg);

/// LCO over per-group LOBE encodings: Grover-Rudolph Prepare over
/// |alpha_g| lambda_g and a unary-iteration Select sharing one BE pool.
BlockEncoding encode_hamiltonian(const OperatorExpr& expr, const LobeConfig& cfg);

}  // namespace lobe

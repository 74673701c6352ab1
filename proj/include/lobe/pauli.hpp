#pragma once

#include <string>
#include <vector>

#include "lobe/fock.hpp"
#include "lobe/matrix.hpp"

namespace lobe {

enum class PauliLetter : uint8_t { I, X, Y, Z };

/// Tensor product of Pauli letters with a complex coefficient. Letters are
/// indexed by system qubit (little-endian; fermionic mode qubits first, then
/// W qubits per bosonic mode).
struct PauliString {
  cplx coefficient{1.0, 0.0};
  std::vector<PauliLetter> letters;

  PauliString() = default;
  PauliString(cplx c, std::vector<PauliLetter> l)
      : coefficient(c), letters(std::move(l)) {}

  bool same_letters(const PauliString& o) const { return letters == o.letters; }
};

/// Phase-correct product of two strings on the same qubit count.
PauliString operator*(const PauliString& a, const PauliString& b);

struct PauliSum {
  std::vector<PauliString> strings;

  /// Merges duplicate letter patterns and drops |coeff| <= 1e-12 strings.
  void merge();
  PauliSum& operator+=(const PauliSum& o);
  PauliSum operator*(const PauliSum& o) const;
  PauliSum& operator*=(cplx s);
  std::size_t n_qubits() const {
    return strings.empty() ? 0 : strings[0].letters.size();
  }
};

Matrix to_matrix(const PauliSum& sum);
Matrix to_matrix(const PauliString& s);

/// Text form, one line per string: "(re,im) LETTERS".
std::string to_text(const PauliSum& sum);

/// Qubit bookkeeping shared with the circuit layout: fermionic modes map to
/// one qubit each, bosonic modes to W = ceil(log2(omega+1)) qubits.
int bosonic_register_width(int omega);
int system_qubit_count(const ModeSpec& modes);

/// Jordan-Wigner expansion of a single fermionic ladder operator.
PauliSum jordan_wigner(const LadderOp& op, const ModeSpec& modes);

/// Standard-Binary expansion of a bosonic ladder operator (or (a†)^R a^S
/// power pattern) over the W qubits of its mode.
PauliSum standard_binary(const LadderOp& op, const ModeSpec& modes);
PauliSum standard_binary_power(int mode, int creation_power, int annihilation_power,
                               const ModeSpec& modes);

/// Pauli expansion of a full term (product of factor expansions).
PauliSum expand_term(const Term& term, const ModeSpec& modes);

enum class PauliGranularity { full_term, per_mode };

struct ModeFactorExpansion {
  int mode = 0;            // fermionic qubit or bosonic mode id (see species)
  Species species = Species::fermion;
  PauliSum sum;
};

struct PerModeExpansion {
  cplx coefficient{1.0, 0.0};
  std::vector<ModeFactorExpansion> factors;  // one per active mode
};

struct PauliExpansion {
  PauliGranularity granularity = PauliGranularity::full_term;
  PauliSum full;                          // full_term
  std::vector<PerModeExpansion> pieces;   // per_mode: one entry per term
};

/// full_term: single merged sum over the whole expression (h.c. included).
/// per_mode: per-term lists of per-active-mode sums plus the coefficient.
PauliExpansion pauli_expand(const OperatorExpr& expr, const ModeSpec& modes,
                            PauliGranularity granularity);

}  // namespace lobe

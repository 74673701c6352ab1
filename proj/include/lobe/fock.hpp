#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lobe/matrix.hpp"

namespace lobe {

enum class Species { fermion, antifermion, boson };

/// A single ladder operator. Antifermionic modes are remapped onto fermionic
/// mode indices (after the native fermionic modes) during expression
/// normalization, so downstream code only ever sees fermions and bosons.
struct LadderOp {
  Species species = Species::fermion;
  int mode = 0;
  bool dagger = false;

  bool operator==(const LadderOp&) const = default;
};

struct Term {
  cplx coefficient{1.0, 0.0};
  std::vector<LadderOp> factors;

  bool is_identity() const { return factors.empty(); }
  bool same_factors(const Term& other) const { return factors == other.factors; }
};

/// A term together with an optional implicit "+ h.c." partner.
struct TermGroup {
  Term term;
  bool with_hc = false;
};

struct OperatorExpr {
  std::vector<TermGroup> groups;
};

/// Mode bookkeeping. n_fermionic counts fermionic plus remapped antifermionic
/// modes; omega is the global bosonic occupation cutoff.
struct ModeSpec {
  int n_fermionic = 0;
  int n_bosonic = 0;
  int omega = 1;

  std::size_t dim() const {
    std::size_t d = std::size_t{1} << n_fermionic;
    for (int i = 0; i < n_bosonic; ++i) d *= std::size_t(omega + 1);
    return d;
  }
};

struct FockState {
  std::vector<uint8_t> fermions;  // occupation 0/1 per mode
  std::vector<int> bosons;        // occupation in [0, omega]

  bool operator==(const FockState&) const = default;
};

FockState state_of_index(std::size_t index, const ModeSpec& modes);
std::size_t index_of_state(const FockState& state, const ModeSpec& modes);

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " at position " + std::to_string(position)),
        pos(position) {}
  std::size_t pos;
};

/// Reverses factor order, toggles daggers, conjugates the coefficient.
Term hermitian_conjugate(const Term& term);

struct Applied {
  cplx amplitude;
  FockState state;
};

/// Applies the term's factors right-to-left. Returns nullopt when the
/// amplitude vanishes (annihilating empty, creating full, exceeding omega).
std::optional<Applied> apply_term(const Term& term, const FockState& state,
                                  int omega);

enum class Ordering { normal, mode };

/// Rewrites a term as an equivalent sum of terms in the requested ordering,
/// using the (anti)commutation rules. Identically-zero terms are dropped.
std::vector<Term> reorder(const Term& term, Ordering target);

/// Canonical mode-ordered form used by the rest of the pipeline.
std::vector<Term> mode_order(const Term& term);

/// Brute-force Fock-space matrix of the expression (h.c. partners included).
Matrix to_matrix(const OperatorExpr& expr, const ModeSpec& modes,
                 std::size_t dimension_cap = std::size_t{1} << 20);

/// Single oracle column: action of the expression on basis state `col`.
std::map<std::size_t, cplx> oracle_column(const OperatorExpr& expr,
                                          const ModeSpec& modes,
                                          std::size_t col);

/// Parses the operator grammar and normalizes: antifermion remapping,
/// mode ordering, duplicate merging, self-adjoint detection, and splitting of
/// mixed-complex coefficients.
OperatorExpr parse_operator(const std::string& text);

/// Applies the same normalization pipeline to an already-built expression.
OperatorExpr normalize(const OperatorExpr& expr);

/// Smallest mode counts covering every factor in the expression.
ModeSpec infer_modes(const OperatorExpr& expr, int omega);

std::string to_string(const Term& term);
std::string to_string(const OperatorExpr& expr);

}  // namespace lobe

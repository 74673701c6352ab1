#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lobe/circuit.hpp"

namespace lobe {

/// Uniformly controlled rotation schedule: raw per-index angles plus the
/// Gray-code-processed angles actually emitted.
struct AngleSchedule {
  std::vector<double> raw_angles;        // zero-padded to a power of two
  std::vector<double> processed_angles;  // theta = M * alpha
};

/// Gray-code preprocessing, theta = M alpha with M_{ij} = (-1)^{b_j . g_i} / L.
AngleSchedule gray_transform(std::vector<double> alphas);

/// Inverse of the Gray transform (alpha = L * M^T theta); used by tests.
std::vector<double> gray_untransform(const std::vector<double>& thetas);

enum class AddStrategy { incrementer_chain, load_add_unload, inlined_controlled_add };

struct AdditionPlan {
  unsigned long constant = 0;
  int register_width = 0;
  int trailing_zeros = 0;
  AddStrategy strategy = AddStrategy::incrementer_chain;
  long predicted_t_count = 0;
  int predicted_clean_ancillae = 0;
};

/// Cost model for one strategy; `predicted` fields follow the closed forms.
AdditionPlan plan_addition(unsigned long m, int width, AddStrategy strategy);
/// Minimal-T plan (ties: fewer clean ancillae, then strategy order).
AdditionPlan plan_addition(unsigned long m, int width);

/// Elbow ladder computing the AND of two or more literals onto a clean qubit.
class AndLadder {
 public:
  AndLadder(CircuitBuilder& b, std::vector<std::pair<Qubit, int>> literals);
  Qubit result() const { return chain_.back(); }
  void release();  // uncomputes in reverse
  ~AndLadder();

 private:
  CircuitBuilder& b_;
  std::vector<std::pair<Qubit, int>> literals_;
  std::vector<Qubit> chain_;
  bool released_ = false;
};

/// Multi-controlled X onto `target` via an elbow ladder.
/// `literals` are (qubit, polarity) pairs; the optional control is one more.
void compile_mcx(CircuitBuilder& b, std::vector<std::pair<Qubit, int>> literals,
                 Qubit target);

/// A (qubit, polarity) pair.
using Literal = std::pair<Qubit, int>;

/// |n> -> |n + m mod 2^width> on `reg`, conditioned on `control` when present.
void compile_add_constant(CircuitBuilder& b, const std::vector<Qubit>& reg,
                          unsigned long m, std::optional<Literal> control,
                          std::optional<AddStrategy> strategy = std::nullopt);

/// Applies Ry(raw_angles[l]) to `target` when the index register reads l
/// (little-endian). With a control, uses the AND-ancilla construction with a
/// final zero-controlled fix-up rotation.
void compile_ucr(CircuitBuilder& b, const AngleSchedule& schedule, Qubit target,
                 const std::vector<Qubit>& index_register,
                 std::optional<Literal> control);

/// Wraps an optional control qubit as a solid-polarity literal.
inline std::optional<Literal> as_literal(std::optional<Qubit> q) {
  if (!q) return std::nullopt;
  return Literal{*q, 1};
}

/// Prepares sum_l sqrt(p(l)) |l> from |0...0> on the given register.
void compile_grover_rudolph(CircuitBuilder& b, std::vector<double> probabilities,
                            const std::vector<Qubit>& reg);

/// Gray/Grover-Rudolph helper: the two-level conditional-probability angles.
std::vector<double> grover_rudolph_layer_angles(const std::vector<double>& probs,
                                                int layer);

/// Uniform superposition over the first n basis states on ceil(log2 n) qubits.
void compile_usp(CircuitBuilder& b, unsigned long n, const std::vector<Qubit>& reg);

/// Walks index values [0, count) maintaining an AND chain; calls back with a
/// literal that reads true exactly on branch l (and the control, when given,
/// folded in). One elbow per live internal tree node: 4(count-1) T when
/// controlled. The callback may emit gates conditioned on the literal.
void unary_iteration(CircuitBuilder& b, std::optional<Qubit> control,
                     const std::vector<Qubit>& index_register, std::size_t count,
                     const std::function<void(std::size_t, std::optional<Literal>)>& fn);

}  // namespace lobe

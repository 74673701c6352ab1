#include "lobe/lcu.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lobe/primitives.hpp"

namespace lobe {

namespace {

constexpr double kTol = 1e-12;

int index_bits(std::size_t count) {
  return count > 1 ? int(std::bit_width(count - 1)) : 0;
}

// Applies phase i^k conditioned on a literal (or globally when absent).
void apply_phase_power(CircuitBuilder& b, std::optional<Literal> lit, int k) {
  k = ((k % 4) + 4) % 4;
  if (k == 0) return;
  if (!lit) {
    b.global_phase(double(k) * std::numbers::pi / 2.0);
    return;
  }
  auto [q, pol] = *lit;
  if (pol == 0) b.x(q);
  if (k == 2) {
    b.z(q);
  } else {
    if (k == 3) b.z(q);
    b.s(q);
  }
  if (pol == 0) b.x(q);
}

// i^k phase index of a unit complex number; throws if not axis aligned.
int phase_power_of(cplx unit) {
  for (int k = 0; k < 4; ++k) {
    const cplx axis = std::polar(1.0, double(k) * std::numbers::pi / 2.0);
    if (std::abs(unit - axis) < 1e-9) return k;
  }
  throw std::invalid_argument("coefficient phase is not a power of i");
}

// Applies one Pauli string's letters (and its i^k phase) conditioned on lit.
void apply_string(CircuitBuilder& b, const PauliString& s,
                  const std::vector<Qubit>& system, std::optional<Literal> lit) {
  const cplx unit = s.coefficient / std::abs(s.coefficient);
  int k = phase_power_of(unit);
  for (std::size_t q = 0; q < s.letters.size(); ++q) {
    const Qubit target = system[q];
    switch (s.letters[q]) {
      case PauliLetter::I:
        break;
      case PauliLetter::X:
        if (lit)
          b.cnot(lit->first, target, lit->second);
        else
          b.x(target);
        break;
      case PauliLetter::Z:
        if (lit)
          b.z(target, {{lit->first, lit->second}});
        else
          b.z(target);
        break;
      case PauliLetter::Y:
        // Y = i XZ: apply Z, then X, then an i phase on the branch
        if (lit) {
          b.z(target, {{lit->first, lit->second}});
          b.cnot(lit->first, target, lit->second);
        } else {
          b.z(target);
          b.x(target);
        }
        k += 1;
        break;
    }
  }
  apply_phase_power(b, lit, k);
}

// Grover-Rudolph state prep (or its inverse) over weights/sum(weights),
// assembled on a scratch register and inlined onto `reg`.
void prepare_weights(CircuitBuilder& b, const std::vector<double>& weights,
                     const std::vector<Qubit>& reg, bool inverse) {
  if (reg.empty()) return;
  double lambda = 0.0;
  for (double w : weights) lambda += w;
  std::vector<double> probs;
  probs.reserve(weights.size());
  for (double w : weights) probs.push_back(w / lambda);

  CircuitBuilder scratch(int(reg.size()), false);
  std::vector<Qubit> sreg;
  for (int i = 0; i < int(reg.size()); ++i) sreg.push_back(scratch.system(i));
  compile_grover_rudolph(scratch, probs, sreg);
  Circuit prep = scratch.finalize();
  if (inverse) {
    Circuit rev;
    rev.layout = prep.layout;
    for (std::size_t i = prep.gates.size(); i-- > 0;) {
      Gate g = prep.gates[i];
      if (g.kind == GateKind::Ry) g.angle = -g.angle;
      rev.gates.push_back(std::move(g));
    }
    prep = std::move(rev);
  }
  CircuitBuilder::InlineMap map;
  map.system = reg;
  b.inline_circuit(prep, map);
}

}  // namespace

BlockEncoding lcu_encode(const PauliSum& sum, bool controlled) {
  if (sum.strings.empty()) throw std::invalid_argument("empty Pauli sum");
  // split mixed-phase coefficients so every term is |w| * i^k * letters
  std::vector<PauliString> terms;
  for (const auto& s : sum.strings) {
    if (std::abs(s.coefficient.real()) > kTol &&
        std::abs(s.coefficient.imag()) > kTol) {
      terms.push_back(PauliString{cplx{s.coefficient.real(), 0.0}, s.letters});
      terms.push_back(PauliString{cplx{0.0, s.coefficient.imag()}, s.letters});
    } else {
      terms.push_back(s);
    }
  }
  const std::size_t L = terms.size();
  const int nsys = int(sum.n_qubits());
  const int bits = index_bits(L);

  CircuitBuilder b(nsys, controlled);
  std::vector<Qubit> system;
  for (int i = 0; i < nsys; ++i) system.push_back(b.system(i));
  std::vector<Qubit> idx;
  for (int i = 0; i < bits; ++i) idx.push_back(b.add_index_qubit());

  std::vector<double> weights;
  double lambda = 0.0;
  for (const auto& t : terms) {
    weights.push_back(std::abs(t.coefficient));
    lambda += weights.back();
  }
  if (bits > 0) prepare_weights(b, weights, idx, /*inverse=*/false);

  unary_iteration(b, b.ctrl(), idx, L,
                  [&](std::size_t l, std::optional<Literal> lit) {
                    apply_string(b, terms[l], system, lit);
                  });

  if (bits > 0) prepare_weights(b, weights, idx, /*inverse=*/true);

  BlockEncoding be;
  be.circuit = b.finalize();
  be.lambda = lambda;
  be.method = "lcu";
  return be;
}

BlockEncoding combine(const std::vector<BlockEncoding>& encodings,
                      const std::vector<double>& coefficients, CombineMode mode,
                      std::optional<bool> controlled_result) {
  if (encodings.empty()) throw std::invalid_argument("empty encoding list");
  const int nsys = encodings[0].circuit.layout.n_system;
  const bool children_controlled = encodings[0].circuit.layout.n_ctrl == 1;
  for (const auto& e : encodings) {
    if (e.circuit.layout.n_system != nsys)
      throw std::invalid_argument("system width mismatch");
    if ((e.circuit.layout.n_ctrl == 1) != children_controlled)
      throw std::invalid_argument("mixed controlled-ness");
  }

  if (mode == CombineMode::product) {
    if (!coefficients.empty())
      throw std::invalid_argument("product combination takes no coefficients");
    const bool controlled = controlled_result.value_or(children_controlled);
    if (controlled != children_controlled)
      throw std::invalid_argument("product cannot change controlled-ness");
    CircuitBuilder b(nsys, controlled);
    std::vector<Qubit> system;
    for (int i = 0; i < nsys; ++i) system.push_back(b.system(i));
    double lambda = 1.0;
    std::vector<CircuitBuilder::InlineMap> maps(encodings.size());
    for (std::size_t e = 0; e < encodings.size(); ++e) {
      const auto& enc = encodings[e];
      auto& map = maps[e];
      if (children_controlled) map.ctrl = Literal{*b.ctrl(), 1};
      for (int i = 0; i < enc.circuit.layout.n_index; ++i)
        map.index.push_back(b.add_be_ancilla());
      for (int i = 0; i < enc.circuit.layout.n_be_anc; ++i)
        map.be.push_back(b.add_be_ancilla());
      map.system = system;
      lambda *= enc.lambda;
    }
    // A = E0 E1 ... : rightmost factor acts first
    for (std::size_t e = encodings.size(); e-- > 0;)
      b.inline_circuit(encodings[e].circuit, maps[e]);
    BlockEncoding out;
    out.circuit = b.finalize();
    out.lambda = lambda;
    out.method = "product";
    return out;
  }

  // LCO
  if (coefficients.size() != encodings.size())
    throw std::invalid_argument("coefficient count mismatch");
  for (double c : coefficients)
    if (c < 0.0)
      throw std::invalid_argument("LCO coefficients must be non-negative");
  if (!children_controlled)
    throw std::invalid_argument("LCO children must be controlled encodings");

  const bool controlled = controlled_result.value_or(true);
  const std::size_t G = encodings.size();
  if (G == 1 && controlled && std::abs(coefficients[0] - 1.0) < kTol)
    return encodings[0];

  CircuitBuilder b(nsys, controlled);
  std::vector<Qubit> system;
  for (int i = 0; i < nsys; ++i) system.push_back(b.system(i));
  const int bits = index_bits(G);
  std::vector<Qubit> idx;
  for (int i = 0; i < bits; ++i) idx.push_back(b.add_index_qubit());
  int pool_size = 0;
  for (const auto& e : encodings)
    pool_size = std::max(pool_size,
                         e.circuit.layout.n_index + e.circuit.layout.n_be_anc);
  std::vector<Qubit> pool;
  for (int i = 0; i < pool_size; ++i) pool.push_back(b.add_be_ancilla());

  std::vector<double> weights(G);
  double lambda = 0.0;
  for (std::size_t g = 0; g < G; ++g) {
    weights[g] = coefficients[g] * encodings[g].lambda;
    lambda += weights[g];
  }
  if (bits > 0) prepare_weights(b, weights, idx, /*inverse=*/false);

  unary_iteration(b, b.ctrl(), idx, G,
                  [&](std::size_t g, std::optional<Literal> lit) {
                    if (!lit) {
                      // uncontrolled parent with a single branch: drive the
                      // child with a constant-true literal
                      Qubit flag = b.add_be_ancilla();
                      lit = Literal{flag, 0};
                    }
                    const auto& enc = encodings[g];
                    CircuitBuilder::InlineMap map;
                    map.ctrl = *lit;
                    const int ni = enc.circuit.layout.n_index;
                    for (int i = 0; i < ni; ++i)
                      map.index.push_back(pool[std::size_t(i)]);
                    for (int i = 0; i < enc.circuit.layout.n_be_anc; ++i)
                      map.be.push_back(pool[std::size_t(ni + i)]);
                    map.system = system;
                    b.inline_circuit(enc.circuit, map);
                  });

  if (bits > 0) prepare_weights(b, weights, idx, /*inverse=*/true);

  BlockEncoding out;
  out.circuit = b.finalize();
  out.lambda = lambda;
  out.method = "lco";
  return out;
}

BlockEncoding pauli_expansion_encode(const OperatorExpr& expr, const ModeSpec& modes,
                                     bool controlled) {
  PauliExpansion exp = pauli_expand(expr, modes, PauliGranularity::full_term);
  if (exp.full.strings.empty())
    throw std::invalid_argument("expression expands to zero");
  BlockEncoding be = lcu_encode(exp.full, controlled);
  be.method = "pauli_expansion";
  return be;
}

BlockEncoding piecewise_pauli_encode(const OperatorExpr& expr, const ModeSpec& modes,
                                     bool controlled) {
  PauliExpansion exp = pauli_expand(expr, modes, PauliGranularity::per_mode);
  if (exp.pieces.empty()) throw std::invalid_argument("empty expression");
  std::vector<BlockEncoding> terms;
  std::vector<double> weights;
  for (const auto& piece : exp.pieces) {
    std::vector<BlockEncoding> factors;
    for (const auto& f : piece.factors) factors.push_back(lcu_encode(f.sum, true));
    BlockEncoding term_enc;
    if (factors.empty()) {
      CircuitBuilder b(system_qubit_count(modes), true);
      term_enc.circuit = b.finalize();
      term_enc.lambda = 1.0;
    } else if (factors.size() == 1) {
      term_enc = factors[0];
    } else {
      term_enc = combine(factors, {}, CombineMode::product);
    }
    const double mag = std::abs(piece.coefficient);
    if (mag > kTol) {
      const int k = phase_power_of(piece.coefficient / mag);
      if (k != 0) {
        CircuitBuilder b(term_enc.circuit.layout.n_system, true);
        std::vector<Qubit> system;
        for (int i = 0; i < term_enc.circuit.layout.n_system; ++i)
          system.push_back(b.system(i));
        CircuitBuilder::InlineMap map;
        map.ctrl = Literal{*b.ctrl(), 1};
        for (int i = 0; i < term_enc.circuit.layout.n_index; ++i)
          map.index.push_back(b.add_be_ancilla());
        for (int i = 0; i < term_enc.circuit.layout.n_be_anc; ++i)
          map.be.push_back(b.add_be_ancilla());
        map.system = system;
        b.inline_circuit(term_enc.circuit, map);
        apply_phase_power(b, Literal{*b.ctrl(), 1}, k);
        term_enc.circuit = b.finalize();
      }
    }
    terms.push_back(std::move(term_enc));
    weights.push_back(mag);
  }
  BlockEncoding be = combine(terms, weights, CombineMode::lco, controlled);
  be.method = "piecewise_pauli";
  return be;
}

}  // namespace lobe

#include "lobe/simulate.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <future>
#include <numbers>
#include <thread>

#include "simd/kernels.hpp"

namespace lobe {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Constraint {
  std::size_t mask = 0;
  std::size_t value = 0;
};

Constraint control_constraint(const Gate& g) {
  Constraint c;
  for (const auto& cb : g.controls) {
    c.mask |= std::size_t{1} << cb.qubit;
    if (cb.polarity) c.value |= std::size_t{1} << cb.qubit;
  }
  return c;
}

// Visits every index matching the constraint as contiguous runs
// [base, base + run).
template <typename Fn>
void for_each_run(std::size_t size, Constraint c, Fn&& fn) {
  if (c.mask == 0) {
    fn(std::size_t{0}, size);
    return;
  }
  const std::size_t run = std::size_t{1} << std::countr_zero(c.mask);
  const std::size_t all = size - 1;
  const std::size_t free_mask = all & ~c.mask & ~(run - 1);
  std::size_t s = 0;
  do {
    fn(c.value | s, run);
    s = (s - free_mask) & free_mask;
  } while (s != 0);
}

class Simulator {
 public:
  Simulator(std::vector<cplx>& state, int n_qubits)
      : state_(state), size_(std::size_t{1} << n_qubits) {}

  void pair_op_real(uint32_t target, Constraint ctrl, double m00, double m01,
                    double m10, double m11) {
    const auto& k = simd::active();
    Constraint c{ctrl.mask | (std::size_t{1} << target), ctrl.value};
    const std::size_t t = std::size_t{1} << target;
    for_each_run(size_, c, [&](std::size_t base, std::size_t run) {
      k.real2x2(state_.data() + base, state_.data() + base + t, run, m00, m01, m10,
                m11);
    });
  }

  void pair_swap(uint32_t target, Constraint ctrl) {
    const auto& k = simd::active();
    Constraint c{ctrl.mask | (std::size_t{1} << target), ctrl.value};
    const std::size_t t = std::size_t{1} << target;
    for_each_run(size_, c, [&](std::size_t base, std::size_t run) {
      k.swap_halves(state_.data() + base, state_.data() + base + t, run);
    });
  }

  void phase(Constraint match, cplx factor) {
    const auto& k = simd::active();
    for_each_run(size_, match, [&](std::size_t base, std::size_t run) {
      k.scale(state_.data() + base, run, factor);
    });
  }

  void apply(const Gate& g, ElbowMode mode) {
    const Constraint ctrl = control_constraint(g);
    switch (g.kind) {
      case GateKind::X:
      case GateKind::Toffoli:
      case GateKind::LeftElbow:
        pair_swap(g.targets.at(0), ctrl);
        break;
      case GateKind::RightElbow:
        if (mode == ElbowMode::unitary) {
          pair_swap(g.targets.at(0), ctrl);
        } else {
          const uint32_t t = g.targets.at(0);
          const double r = 1.0 / std::numbers::sqrt2;
          pair_op_real(t, Constraint{}, r, r, r, -r);
          Constraint m = ctrl;
          m.mask |= std::size_t{1} << t;
          m.value |= std::size_t{1} << t;
          phase(m, cplx{-1.0, 0.0});
          pair_op_real(t, Constraint{}, r, r, r, -r);
        }
        break;
      case GateKind::Z:
      case GateKind::CZ:
      case GateKind::ClassicallyControlledCZ: {
        Constraint m = ctrl;
        m.mask |= std::size_t{1} << g.targets.at(0);
        m.value |= std::size_t{1} << g.targets.at(0);
        phase(m, cplx{-1.0, 0.0});
        break;
      }
      case GateKind::S: {
        Constraint m = ctrl;
        m.mask |= std::size_t{1} << g.targets.at(0);
        m.value |= std::size_t{1} << g.targets.at(0);
        phase(m, kI);
        break;
      }
      case GateKind::H: {
        const double r = 1.0 / std::numbers::sqrt2;
        pair_op_real(g.targets.at(0), ctrl, r, r, r, -r);
        break;
      }
      case GateKind::Ry: {
        const double c = std::cos(g.angle / 2.0);
        const double s = std::sin(g.angle / 2.0);
        pair_op_real(g.targets.at(0), ctrl, c, -s, s, c);
        break;
      }
      case GateKind::GlobalPhase:
        phase(ctrl, std::polar(1.0, g.angle));
        break;
    }
  }

 private:
  std::vector<cplx>& state_;
  std::size_t size_;
};

}  // namespace

void validate_circuit(const Circuit& circuit) {
  const uint32_t total = uint32_t(circuit.total_qubits());
  for (const Gate& g : circuit.gates) {
    if (!std::isfinite(g.angle)) throw std::invalid_argument("non-finite angle");
    for (uint32_t t : g.targets)
      if (t >= total) throw std::out_of_range("gate target out of layout bounds");
    for (const auto& c : g.controls) {
      if (c.qubit >= total)
        throw std::out_of_range("gate control out of layout bounds");
      for (uint32_t t : g.targets)
        if (t == c.qubit)
          throw std::invalid_argument("control and target overlap");
    }
  }
}

void apply_circuit(const Circuit& circuit, std::vector<cplx>& state,
                   ElbowMode mode) {
  const int n = circuit.total_qubits();
  if (state.size() != (std::size_t{1} << n))
    throw std::invalid_argument("state size does not match layout");
  Simulator sim(state, n);
  for (const Gate& g : circuit.gates) sim.apply(g, mode);
}

std::vector<cplx> simulate(const Circuit& circuit, std::size_t input,
                           ElbowMode mode, int qubit_cap) {
  const int n = circuit.total_qubits();
  if (n > qubit_cap)
    throw std::length_error("simulation qubit cap exceeded: " + std::to_string(n) +
                            " > " + std::to_string(qubit_cap));
  validate_circuit(circuit);
  std::vector<cplx> state(std::size_t{1} << n, cplx{});
  if (input >= state.size()) throw std::out_of_range("input basis index");
  state[input] = 1.0;
  apply_circuit(circuit, state, mode);
  return state;
}

Matrix unitary(const Circuit& circuit, ElbowMode mode, int qubit_cap) {
  const int n = circuit.total_qubits();
  if (n > qubit_cap) throw std::length_error("unitary extraction cap exceeded");
  validate_circuit(circuit);
  const std::size_t d = std::size_t{1} << n;
  Matrix m(d, d);

  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<void>> futures;
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t col = next.fetch_add(1);
      if (col >= d) return;
      std::vector<cplx> state(d, cplx{});
      state[col] = 1.0;
      apply_circuit(circuit, state, mode);
      for (std::size_t row = 0; row < d; ++row) m(row, col) = state[row];
    }
  };
  for (unsigned w = 1; w < workers; ++w)
    futures.push_back(std::async(std::launch::async, work));
  work();
  for (auto& f : futures) f.get();
  return m;
}

}  // namespace lobe

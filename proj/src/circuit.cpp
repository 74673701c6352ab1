#include "lobe/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace lobe {

const char* to_string(GateKind kind) {
  switch (kind) {
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::S: return "S";
    case GateKind::H: return "H";
    case GateKind::CZ: return "CZ";
    case GateKind::Ry: return "RY";
    case GateKind::Toffoli: return "TOFFOLI";
    case GateKind::LeftElbow: return "LEFT_ELBOW";
    case GateKind::RightElbow: return "RIGHT_ELBOW";
    case GateKind::ClassicallyControlledCZ: return "CC_CZ";
    case GateKind::GlobalPhase: return "GLOBAL_PHASE";
  }
  return "?";
}

namespace {

// Angle classes mod 2*pi, tolerance 1e-12.
enum class AngleClass { zero, half_pi, pi, generic };

AngleClass classify_angle(double angle) {
  constexpr double tol = 1e-12;
  const double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a < 0) a += two_pi;
  auto near = [&](double x) { return std::abs(a - x) < tol; };
  if (near(0.0) || near(two_pi)) return AngleClass::zero;
  if (near(std::numbers::pi)) return AngleClass::pi;
  if (near(std::numbers::pi / 2) || near(3 * std::numbers::pi / 2))
    return AngleClass::half_pi;
  return AngleClass::generic;
}

}  // namespace

ResourceReport resources(const Circuit& circuit, ElbowMode mode) {
  ResourceReport rep;
  rep.be_ancillae = circuit.layout.n_be_anc + circuit.layout.n_index;
  rep.total_qubits = circuit.total_qubits();

  long live_clean = 0;
  long peak = 0;
  std::size_t ev = 0;
  for (std::size_t g = 0; g <= circuit.gates.size(); ++g) {
    while (ev < circuit.clean_events.size() &&
           circuit.clean_events[ev].gate_index == g) {
      live_clean += circuit.clean_events[ev].alloc ? 1 : -1;
      peak = std::max(peak, live_clean);
      ++ev;
    }
    if (g == circuit.gates.size()) break;

    const Gate& gate = circuit.gates[g];
    const std::size_t k = gate.controls.size();
    long transient = 0;
    switch (gate.kind) {
      case GateKind::X:
      case GateKind::Z:
        if (k <= 1) {
          ++rep.clifford_count;
        } else {
          rep.t_count += 4 * long(k - 1);
          transient = long(k - 1);
        }
        break;
      case GateKind::CZ:
        // one target + k extra controls; 2 involved qubits total is Clifford
        if (k <= 1) {
          ++rep.clifford_count;
        } else {
          rep.t_count += 4 * long(k - 1);
          transient = long(k - 1);
        }
        break;
      case GateKind::S:
        if (k == 0) {
          ++rep.clifford_count;
        } else {
          ++rep.rotation_count;
          if (k >= 2) {
            rep.t_count += 4 * long(k - 1);
            transient = long(k - 1);
          }
        }
        break;
      case GateKind::H:
        if (k == 0) {
          ++rep.clifford_count;
        } else {
          rep.rotation_count += 2;
          if (k >= 2) {
            rep.t_count += 4 * long(k - 1);
            transient = long(k - 1);
          }
        }
        break;
      case GateKind::Ry: {
        const AngleClass ac = classify_angle(gate.angle);
        if (k == 0) {
          if (ac == AngleClass::generic)
            ++rep.rotation_count;
          else
            ++rep.clifford_count;
        } else {
          if (ac == AngleClass::zero || ac == AngleClass::pi) {
            ++rep.clifford_count;  // controlled Ry(pi) = CZ then CX
          } else {
            rep.rotation_count += 2;
          }
          if (k >= 2) {
            rep.t_count += 4 * long(k - 1);
            transient = long(k - 1);
          }
        }
        break;
      }
      case GateKind::Toffoli:
        if (k <= 1) {
          ++rep.clifford_count;
        } else {
          rep.t_count += 4 * long(k - 1);
          transient = long(k - 1);
        }
        break;
      case GateKind::LeftElbow:
        rep.t_count += 4;
        break;
      case GateKind::RightElbow:
        if (mode == ElbowMode::unitary)
          rep.t_count += 4;
        else
          ++rep.clifford_count;
        break;
      case GateKind::ClassicallyControlledCZ:
        ++rep.clifford_count;
        break;
      case GateKind::GlobalPhase:
        break;
    }
    peak = std::max(peak, live_clean + transient);
  }
  rep.clean_ancillae_peak = int(std::max<long>(peak, circuit.layout.n_clean));
  return rep;
}

std::string resource_report_json(const ResourceReport& rep) {
  std::ostringstream os;
  os.precision(15);
  os << "{\"t_count\": " << rep.t_count
     << ", \"rotation_count\": " << rep.rotation_count
     << ", \"clifford_count\": " << rep.clifford_count
     << ", \"be_ancillae\": " << rep.be_ancillae
     << ", \"clean_ancillae_peak\": " << rep.clean_ancillae_peak
     << ", \"total_qubits\": " << rep.total_qubits << ", \"lambda\": " << rep.lambda
     << "}";
  return os.str();
}

void serialize(const Circuit& circuit, std::ostream& os) {
  os << "LAYOUT ctrl=" << circuit.layout.n_ctrl
     << " index=" << circuit.layout.n_index << " be=" << circuit.layout.n_be_anc
     << " clean=" << circuit.layout.n_clean << " system=" << circuit.layout.n_system
     << "\n";
  for (const Gate& g : circuit.gates) {
    os << "GATE " << to_string(g.kind) << " targets=[";
    for (std::size_t i = 0; i < g.targets.size(); ++i)
      os << (i ? "," : "") << g.targets[i];
    os << "] ctrl=[";
    for (std::size_t i = 0; i < g.controls.size(); ++i)
      os << (i ? "," : "") << "(" << g.controls[i].qubit << ","
         << int(g.controls[i].polarity) << ")";
    os << "]";
    if (g.kind == GateKind::Ry || g.kind == GateKind::GlobalPhase) {
      os.precision(17);
      os << " angle=" << g.angle;
    }
    os << "\n";
  }
}

std::string serialize(const Circuit& circuit) {
  std::ostringstream os;
  serialize(circuit, os);
  return os.str();
}

CircuitBuilder::CircuitBuilder(int n_system, bool controlled)
    : controlled_(controlled), n_system_(n_system) {}

std::optional<Qubit> CircuitBuilder::ctrl() const {
  if (!controlled_) return std::nullopt;
  return Qubit{Qubit::Kind::ctrl, 0};
}

Qubit CircuitBuilder::system(int i) const {
  if (i < 0 || i >= n_system_) throw std::out_of_range("system qubit");
  return Qubit{Qubit::Kind::system, i};
}

Qubit CircuitBuilder::index(int i) const {
  if (i < 0 || i >= n_index_) throw std::out_of_range("index qubit");
  return Qubit{Qubit::Kind::index, i};
}

Qubit CircuitBuilder::be(int i) const {
  if (i < 0 || i >= n_be_) throw std::out_of_range("be qubit");
  return Qubit{Qubit::Kind::be, i};
}

Qubit CircuitBuilder::add_index_qubit() {
  return Qubit{Qubit::Kind::index, n_index_++};
}

Qubit CircuitBuilder::add_be_ancilla() { return Qubit{Qubit::Kind::be, n_be_++}; }

Qubit CircuitBuilder::alloc_clean() {
  int id;
  if (!free_clean_.empty()) {
    id = free_clean_.back();
    free_clean_.pop_back();
  } else {
    id = clean_high_water_++;
  }
  live_clean_.push_back(id);
  events_.push_back(PendingEvent{pending_.size(), id, true});
  return Qubit{Qubit::Kind::clean, id};
}

void CircuitBuilder::free_clean(Qubit q) {
  if (q.kind != Qubit::Kind::clean) throw std::invalid_argument("not a clean qubit");
  auto it = std::find(live_clean_.begin(), live_clean_.end(), q.id);
  if (it == live_clean_.end())
    throw std::invalid_argument("double free of clean ancilla");
  live_clean_.erase(it);
  free_clean_.push_back(q.id);
  events_.push_back(PendingEvent{pending_.size(), q.id, false});
}

void CircuitBuilder::emit(GateKind kind, std::vector<Qubit> targets,
                          const std::vector<std::pair<Qubit, int>>& ctrls,
                          double angle) {
  if (finalized_) throw std::logic_error("builder already finalized");
  PendingGate g{kind, std::move(targets), ctrls, angle};
  pending_.push_back(std::move(g));
}

void CircuitBuilder::x(Qubit t, const std::vector<std::pair<Qubit, int>>& c) {
  emit(GateKind::X, {t}, c);
}
void CircuitBuilder::z(Qubit t, const std::vector<std::pair<Qubit, int>>& c) {
  emit(GateKind::Z, {t}, c);
}
void CircuitBuilder::s(Qubit t, const std::vector<std::pair<Qubit, int>>& c) {
  emit(GateKind::S, {t}, c);
}
void CircuitBuilder::h(Qubit t, const std::vector<std::pair<Qubit, int>>& c) {
  emit(GateKind::H, {t}, c);
}
void CircuitBuilder::cz(Qubit a, Qubit b, int polarity_b,
                        const std::vector<std::pair<Qubit, int>>& extra) {
  auto ctrls = extra;
  ctrls.emplace_back(b, polarity_b);
  emit(GateKind::CZ, {a}, ctrls);
}
void CircuitBuilder::ry(Qubit t, double angle,
                        const std::vector<std::pair<Qubit, int>>& c) {
  emit(GateKind::Ry, {t}, c, angle);
}
void CircuitBuilder::cnot(Qubit control, Qubit target, int polarity) {
  emit(GateKind::X, {target}, {{control, polarity}});
}
void CircuitBuilder::toffoli(Qubit c0, int p0, Qubit c1, int p1, Qubit target) {
  emit(GateKind::Toffoli, {target}, {{c0, p0}, {c1, p1}});
}
void CircuitBuilder::global_phase(double angle) {
  if (controlled_)
    throw std::logic_error("controlled circuits must phase via gates on ctrl");
  emit(GateKind::GlobalPhase, {}, {}, angle);
}

Qubit CircuitBuilder::left_elbow(Qubit a, int pa, Qubit b, int pb) {
  Qubit t = alloc_clean();
  emit(GateKind::LeftElbow, {t}, {{a, pa}, {b, pb}});
  return t;
}

void CircuitBuilder::right_elbow(Qubit target, Qubit a, int pa, Qubit b, int pb) {
  emit(GateKind::RightElbow, {target}, {{a, pa}, {b, pb}});
  free_clean(target);
}

uint32_t CircuitBuilder::resolve(Qubit q) const {
  const int n_ctrl = controlled_ ? 1 : 0;
  switch (q.kind) {
    case Qubit::Kind::ctrl:
      if (!controlled_) throw std::logic_error("circuit has no control qubit");
      return 0;
    case Qubit::Kind::index: return uint32_t(n_ctrl + q.id);
    case Qubit::Kind::be: return uint32_t(n_ctrl + n_index_ + q.id);
    case Qubit::Kind::clean: return uint32_t(n_ctrl + n_index_ + n_be_ + q.id);
    case Qubit::Kind::system:
      return uint32_t(n_ctrl + n_index_ + n_be_ + clean_high_water_ + q.id);
    case Qubit::Kind::none: break;
  }
  throw std::logic_error("unresolved qubit");
}

void CircuitBuilder::inline_circuit(const Circuit& child, const InlineMap& map) {
  if (int(map.index.size()) < child.layout.n_index ||
      int(map.be.size()) < child.layout.n_be_anc ||
      int(map.system.size()) < child.layout.n_system)
    throw std::invalid_argument("inline map does not cover the child layout");
  if (child.layout.n_ctrl == 1 && !map.ctrl)
    throw std::invalid_argument("child expects a control literal");

  std::vector<Qubit> clean_map(std::size_t(child.layout.n_clean));
  const int clean_base = child.layout.clean_offset();
  const int system_base = child.layout.system_offset();

  // translate a child flat index to (qubit, polarity-transform) in the parent
  auto translate = [&](uint32_t flat) -> std::pair<Qubit, bool> {
    int q = int(flat);
    if (child.layout.n_ctrl == 1 && q == 0) {
      return {map.ctrl->first, map.ctrl->second == 0};
    }
    if (q >= system_base) return {map.system[std::size_t(q - system_base)], false};
    if (q >= clean_base) return {clean_map[std::size_t(q - clean_base)], false};
    if (q >= child.layout.be_offset())
      return {map.be[std::size_t(q - child.layout.be_offset())], false};
    return {map.index[std::size_t(q - child.layout.index_offset())], false};
  };

  std::size_t ev = 0;
  for (std::size_t g = 0; g <= child.gates.size(); ++g) {
    while (ev < child.clean_events.size() &&
           child.clean_events[ev].gate_index == g) {
      const auto& e = child.clean_events[ev];
      const std::size_t slot = std::size_t(int(e.qubit) - clean_base);
      if (e.alloc)
        clean_map[slot] = alloc_clean();
      else
        free_clean(clean_map[slot]);
      ++ev;
    }
    if (g == child.gates.size()) break;

    const Gate& gate = child.gates[g];
    std::vector<std::pair<Qubit, int>> ctrls;
    for (const auto& c : gate.controls) {
      auto [q, invert] = translate(c.qubit);
      ctrls.emplace_back(q, invert ? 1 - int(c.polarity) : int(c.polarity));
    }
    std::vector<Qubit> targets;
    bool target_inverted = false;
    for (uint32_t t : gate.targets) {
      auto [q, invert] = translate(t);
      targets.push_back(q);
      target_inverted |= invert;
    }
    if (target_inverted) {
      // only diagonal gates may target the control wire
      if (gate.kind != GateKind::Z && gate.kind != GateKind::S &&
          gate.kind != GateKind::CZ)
        throw std::logic_error("non-diagonal child gate targets the control");
      x(targets[0]);
      emit(gate.kind, targets, ctrls, gate.angle);
      x(targets[0]);
      continue;
    }
    if (gate.kind == GateKind::GlobalPhase && map.ctrl)
      throw std::logic_error("controlled child circuits must not carry a global phase");
    emit(gate.kind, std::move(targets), ctrls, gate.angle);
  }
}

Circuit CircuitBuilder::finalize() {
  if (!live_clean_.empty())
    throw std::logic_error("clean ancilla leak: " +
                           std::to_string(live_clean_.size()) + " unfreed");
  finalized_ = true;
  Circuit c;
  c.layout.n_ctrl = controlled_ ? 1 : 0;
  c.layout.n_index = n_index_;
  c.layout.n_be_anc = n_be_;
  c.layout.n_clean = clean_high_water_;
  c.layout.n_system = n_system_;
  c.gates.reserve(pending_.size());
  for (const auto& pg : pending_) {
    Gate g;
    g.kind = pg.kind;
    g.angle = pg.angle;
    for (const auto& t : pg.targets) g.targets.push_back(resolve(t));
    for (const auto& [q, pol] : pg.controls)
      g.controls.push_back(ControlBit{resolve(q), uint8_t(pol)});
    c.gates.push_back(std::move(g));
  }
  const int clean_base = c.layout.clean_offset();
  for (const auto& ev : events_)
    c.clean_events.push_back(
        CleanEvent{ev.gate_index, uint32_t(clean_base + ev.clean_id), ev.alloc});
  return c;
}

}  // namespace lobe

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lobe {

// Gate kinds. S and GlobalPhase extend the base set so that Pauli-Y letters
// and i^k coefficient phases stay exactly representable; both are Clifford.
enum class GateKind {
  X,
  Z,
  S,
  H,
  CZ,
  Ry,
  Toffoli,
  LeftElbow,
  RightElbow,
  ClassicallyControlledCZ,
  GlobalPhase,
};

const char* to_string(GateKind kind);

struct ControlBit {
  uint32_t qubit = 0;
  uint8_t polarity = 1;  // 1 = solid control, 0 = open control

  bool operator==(const ControlBit&) const = default;
};

struct Gate {
  GateKind kind;
  std::vector<uint32_t> targets;
  std::vector<ControlBit> controls;
  double angle = 0.0;  // Ry rotation angle; GlobalPhase multiplies by e^{i*angle}
};

/// Typed register map. Regions are contiguous and ordered
/// control | index | BE ancilla | clean | system, with qubit 0 the control.
struct RegisterLayout {
  int n_ctrl = 0;
  int n_index = 0;
  int n_be_anc = 0;
  int n_clean = 0;
  int n_system = 0;

  int total() const { return n_ctrl + n_index + n_be_anc + n_clean + n_system; }
  int index_offset() const { return n_ctrl; }
  int be_offset() const { return n_ctrl + n_index; }
  int clean_offset() const { return n_ctrl + n_index + n_be_anc; }
  int system_offset() const { return n_ctrl + n_index + n_be_anc + n_clean; }
};

/// Clean-ancilla lifetime marker, recorded by the builder so that resource
/// accounting can replay allocator state alongside the gate stream.
struct CleanEvent {
  std::size_t gate_index = 0;  // event applies before this gate position
  uint32_t qubit = 0;
  bool alloc = true;
};

struct Circuit {
  RegisterLayout layout;
  std::vector<Gate> gates;
  std::vector<CleanEvent> clean_events;

  int total_qubits() const { return layout.total(); }
};

enum class ElbowMode { unitary, measured };

struct ResourceReport {
  long t_count = 0;
  long rotation_count = 0;
  long clifford_count = 0;
  int be_ancillae = 0;
  int clean_ancillae_peak = 0;
  int total_qubits = 0;
  double lambda = 0.0;
};

/// Exact gate-count accounting under the chosen elbow mode.
ResourceReport resources(const Circuit& circuit, ElbowMode mode = ElbowMode::measured);

std::string resource_report_json(const ResourceReport& report);

/// Line-oriented circuit text, one gate per line.
void serialize(const Circuit& circuit, std::ostream& os);
std::string serialize(const Circuit& circuit);

/// Symbolic qubit handle used while a circuit is under construction.
struct Qubit {
  enum class Kind : uint8_t { none, ctrl, index, be, clean, system };
  Kind kind = Kind::none;
  int id = 0;

  bool valid() const { return kind != Kind::none; }
  bool operator==(const Qubit&) const = default;
};

/// Builds circuits over symbolic registers; region sizes (including the
/// clean-ancilla high-water mark) are fixed when finalize() runs.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(int n_system, bool controlled = true);

  bool controlled() const { return controlled_; }
  std::optional<Qubit> ctrl() const;
  Qubit system(int i) const;
  Qubit index(int i) const;
  Qubit be(int i) const;

  Qubit add_index_qubit();
  Qubit add_be_ancilla();

  Qubit alloc_clean();
  void free_clean(Qubit q);

  // Gate emission. Controls may be empty.
  void x(Qubit target, const std::vector<std::pair<Qubit, int>>& ctrls = {});
  void z(Qubit target, const std::vector<std::pair<Qubit, int>>& ctrls = {});
  void s(Qubit target, const std::vector<std::pair<Qubit, int>>& ctrls = {});
  void h(Qubit target, const std::vector<std::pair<Qubit, int>>& ctrls = {});
  void cz(Qubit a, Qubit b, int polarity_b = 1,
          const std::vector<std::pair<Qubit, int>>& extra = {});
  void ry(Qubit target, double angle,
          const std::vector<std::pair<Qubit, int>>& ctrls = {});
  void cnot(Qubit control, Qubit target, int polarity = 1);
  void toffoli(Qubit c0, int p0, Qubit c1, int p1, Qubit target);
  void global_phase(double angle);

  /// Computes the AND of two literals onto a fresh clean qubit.
  Qubit left_elbow(Qubit a, int pa, Qubit b, int pb);
  /// Uncomputes and frees an elbow target.
  void right_elbow(Qubit target, Qubit a, int pa, Qubit b, int pb);

  int clean_in_use() const { return int(live_clean_.size()); }

  Circuit finalize();

  /// Replays a finalized child circuit into this builder. The child's control
  /// wire maps to a literal (so Select branches can drive whole encodings);
  /// its clean ancillae are re-allocated here by replaying its alloc events.
  struct InlineMap {
    std::optional<std::pair<Qubit, int>> ctrl;
    std::vector<Qubit> index;
    std::vector<Qubit> be;
    std::vector<Qubit> system;
  };
  void inline_circuit(const Circuit& child, const InlineMap& map);

 private:
  friend class CircuitInliner;
  uint32_t resolve(Qubit q) const;
  void emit(GateKind kind, std::vector<Qubit> targets,
            const std::vector<std::pair<Qubit, int>>& ctrls, double angle = 0.0);

  bool controlled_;
  int n_system_;
  int n_index_ = 0;
  int n_be_ = 0;
  int clean_high_water_ = 0;
  std::vector<int> free_clean_;
  std::vector<int> live_clean_;
  bool finalized_ = false;

  struct PendingGate {
    GateKind kind;
    std::vector<Qubit> targets;
    std::vector<std::pair<Qubit, int>> controls;
    double angle;
  };
  std::vector<PendingGate> pending_;
  struct PendingEvent {
    std::size_t gate_index;
    int clean_id;
    bool alloc;
  };
  std::vector<PendingEvent> events_;
};

}  // namespace lobe

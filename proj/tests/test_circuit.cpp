#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "lobe/circuit.hpp"

using namespace lobe;

TEST_CASE("builder lays out regions in fixed order") {
  CircuitBuilder b(2, true);
  Qubit idx = b.add_index_qubit();
  Qubit anc = b.add_be_ancilla();
  Qubit c0 = b.alloc_clean();
  b.x(b.system(0));
  b.cnot(idx, anc);
  b.cnot(c0, b.system(1));
  b.free_clean(c0);
  Circuit c = b.finalize();
  CHECK(c.layout.n_ctrl == 1);
  CHECK(c.layout.n_index == 1);
  CHECK(c.layout.n_be_anc == 1);
  CHECK(c.layout.n_clean == 1);
  CHECK(c.layout.n_system == 2);
  CHECK(c.total_qubits() == 6);
  // system offset: 1 + 1 + 1 + 1 = 4
  CHECK(c.gates[0].targets[0] == 4);
  CHECK(c.gates[1].controls[0].qubit == 1);
  CHECK(c.gates[1].targets[0] == 2);
}

TEST_CASE("allocator: LIFO reuse and peak tracking") {
  CircuitBuilder b(1, false);
  Qubit q1 = b.alloc_clean();
  Qubit q2 = b.alloc_clean();
  Qubit q3 = b.alloc_clean();
  b.free_clean(q3);
  b.free_clean(q2);
  b.free_clean(q1);
  Qubit r1 = b.alloc_clean();
  Qubit r2 = b.alloc_clean();
  CHECK(r1.id == q1.id);  // reused
  b.free_clean(r2);
  b.free_clean(r1);
  Circuit c = b.finalize();
  CHECK(c.layout.n_clean == 3);
  CHECK(resources(c).clean_ancillae_peak == 3);
}

TEST_CASE("allocator: double free and leak detection") {
  CircuitBuilder b(1, false);
  Qubit q = b.alloc_clean();
  b.free_clean(q);
  CHECK_THROWS_AS(b.free_clean(q), std::invalid_argument);

  CircuitBuilder b2(1, false);
  b2.alloc_clean();
  CHECK_THROWS_AS(b2.finalize(), std::logic_error);
}

TEST_CASE("resources: Toffoli costs 4 T and one transient clean") {
  CircuitBuilder b(3, false);
  b.toffoli(b.system(0), 1, b.system(1), 1, b.system(2));
  Circuit c = b.finalize();
  ResourceReport r = resources(c);
  CHECK(r.t_count == 4);
  CHECK(r.rotation_count == 0);
  CHECK(r.clean_ancillae_peak == 1);
}

TEST_CASE("resources: elbow pair costs 4 T measured, 8 T unitary") {
  CircuitBuilder b(2, false);
  Qubit t = b.left_elbow(b.system(0), 1, b.system(1), 1);
  b.right_elbow(t, b.system(0), 1, b.system(1), 1);
  Circuit c = b.finalize();
  CHECK(resources(c, ElbowMode::measured).t_count == 4);
  CHECK(resources(c, ElbowMode::unitary).t_count == 8);
  CHECK(resources(c).clean_ancillae_peak == 1);
}

TEST_CASE("resources: Clifford Ry angles are excluded from rotations") {
  CircuitBuilder b(1, false);
  b.ry(b.system(0), std::numbers::pi / 2);
  b.ry(b.system(0), -std::numbers::pi / 2);
  b.ry(b.system(0), std::numbers::pi);
  b.ry(b.system(0), 0.0);
  b.ry(b.system(0), 0.3);
  Circuit c = b.finalize();
  ResourceReport r = resources(c);
  CHECK(r.rotation_count == 1);
  CHECK(r.clifford_count == 4);
  CHECK(r.t_count == 0);
}

TEST_CASE("resources: controlled rotation counts two rotations") {
  CircuitBuilder b(2, false);
  b.ry(b.system(0), 0.7, {{b.system(1), 1}});
  Circuit c = b.finalize();
  CHECK(resources(c).rotation_count == 2);
}

TEST_CASE("resources: identical circuits give identical reports") {
  auto make = []() {
    CircuitBuilder b(2, true);
    Qubit anc = b.add_be_ancilla();
    b.toffoli(*b.ctrl(), 1, b.system(0), 0, anc);
    b.ry(anc, 0.25, {{*b.ctrl(), 1}});
    return resources(b.finalize());
  };
  ResourceReport a = make();
  ResourceReport b = make();
  CHECK(a.t_count == b.t_count);
  CHECK(a.rotation_count == b.rotation_count);
  CHECK(a.clifford_count == b.clifford_count);
  CHECK(a.clean_ancillae_peak == b.clean_ancillae_peak);
}

TEST_CASE("serialization is line oriented with exact fields") {
  CircuitBuilder b(1, true);
  b.ry(b.system(0), 0.5, {{*b.ctrl(), 1}});
  Circuit c = b.finalize();
  std::string text = serialize(c);
  CHECK(text.find("GATE RY targets=[1] ctrl=[(0,1)] angle=0.5") != std::string::npos);
}

TEST_CASE("resource report JSON uses the exact field names") {
  ResourceReport r;
  r.t_count = 4;
  r.lambda = 2.5;
  std::string j = resource_report_json(r);
  for (const char* key :
       {"t_count", "rotation_count", "clifford_count", "be_ancillae",
        "clean_ancillae_peak", "total_qubits", "lambda"})
    CHECK(j.find(key) != std::string::npos);
}

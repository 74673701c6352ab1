#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lobe/lcu.hpp"
#include "lobe/lobe_synth.hpp"
#include "lobe/simulate.hpp"
#include "lobe/verify.hpp"

using namespace lobe;

TEST_CASE("extract_block of an empty circuit is the identity") {
  CircuitBuilder b(2, true);
  BlockEncoding be;
  be.circuit = b.finalize();
  be.lambda = 1.0;
  Matrix block = extract_block(be);
  CHECK(Matrix::max_abs_diff(block, Matrix::identity(4)) == 0.0);
}

TEST_CASE("extract_block recovers (X+Y)/2 from its LCU encoding") {
  PauliSum s;
  s.strings.push_back(PauliString{0.5, {PauliLetter::X}});
  s.strings.push_back(PauliString{0.5, {PauliLetter::Y}});
  BlockEncoding be = lcu_encode(s, true);
  Matrix block = extract_block(be);
  Matrix want = to_matrix(s);
  want *= cplx{1.0 / be.lambda, 0.0};
  CHECK(Matrix::max_abs_diff(block, want) < 1e-10);
}

TEST_CASE("verify_encoding: exact Clifford circuit verifies to 1e-12") {
  OperatorExpr expr = parse_operator("b0^");
  ModeSpec modes = infer_modes(expr, 1);
  BlockEncoding be = encode_hamiltonian(expr, {modes, true});
  VerificationReport rep = verify_encoding(be, expr, modes, 1e-12);
  CHECK(rep.passed);
  CHECK(rep.max_abs_error < 1e-12);
  CHECK(rep.clean_ancilla_leakage < 1e-12);
  CHECK(rep.lambda_used == doctest::Approx(1.0));
  CHECK(rep.spectral_norm == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("verify_encoding: rotation-based circuit verifies at 1e-10") {
  OperatorExpr expr = parse_operator("a0");
  ModeSpec modes = infer_modes(expr, 3);
  BlockEncoding be = encode_hamiltonian(expr, {modes, true});
  VerificationReport rep = verify_encoding(be, expr, modes, 1e-10);
  CHECK(rep.passed);
  CHECK(rep.spectral_norm == doctest::Approx(std::sqrt(3.0)).epsilon(1e-8));
}

TEST_CASE("verify_encoding: a corrupted angle fails with a localized error") {
  OperatorExpr expr = parse_operator("a0");
  ModeSpec modes = infer_modes(expr, 3);
  BlockEncoding be = encode_hamiltonian(expr, {modes, true});
  for (auto& g : be.circuit.gates)
    if (g.kind == GateKind::Ry && std::abs(g.angle) > 0.2) {
      g.angle += 0.05;
      break;
    }
  VerificationReport rep = verify_encoding(be, expr, modes, 1e-10);
  CHECK_FALSE(rep.passed);
  CHECK(rep.max_abs_error > 1e-3);
  CHECK(rep.max_abs_error < 0.2);
  std::string j = verification_report_json(rep);
  CHECK(j.find("\"passed\": false") != std::string::npos);
}

TEST_CASE("row-sampled verification agrees with full extraction") {
  OperatorExpr expr = parse_operator("b0 b1 + h.c.");
  ModeSpec modes = infer_modes(expr, 1);
  BlockEncoding be = encode_hamiltonian(expr, {modes, true});
  VerificationReport full = verify_encoding(be, expr, modes, 1e-10);
  VerificationReport sampled =
      verify_encoding(be, expr, modes, 1e-10, /*full_extraction_limit=*/0, 42u);
  CHECK(full.passed);
  CHECK(sampled.passed);
  CHECK(sampled.row_sampled);
  CHECK(sampled.columns_checked <= full.columns_checked);
}

TEST_CASE("eigenstate decomposition: k on the block, sqrt(1-k^2) outside") {
  // H = b†b + 0.5 (b + b†) on one mode: 2x2 matrix [[0, .5], [.5, 1]]
  OperatorExpr expr = parse_operator("b0^ b0 + 0.5 b0 + 0.5 b0^");
  ModeSpec modes = infer_modes(expr, 1);
  BlockEncoding be = encode_hamiltonian(expr, {modes, false});
  const double lambda = be.lambda;

  // eigen-decomposition of [[0, .5], [.5, 1]]
  const double tr = 1.0, det = -0.25;
  const double disc = std::sqrt(tr * tr / 4 - det);
  for (double eig : {tr / 2 + disc, tr / 2 - disc}) {
    // eigenvector (v0, v1): (H - eig I) v = 0 -> v = (0.5, eig) normalized
    double v0 = 0.5, v1 = eig;
    const double n = std::sqrt(v0 * v0 + v1 * v1);
    v0 /= n;
    v1 /= n;
    const int shift = be.circuit.layout.system_offset();
    std::vector<cplx> state(std::size_t{1} << be.circuit.total_qubits(), cplx{});
    state[std::size_t{0} << shift] = v0;
    state[std::size_t{1} << shift] = v1;
    apply_circuit(be.circuit, state, ElbowMode::unitary);
    const double k = eig / lambda;
    // amplitude on the encoded subspace should be k * eigenvector
    cplx a0 = state[std::size_t{0} << shift];
    cplx a1 = state[std::size_t{1} << shift];
    CHECK(std::abs(a0 - k * v0) < 1e-9);
    CHECK(std::abs(a1 - k * v1) < 1e-9);
    double outside = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (i == (std::size_t{0} << shift) || i == (std::size_t{1} << shift)) continue;
      outside += std::norm(state[i]);
    }
    CHECK(std::sqrt(outside) == doctest::Approx(std::sqrt(1 - k * k)).epsilon(1e-9));
  }
}

TEST_CASE("lambda_audit: equality on uniform vectors, inequality otherwise") {
  LambdaAudit eq = lambda_audit({0.4, 0.4, 0.4});
  CHECK(eq.asp == doctest::Approx(eq.usp));
  CHECK(eq.ok);

  LambdaAudit lt = lambda_audit({3.0, 1.0});
  CHECK(lt.asp == doctest::Approx(4.0));
  CHECK(lt.usp == doctest::Approx(6.0));
  CHECK(lt.ok);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + rng() % 64);
    for (auto& x : v) x = dist(rng);
    CHECK(lambda_audit(v).ok);
  }
  CHECK_THROWS_AS(lambda_audit({}), std::invalid_argument);
}

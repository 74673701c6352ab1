#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lobe/lobe_synth.hpp"
#include "lobe/pauli.hpp"
#include "lobe/simulate.hpp"
#include "lobe/verify.hpp"

using namespace lobe;

namespace {

BlockEncoding encode_expr(const std::string& text, int omega,
                          bool controlled = true) {
  OperatorExpr expr = parse_operator(text);
  LobeConfig cfg{infer_modes(expr, omega), controlled};
  return encode_hamiltonian(expr, cfg);
}

VerificationReport check_expr(const std::string& text, int omega,
                              bool controlled = true, double tol = 1e-10) {
  OperatorExpr expr = parse_operator(text);
  ModeSpec modes = infer_modes(expr, omega);
  LobeConfig cfg{modes, controlled};
  BlockEncoding be = encode_hamiltonian(expr, cfg);
  return verify_encoding(be, expr, modes, tol);
}

}  // namespace

TEST_CASE("classify: the dispatch examples") {
  auto shape_of = [](const std::string& s) {
    return classify(parse_operator(s).groups.at(0));
  };
  TermShape num = shape_of("b0^ b0");
  CHECK(num.cls == TermClass::fermionic_product);
  CHECK(num.active_modes == 1);
  CHECK(num.non_number_modes == 0);

  TermShape hc = shape_of("b0 b1 + h.c.");
  CHECK(hc.cls == TermClass::fermionic_lc_hc);
  CHECK(hc.active_modes == 2);
  CHECK(hc.non_number_modes == 2);

  TermShape mixed = shape_of("b0^ a1^ + h.c.");
  CHECK(mixed.cls == TermClass::mixed_term);

  TermShape single = shape_of("b0^");
  CHECK(single.cls == TermClass::fermionic_single);

  TermShape bos = shape_of("a0^ a0^ a0");
  CHECK(bos.cls == TermClass::bosonic_product_single_mode);
  CHECK(bos.exponent_sum == 3);

  TermShape bhc = shape_of("a0 a1 + h.c.");
  CHECK(bhc.cls == TermClass::bosonic_lc_hc);
  CHECK(bhc.exponent_sum == 2);
}

TEST_CASE("lobe_angles: the cited case analysis") {
  // creation, post-increment value 2, omega 3
  CHECK(lobe_angles(2, 1, 0, 3, 2) ==
        doctest::Approx(2.0 * std::acos(std::sqrt(2.0 / 3.0))).epsilon(1e-14));
  // annihilation with pre < S wraps to an invalid branch: pi
  CHECK(lobe_angles(3, 0, 1, 3, 2) == doctest::Approx(std::numbers::pi));
  // creation from the cutoff: pi
  CHECK(lobe_angles(0, 1, 0, 3, 2) == doctest::Approx(std::numbers::pi));
  // number pattern at value 2: amplitude 2/omega
  CHECK(lobe_angles(2, 1, 1, 3, 2) ==
        doctest::Approx(2.0 * std::acos(2.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("cz_sign_required follows (C choose 2) parity") {
  CHECK_FALSE(cz_sign_required(0));
  CHECK_FALSE(cz_sign_required(1));
  CHECK(cz_sign_required(2));
  CHECK(cz_sign_required(3));
  CHECK_FALSE(cz_sign_required(4));
  CHECK_FALSE(cz_sign_required(5));
  CHECK(cz_sign_required(6));
}

TEST_CASE("fermionic single op: 4 T, one BE ancilla, lambda 1") {
  for (const char* text : {"b0^", "b0", "b1^"}) {
    BlockEncoding be = encode_expr(text, 1);
    ResourceReport r = be.report();
    CHECK(r.t_count == 4);
    CHECK(r.be_ancillae == 1);
    CHECK(r.lambda == doctest::Approx(1.0));
    CHECK(r.clean_ancillae_peak == 1);
    CHECK(r.rotation_count == 0);
  }
}

TEST_CASE("fermionic single ops verify against the oracle") {
  CHECK(check_expr("b0^", 1).passed);
  CHECK(check_expr("b0", 1).passed);
  CHECK(check_expr("b1^", 1).passed);  // parity string on mode 0
  CHECK(check_expr("b2", 1).passed);
}

TEST_CASE("fermionic products: T = 4B exactly, B in 1..6") {
  for (int B = 1; B <= 6; ++B) {
    std::string text;
    for (int m = 0; m < B; ++m) {
      if (m) text += " ";
      text += (m % 2 ? "b" : "b") + std::to_string(m) + (m % 3 == 1 ? "" : "^");
    }
    BlockEncoding be = encode_expr(text, 1);
    ResourceReport r = be.report();
    CHECK(r.t_count == 4 * B);
    CHECK(r.be_ancillae == 1);
    CHECK(r.clean_ancillae_peak == B);
    TermShape shape = classify(parse_operator(text).groups.at(0));
    LobeCostFormula f = lobe_cost_formula(shape, 1);
    CHECK(f.t_count == r.t_count);
    if (B <= 4) CHECK(check_expr(text, 1).passed);
  }
}

TEST_CASE("number operators and products verify") {
  CHECK(check_expr("b0^ b0", 1).passed);
  CHECK(check_expr("b0^ b0 b1^ b1", 1).passed);
  CHECK(check_expr("b0^ b1", 1).passed);
  CHECK(check_expr("b0^ b0 b1", 1).passed);
  CHECK(check_expr("b0 b1^ b2^ b2", 1).passed);
}

TEST_CASE("fermionic LC+h.c.: T = 4(B-1) exactly, B in 2..8") {
  for (int B = 2; B <= 8; ++B) {
    std::string text;
    for (int m = 0; m < B; ++m) {
      if (m) text += " ";
      text += "b" + std::to_string(m);
    }
    text += " + h.c.";
    BlockEncoding be = encode_expr(text, 1);
    ResourceReport r = be.report();
    CHECK(r.t_count == 4 * (B - 1));
    CHECK(r.be_ancillae == 1);
    CHECK(r.clean_ancillae_peak == B - 1);
    if (B <= 4) CHECK(check_expr(text, 1).passed);
  }
}

TEST_CASE("b + b† uses no T gates and no ancillae") {
  BlockEncoding be = encode_expr("b0 + h.c.", 1);
  ResourceReport r = be.report();
  CHECK(r.t_count == 0);
  CHECK(r.rotation_count == 0);
  CHECK(r.be_ancillae == 0);
  CHECK(check_expr("b0 + h.c.", 1).passed);
}

TEST_CASE("LC+h.c. variants with mixed daggers and number ops verify") {
  CHECK(check_expr("b0 b1^ + h.c.", 1).passed);
  CHECK(check_expr("b0^ b1^ + h.c.", 1).passed);
  CHECK(check_expr("b0 b1 b2 + h.c.", 1).passed);
  CHECK(check_expr("b0 b1^ b2 + h.c.", 1).passed);
  CHECK(check_expr("b0 b1^ b2^ b2 + h.c.", 1).passed);   // number mode inside
  CHECK(check_expr("b0^ b1^ b1 b2 + h.c.", 1).passed);
  CHECK(check_expr("2.5 b0 b1 + h.c.", 1).passed);
  CHECK(check_expr("b0 b1 + h.c. - b0^ b0", 1).passed);
}

TEST_CASE("bosonic single ops: lambda sqrt(omega), costs within 7W bound") {
  for (int omega : {1, 3, 7, 15}) {
    const int w = bosonic_register_width(omega);
    for (const char* text : {"a0", "a0^"}) {
      BlockEncoding be = encode_expr(text, omega);
      ResourceReport r = be.report();
      CHECK(r.lambda == doctest::Approx(std::sqrt(double(omega))));
      CHECK(r.t_count <= 7 * w);
      CHECK(r.rotation_count <= omega + 3);
      CHECK(r.be_ancillae == 1);
      if (omega <= 7) CHECK(check_expr(text, omega).passed);
    }
  }
}

TEST_CASE("bosonic products on one mode: lambda = omega^((R+S)/2)") {
  BlockEncoding be = encode_expr("a0^ a0^ a0", 3);
  CHECK(be.lambda == doctest::Approx(std::pow(3.0, 1.5)));
  CHECK(check_expr("a0^ a0^ a0", 3).passed);
  CHECK(check_expr("a0^ a0", 3).passed);
  CHECK(check_expr("a0^ a0^ a0 a0", 3).passed);
  CHECK(check_expr("a0 a0", 3).passed);
  // different modes: product construction with separate BE ancillae
  BlockEncoding two = encode_expr("a0 a1", 3);
  CHECK(two.lambda == doctest::Approx(3.0));
  CHECK(two.report().be_ancillae == 2);
  CHECK(check_expr("a0 a1", 3).passed);
}

TEST_CASE("bosonic LC+h.c.: lambda 2 omega^(P/2), T within 12BW-8B+4") {
  for (int omega : {1, 3}) {
    const int w = bosonic_register_width(omega);
    BlockEncoding be = encode_expr("a0 + h.c.", omega);
    ResourceReport r = be.report();
    CHECK(r.lambda == doctest::Approx(2.0 * std::sqrt(double(omega))));
    CHECK(r.t_count <= 12 * w - 8 + 4);
    CHECK(r.rotation_count <= omega + 3);
    CHECK(r.be_ancillae == 2);  // per-mode ancilla plus branch index
    CHECK(check_expr("a0 + h.c.", omega).passed);
  }
  // two modes, omega 3: lambda = 2*omega^(P/2) = 2*3 = 6, T <= 12*2*W-8*2+4
  BlockEncoding be = encode_expr("a0 a1 + h.c.", 3);
  ResourceReport r = be.report();
  CHECK(r.lambda == doctest::Approx(6.0));
  CHECK(r.t_count <= 12 * 2 * 2 - 8 * 2 + 4);
  CHECK(r.rotation_count <= 2 * (3 + 3));
  CHECK(r.be_ancillae == 3);
  CHECK(check_expr("a0 a1 + h.c.", 3).passed);
  CHECK(check_expr("a0^ a0^ + h.c.", 3).passed);
  CHECK(check_expr("a0^ a0 a1 + h.c.", 3).passed);
}

TEST_CASE("mixed terms follow the three standard shapes") {
  const int omega = 3;
  const int w = bosonic_register_width(omega);
  {
    BlockEncoding be = encode_expr("b0^ a1^ + h.c.", omega);
    ResourceReport r = be.report();
    CHECK(r.lambda == doctest::Approx(std::sqrt(3.0)));
    CHECK(r.be_ancillae == 1);
    CHECK(r.t_count <= 12 * w - 4);
    CHECK(r.rotation_count <= omega + 3);
    CHECK(check_expr("b0^ a1^ + h.c.", omega).passed);
  }
  {
    BlockEncoding be = encode_expr("b0^ b1^ a2 + h.c.", omega);
    ResourceReport r = be.report();
    CHECK(r.lambda == doctest::Approx(std::sqrt(3.0)));
    CHECK(r.be_ancillae == 2);
    CHECK(r.t_count <= 12 * w);
    CHECK(check_expr("b0^ b1^ a2 + h.c.", omega).passed);
  }
  {
    BlockEncoding be = encode_expr("b0^ b1^ a2 a3 + h.c.", omega);
    ResourceReport r = be.report();
    CHECK(r.lambda == doctest::Approx(3.0));
    CHECK(r.be_ancillae == 3);
    CHECK(r.t_count <= 24 * w - 8);
    CHECK(r.rotation_count <= 2 * omega + 6);
    CHECK(check_expr("b0^ b1^ a2 a3 + h.c.", omega).passed);
  }
}

TEST_CASE("mixed plain terms and number-conditioned interactions verify") {
  CHECK(check_expr("b0^ b0 a0 + h.c.", 3).passed);  // static Yukawa interaction
  CHECK(check_expr("b0^ b0 a0^ a0", 3).passed);
  CHECK(check_expr("b0 a0^", 3).passed);
  CHECK(check_expr("b0^ b1 a0^ a0 + h.c.", 3).passed);
}

TEST_CASE("uncontrolled variants give the same block") {
  for (const char* text : {"b0 b1 + h.c.", "a0 + h.c.", "b0^ a0 + h.c.",
                           "a0^ a0^ a0", "b0^ b1"}) {
    const int omega = 3;
    OperatorExpr expr = parse_operator(text);
    ModeSpec modes = infer_modes(expr, omega);
    BlockEncoding ctrl = encode_hamiltonian(expr, {modes, true});
    BlockEncoding&& plain = encode_hamiltonian(expr, {modes, false});
    CHECK(verify_encoding(plain, expr, modes).passed);
    CHECK(ctrl.lambda == doctest::Approx(plain.lambda));
    REQUIRE(verify_encoding(ctrl, expr, modes).passed);
  }
}

TEST_CASE("controlled encodings act as the identity when the control is off") {
  for (const char* text : {"b0 b1 + h.c.", "a0 + h.c.", "b0^ b0 a0 + h.c."}) {
    BlockEncoding be = encode_expr(text, 3);
    const int shift = be.circuit.layout.system_offset();
    std::mt19937 rng(7);
    for (int trial = 0; trial < 4; ++trial) {
      const std::size_t col =
          std::size_t(rng()) % (std::size_t{1} << be.circuit.layout.n_system);
      auto out = simulate(be.circuit, col << shift);
      for (std::size_t i = 0; i < out.size(); ++i) {
        const cplx want = i == (col << shift) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
        REQUIRE(std::abs(out[i] - want) < 1e-12);
      }
    }
  }
}

TEST_CASE("encode_hamiltonian: single group matches encode_group") {
  OperatorExpr expr = parse_operator("b0 b1 + h.c.");
  LobeConfig cfg{infer_modes(expr, 1), true};
  BlockEncoding a = encode_group(expr.groups[0], cfg);
  BlockEncoding b = encode_hamiltonian(expr, cfg);
  CHECK(a.lambda == b.lambda);
  CHECK(a.circuit.gates.size() == b.circuit.gates.size());
}

TEST_CASE("encode_hamiltonian: number-operator sum with correct lambda") {
  OperatorExpr expr = parse_operator("b0^ b0 + a0^ a0");
  ModeSpec modes = infer_modes(expr, 3);
  BlockEncoding be = encode_hamiltonian(expr, {modes, true});
  // lambda = 1 (number op) + omega (bosonic a†a)
  CHECK(be.lambda == doctest::Approx(1.0 + 3.0));
  CHECK(verify_encoding(be, expr, modes).passed);
}

TEST_CASE("non-conjugate fermionic pair uses the shared construction") {
  OperatorExpr expr = parse_operator("b0 b1 b2^ + b1^ b0^ b2^");
  ModeSpec modes = infer_modes(expr, 1);
  BlockEncoding be = encode_hamiltonian(expr, {modes, true});
  CHECK(be.lambda == doctest::Approx(1.0));  // single shared block
  ResourceReport r = be.report();
  CHECK(r.t_count == 8);
  CHECK(r.be_ancillae == 1);
  CHECK(verify_encoding(be, expr, modes).passed);
}

TEST_CASE("partially flipped pairs still share one construction") {
  // (b0 + b0†) b1 has a one-mode flip set and a shared literal on mode 1
  OperatorExpr expr = parse_operator("b0 b1 + b0^ b1");
  ModeSpec modes = infer_modes(expr, 1);
  BlockEncoding be = encode_hamiltonian(expr, {modes, true});
  CHECK(be.lambda == doctest::Approx(1.0));
  CHECK(verify_encoding(be, expr, modes).passed);
}

TEST_CASE("pairs with different active modes fall back to LCO") {
  OperatorExpr expr = parse_operator("b0 b1 + b0^ b2");
  ModeSpec modes = infer_modes(expr, 1);
  BlockEncoding be = encode_hamiltonian(expr, {modes, true});
  CHECK(be.lambda == doctest::Approx(2.0));
  CHECK(verify_encoding(be, expr, modes).passed);
}

TEST_CASE("negative and imaginary coefficients") {
  CHECK(check_expr("- b0^ b1 + h.c.", 1).passed);
  CHECK(check_expr("(0+2j) b0 b1 + h.c.", 1).passed);
  CHECK(check_expr("- a0 + h.c.", 3).passed);
  CHECK(check_expr("(0+1j) b0^ b1", 1).passed);
}

TEST_CASE("randomized block fidelity across classes") {
  std::mt19937 rng(97);
  int done = 0;
  while (done < 24) {
    const int omega = (rng() % 2) ? 3 : 1;
    std::string text;
    const int pick = int(rng() % 6);
    switch (pick) {
      case 0: text = "b0 b2 + h.c."; break;
      case 1: text = "a0 a0 + h.c."; break;
      case 2: text = "b1^ a0 + h.c."; break;
      case 3: text = "b0^ b1 a0^ + h.c."; break;
      case 4: text = "a0^ a0 a1 + h.c."; break;
      default: text = "b0 b1^ b2 b3 + h.c."; break;
    }
    CHECK(check_expr(text, omega).passed);
    ++done;
  }
}

TEST_CASE("measured and unitary elbow modes give the same encoded block") {
  for (const char* text : {"a0", "b0^ b1", "a0 + h.c."}) {
    OperatorExpr expr = parse_operator(text);
    ModeSpec modes = infer_modes(expr, 3);
    BlockEncoding be = encode_hamiltonian(expr, {modes, true});
    Matrix mu = extract_block(be, ElbowMode::unitary);
    Matrix mm = extract_block(be, ElbowMode::measured);
    CHECK(Matrix::max_abs_diff(mu, mm) < 1e-10);
  }
}

TEST_CASE("clean ancillae end in |0> from every basis input") {
  BlockEncoding be = encode_expr("b0^ b1 a0 + h.c.", 1);
  const auto& l = be.circuit.layout;
  std::size_t clean_mask = 0;
  for (int i = 0; i < l.n_clean; ++i)
    clean_mask |= std::size_t{1} << (l.clean_offset() + i);
  const std::size_t dim = std::size_t{1} << be.circuit.total_qubits();
  for (std::size_t input = 0; input < dim; ++input) {
    if (input & clean_mask) continue;  // clean ancillae promised |0> in
    for (auto mode : {ElbowMode::unitary, ElbowMode::measured}) {
      auto out = simulate(be.circuit, input, mode);
      double leak = 0.0;
      for (std::size_t i = 0; i < out.size(); ++i)
        if (i & clean_mask) leak += std::norm(out[i]);
      REQUIRE(leak < 1e-12);
    }
  }
}

TEST_CASE("compiled encodings are unitary to 1e-10") {
  for (const char* text : {"a0", "b0 b1 + h.c.", "b0^ b0 a0 + h.c."}) {
    OperatorExpr expr = parse_operator(text);
    ModeSpec modes = infer_modes(expr, 3);
    BlockEncoding be = encode_hamiltonian(expr, {modes, true});
    if (be.circuit.total_qubits() > 10) continue;
    Matrix u = unitary(be.circuit);
    Matrix gram = u.adjoint() * u;
    CHECK(Matrix::max_abs_diff(gram, Matrix::identity(u.rows())) < 1e-10);
  }
}

TEST_CASE("bosonic exponents past the cutoff compile to a zero block") {
  OperatorExpr expr = parse_operator("a0^ a0^");
  ModeSpec modes = infer_modes(expr, 1);
  BlockEncoding be = encode_hamiltonian(expr, {modes, true});
  Matrix block = extract_block(be);
  CHECK(block.max_abs() < 1e-12);
  CHECK(verify_encoding(be, expr, modes).passed);
}

TEST_CASE("CZ sign rule agrees with the oracle through C = 6") {
  // annihilation chains b0...b_{C-1} + h.c.; block equality pins the sign
  for (int c_modes = 2; c_modes <= 6; ++c_modes) {
    std::string text;
    for (int m = 0; m < c_modes; ++m) text += "b" + std::to_string(m) + " ";
    text += "+ h.c.";
    CHECK(check_expr(text, 1).passed);
  }
  // creation-leading variant exercises the opposite branch polarity
  CHECK(check_expr("b0^ b1^ b2^ + h.c.", 1).passed);
  CHECK(check_expr("b0^ b1^ b2^ b3^ + h.c.", 1).passed);
}

TEST_CASE("fuzz: random multi-group Hamiltonians verify against the oracle") {
  std::mt19937 rng(0xC0FFEE);
  auto random_coeff = [&]() -> cplx {
    const double mag = 0.25 + double(rng() % 8) / 4.0;
    switch (rng() % 4) {
      case 0: return {mag, 0.0};
      case 1: return {-mag, 0.0};
      case 2: return {0.0, mag};
      default: return {0.0, -mag};
    }
  };
  int done = 0;
  int guard = 0;
  while (done < 30 && guard < 300) {
    ++guard;
    const int omega = (rng() % 2) ? 3 : 1;
    const int nf = int(rng() % 3);       // up to 2 fermionic modes
    const int nb = nf == 0 ? 1 + int(rng() % 2) : int(rng() % 2);
    OperatorExpr expr;
    const int n_groups = 1 + int(rng() % 3);
    for (int g = 0; g < n_groups; ++g) {
      Term t{random_coeff(), {}};
      for (int m = 0; m < nf; ++m) {
        switch (rng() % 4) {
          case 0: t.factors.push_back({Species::fermion, m, true}); break;
          case 1: t.factors.push_back({Species::fermion, m, false}); break;
          case 2:
            t.factors.push_back({Species::fermion, m, true});
            t.factors.push_back({Species::fermion, m, false});
            break;
          default: break;
        }
      }
      for (int m = 0; m < nb; ++m) {
        const int r = int(rng() % 2), s = int(rng() % 2);
        for (int k = 0; k < r; ++k) t.factors.push_back({Species::boson, m, true});
        for (int k = 0; k < s; ++k) t.factors.push_back({Species::boson, m, false});
      }
      if (t.factors.empty()) {
        if (nb > 0)
          t.factors.push_back({Species::boson, 0, false});
        else
          t.factors.push_back({Species::fermion, 0, rng() % 2 == 0});
      }
      bool hc = rng() % 2;
      if (hc) t.coefficient = cplx{std::abs(t.coefficient), 0.0} *
                              ((rng() % 2) ? 1.0 : -1.0);
      expr.groups.push_back({std::move(t), hc});
    }
    OperatorExpr norm = normalize(expr);
    if (norm.groups.empty()) continue;
    ModeSpec modes = infer_modes(norm, omega);
    if (modes.n_fermionic == 0 && modes.n_bosonic == 0) continue;
    LobeConfig cfg{modes, true};
    BlockEncoding be;
    try {
      be = encode_hamiltonian(expr, cfg);
    } catch (const std::invalid_argument&) {
      continue;
    }
    if (be.circuit.total_qubits() > 13) continue;
    VerificationReport rep = verify_encoding(be, expr, modes, 1e-10);
    if (!rep.passed)
      MESSAGE("failing operator: ", to_string(normalize(expr)));
    REQUIRE(rep.passed);
    ++done;
  }
  CHECK(done == 30);
}

TEST_CASE("fuzz: paired plain groups with i-phase coefficients") {
  // c1 T + c2 T' where T' flips a subset of modes; exercises the relative
  // i phase path of the shared two-branch construction
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 10; ++trial) {
    const double mag = 0.5 + double(rng() % 4) / 4.0;
    const int k1 = int(rng() % 4);
    const int k2 = int(rng() % 4);
    auto phase = [](int k) {
      const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      return table[k];
    };
    OperatorExpr expr;
    Term t1{mag * phase(k1),
            {{Species::fermion, 0, false}, {Species::fermion, 1, false}}};
    Term t2{mag * phase(k2),
            {{Species::fermion, 0, true}, {Species::fermion, 1, false}}};
    expr.groups.push_back({t1, false});
    expr.groups.push_back({t2, false});
    ModeSpec modes{2, 0, 1};
    BlockEncoding be = encode_hamiltonian(expr, {modes, true});
    CHECK(be.lambda == doctest::Approx(mag));  // one shared block
    VerificationReport rep = verify_encoding(be, expr, modes, 1e-10);
    REQUIRE(rep.passed);
  }
}

#include "lobe/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "lobe/pauli.hpp"
#include "lobe/simulate.hpp"

namespace lobe {

namespace {

struct LayoutMasks {
  int system_offset = 0;
  std::size_t ctrl_mask = 0;
  std::size_t clean_mask = 0;
};

LayoutMasks masks_of(const RegisterLayout& l) {
  LayoutMasks m;
  m.system_offset = l.system_offset();
  if (l.n_ctrl == 1) m.ctrl_mask = 1;
  for (int i = 0; i < l.n_clean; ++i)
    m.clean_mask |= std::size_t{1} << (l.clean_offset() + i);
  return m;
}

// Fock basis index -> system register basis index (W qubits per boson).
std::size_t register_index(const FockState& s, const ModeSpec& modes) {
  const int w = bosonic_register_width(modes.omega);
  std::size_t idx = 0;
  for (int i = modes.n_bosonic - 1; i >= 0; --i) {
    idx <<= w;
    idx |= std::size_t(s.bosons[std::size_t(i)]);
  }
  idx <<= modes.n_fermionic;
  for (int i = 0; i < modes.n_fermionic; ++i)
    if (s.fermions[std::size_t(i)]) idx |= std::size_t{1} << i;
  return idx;
}

struct ColumnStats {
  double max_err = 0.0;
  double leakage = 0.0;
  double norm_dev = 0.0;
};

// Simulates one encoded column and compares against the oracle column.
ColumnStats check_column(const Circuit& circuit, const LayoutMasks& m,
                         const OperatorExpr& expr, const ModeSpec& modes,
                         double lambda, std::size_t fock_col, int qubit_cap) {
  const std::size_t sys_col = register_index(state_of_index(fock_col, modes), modes);
  const std::size_t input = (sys_col << m.system_offset) | m.ctrl_mask;
  auto out = simulate(circuit, input, ElbowMode::unitary, qubit_cap);

  auto oracle = oracle_column(expr, modes, fock_col);
  std::map<std::size_t, cplx> expected;  // system register index -> amplitude
  for (const auto& [fock_row, amp] : oracle)
    expected[register_index(state_of_index(fock_row, modes), modes)] = amp / lambda;

  ColumnStats st;
  double norm = 0.0;
  const std::size_t nsys = std::size_t{1}
                           << (circuit.total_qubits() - m.system_offset);
  for (std::size_t i = 0; i < out.size(); ++i) {
    norm += std::norm(out[i]);
    if ((i & m.clean_mask) != 0) st.leakage += std::norm(out[i]);
  }
  st.norm_dev = std::abs(std::sqrt(norm) - 1.0);
  for (std::size_t sys_row = 0; sys_row < nsys; ++sys_row) {
    const std::size_t row = (sys_row << m.system_offset) | m.ctrl_mask;
    cplx want{};
    if (auto it = expected.find(sys_row); it != expected.end()) want = it->second;
    st.max_err = std::max(st.max_err, std::abs(out[row] - want));
  }
  return st;
}

double oracle_spectral_norm(const OperatorExpr& expr, const ModeSpec& modes) {
  const std::size_t d = modes.dim();
  std::vector<std::map<std::size_t, cplx>> cols(d);
  for (std::size_t c = 0; c < d; ++c) cols[c] = oracle_column(expr, modes, c);
  std::vector<cplx> v(d), w(d), u(d);
  for (std::size_t i = 0; i < d; ++i)
    v[i] = cplx{1.0 + 1.0 / double(i + 1), 0.25 * double(i % 5)};
  double norm = 0.0;
  for (int it = 0; it < 120; ++it) {
    std::fill(w.begin(), w.end(), cplx{});
    for (std::size_t c = 0; c < d; ++c)
      for (const auto& [r, a] : cols[c]) w[r] += a * v[c];
    std::fill(u.begin(), u.end(), cplx{});
    for (std::size_t c = 0; c < d; ++c) {
      cplx acc{};
      for (const auto& [r, a] : cols[c]) acc += std::conj(a) * w[r];
      u[c] = acc;
    }
    double nu = 0.0;
    for (const auto& x : u) nu += std::norm(x);
    nu = std::sqrt(nu);
    if (nu == 0.0) return 0.0;
    for (std::size_t i = 0; i < d; ++i) v[i] = u[i] / nu;
    norm = std::sqrt(nu);
  }
  return norm;
}

}  // namespace

std::string verification_report_json(const VerificationReport& r) {
  std::ostringstream os;
  os.precision(15);
  os << "{\"max_abs_error\": " << r.max_abs_error
     << ", \"unitarity_error\": " << r.unitarity_error
     << ", \"clean_ancilla_leakage\": " << r.clean_ancilla_leakage
     << ", \"lambda_used\": " << r.lambda_used
     << ", \"spectral_norm\": " << r.spectral_norm
     << ", \"tolerance\": " << r.tolerance
     << ", \"passed\": " << (r.passed ? "true" : "false")
     << ", \"row_sampled\": " << (r.row_sampled ? "true" : "false")
     << ", \"columns_checked\": " << r.columns_checked << "}";
  return os.str();
}

Matrix extract_block(const BlockEncoding& be, ElbowMode mode, int qubit_cap) {
  const Circuit& c = be.circuit;
  const LayoutMasks m = masks_of(c.layout);
  const std::size_t nsys = std::size_t{1} << c.layout.n_system;
  Matrix block(nsys, nsys);

  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t col = next.fetch_add(1);
      if (col >= nsys) return;
      const std::size_t input = (col << m.system_offset) | m.ctrl_mask;
      auto out = simulate(c, input, mode, qubit_cap);
      for (std::size_t row = 0; row < nsys; ++row)
        block(row, col) = out[(row << m.system_offset) | m.ctrl_mask];
    }
  };
  std::vector<std::future<void>> futures;
  for (unsigned wkr = 1; wkr < workers; ++wkr)
    futures.push_back(std::async(std::launch::async, work));
  work();
  for (auto& f : futures) f.get();
  return block;
}

VerificationReport verify_encoding(const BlockEncoding& be, const OperatorExpr& expr,
                                   const ModeSpec& modes, double tol,
                                   int full_extraction_limit,
                                   std::optional<unsigned> sample_seed,
                                   int qubit_cap) {
  VerificationReport rep;
  rep.tolerance = tol;
  rep.lambda_used = be.lambda;
  if (be.circuit.layout.n_system != system_qubit_count(modes))
    throw std::invalid_argument("mode spec does not match encoding layout");

  const LayoutMasks m = masks_of(be.circuit.layout);
  const std::size_t fock_dim = modes.dim();
  std::vector<std::size_t> columns;
  if (be.circuit.total_qubits() <= full_extraction_limit) {
    columns.resize(fock_dim);
    for (std::size_t i = 0; i < fock_dim; ++i) columns[i] = i;
  } else {
    rep.row_sampled = true;
    std::mt19937 rng(sample_seed.value_or(1234u));
    const std::size_t n_samples = std::min<std::size_t>(24, fock_dim);
    for (std::size_t i = 0; i < n_samples; ++i)
      columns.push_back(std::size_t(rng() % fock_dim));
  }
  rep.columns_checked = int(columns.size());

  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::vector<ColumnStats> stats(columns.size());
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= columns.size()) return;
      stats[i] =
          check_column(be.circuit, m, expr, modes, be.lambda, columns[i], qubit_cap);
    }
  };
  std::vector<std::future<void>> futures;
  for (unsigned wkr = 1; wkr < workers; ++wkr)
    futures.push_back(std::async(std::launch::async, work));
  work();
  for (auto& f : futures) f.get();

  for (const auto& st : stats) {
    rep.max_abs_error = std::max(rep.max_abs_error, st.max_err);
    rep.clean_ancilla_leakage = std::max(rep.clean_ancilla_leakage, st.leakage);
    rep.unitarity_error = std::max(rep.unitarity_error, st.norm_dev);
  }

  if (fock_dim <= (std::size_t{1} << 13)) {
    rep.spectral_norm = oracle_spectral_norm(expr, modes);
    if (be.lambda < rep.spectral_norm - tol) {
      rep.passed = false;
      return rep;
    }
  }
  rep.passed = rep.max_abs_error <= tol && rep.clean_ancilla_leakage <= tol;
  return rep;
}

LambdaAudit lambda_audit(const std::vector<double>& coefficients) {
  if (coefficients.empty()) throw std::invalid_argument("empty coefficient list");
  LambdaAudit a;
  double mx = 0.0;
  for (double c : coefficients) {
    a.asp += std::abs(c);
    mx = std::max(mx, std::abs(c));
  }
  a.usp = double(coefficients.size()) * mx;
  a.ok = a.asp <= a.usp + 1e-12;
  return a;
}

}  // namespace lobe

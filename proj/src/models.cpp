#include "lobe/models.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lobe {

namespace {

LadderOp bf(int mode, bool dag) { return {Species::fermion, mode, dag}; }
LadderOp df(int mode, bool dag) { return {Species::antifermion, mode, dag}; }
LadderOp ab(int mode, bool dag) { return {Species::boson, mode, dag}; }

Term term(cplx coeff, std::vector<LadderOp> factors) {
  return Term{coeff, std::move(factors)};
}

// momentum carried by mode index i (momenta are 1-based)
int momentum(int i) { return i + 1; }

}  // namespace

CoefficientTable load_coefficients(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open coefficient file: " + path);
  CoefficientTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty coefficient file");
  // header: i,j,k,l,re,im
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::array<int, 4> key{};
    double re = 0, im = 0;
    char comma;
    for (int c = 0; c < 4; ++c) {
      if (!(ss >> key[std::size_t(c)] >> comma))
        throw std::runtime_error("malformed coefficient row at line " +
                                 std::to_string(lineno));
    }
    if (!(ss >> re))
      throw std::runtime_error("malformed coefficient row at line " +
                               std::to_string(lineno));
    if (ss >> comma) ss >> im;
    table.values[key] = cplx{re, im};
  }
  return table;
}

OperatorExpr quartic_oscillator(double g) {
  if (g == 0.0) {
    OperatorExpr free;
    free.groups.push_back({term(1.0, {ab(0, true), ab(0, false)}), false});
    return free;
  }
  // a†a + g(a + a†)^4 in normal-ordered form; the constant is 3g, pinned by
  // the reorder-based expansion test.
  OperatorExpr expr;
  expr.groups.push_back({term(12.0 * g + 1.0, {ab(0, true), ab(0, false)}), false});
  expr.groups.push_back(
      {term(6.0 * g, {ab(0, true), ab(0, true), ab(0, false), ab(0, false)}),
       false});
  expr.groups.push_back({term(6.0 * g, {ab(0, true), ab(0, true)}), true});
  expr.groups.push_back(
      {term(4.0 * g, {ab(0, true), ab(0, true), ab(0, true), ab(0, false)}), true});
  expr.groups.push_back(
      {term(1.0 * g, {ab(0, true), ab(0, true), ab(0, true), ab(0, true)}), true});
  expr.groups.push_back({term(3.0 * g, {}), false});
  return normalize(expr);
}

OperatorExpr static_yukawa(double c_f, double c_b, double g) {
  OperatorExpr expr;
  expr.groups.push_back({term(c_f, {bf(0, true), bf(0, false)}), false});
  expr.groups.push_back({term(c_b, {ab(0, true), ab(0, false)}), false});
  expr.groups.push_back({term(g, {bf(0, true), bf(0, false), ab(0, false)}), true});
  return normalize(expr);
}

OperatorExpr phi4_terms(int resolution, const CoefficientTable& coeffs) {
  if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
  const int K = resolution;
  OperatorExpr expr;
  for (int i = 0; i < K; ++i) {
    cplx c = coeffs.get({i, -1, -1, -1});
    if (std::abs(c) > 0.0)
      expr.groups.push_back({term(c, {ab(i, true), ab(i, false)}), false});
  }
  // c_{ijkl} (a_i† a_j† a_k† a_l + h.c.): momenta i + j + k = l
  for (int i = 0; i < K; ++i)
    for (int j = i; j < K; ++j)
      for (int k = j; k < K; ++k)
        for (int l = 0; l < K; ++l) {
          if (momentum(i) + momentum(j) + momentum(k) != momentum(l)) continue;
          cplx c = coeffs.get({i, j, k, l});
          if (std::abs(c) == 0.0) continue;
          expr.groups.push_back(
              {term(c, {ab(i, true), ab(j, true), ab(k, true), ab(l, false)}),
               true});
        }
  // c~_{ijkl} a_i† a_j† a_k a_l: momenta i + j = k + l; the sum is Hermitian,
  // so off-diagonal tuples pair up as canonical groups with h.c.
  for (int i = 0; i < K; ++i)
    for (int j = i; j < K; ++j)
      for (int k = 0; k < K; ++k)
        for (int l = k; l < K; ++l) {
          if (momentum(i) + momentum(j) != momentum(k) + momentum(l)) continue;
          const bool diagonal = i == k && j == l;
          if (!diagonal && std::make_pair(i, j) > std::make_pair(k, l)) continue;
          cplx c = coeffs.get({i, j, k, l});
          if (std::abs(c) == 0.0) continue;
          expr.groups.push_back(
              {term(c, {ab(i, true), ab(j, true), ab(k, false), ab(l, false)}),
               !diagonal});
        }
  return normalize(expr);
}

OperatorExpr yukawa_terms(int resolution, const CoefficientTable& coeffs) {
  if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
  const int K = resolution;
  OperatorExpr expr;
  auto add = [&](cplx c, std::vector<LadderOp> f, bool hc) {
    if (std::abs(c) > 0.0) expr.groups.push_back({term(c, std::move(f)), hc});
  };
  for (int i = 0; i < K; ++i) {
    add(coeffs.get({i, -1, -1, -1}), {bf(i, true), bf(i, false)}, false);
    add(coeffs.get({i, -1, -1, -1}), {df(i, true), df(i, false)}, false);
    add(coeffs.get({i, -1, -1, -1}), {ab(i, true), ab(i, false)}, false);
  }
  // b_i† b_j a_k† + h.c. and d_i† d_j a_k† + h.c.: momenta i + k = j
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      for (int k = 0; k < K; ++k) {
        if (momentum(i) + momentum(k) != momentum(j)) continue;
        add(coeffs.get({i, j, k, -1}), {bf(i, true), bf(j, false), ab(k, true)},
            true);
        add(coeffs.get({i, j, k, -1}), {df(i, true), df(j, false), ab(k, true)},
            true);
      }
  // b_i† d_j† a_k + h.c.: momenta i + j = k
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      for (int k = 0; k < K; ++k) {
        if (momentum(i) + momentum(j) != momentum(k)) continue;
        add(coeffs.get({i, j, k, -1}), {bf(i, true), df(j, true), ab(k, false)},
            true);
      }
  // b_i† b_j a_k† a_l and d_i† d_j a_k† a_l: momenta i + k = j + l
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l) {
          if (momentum(i) + momentum(k) != momentum(j) + momentum(l)) continue;
          const bool diagonal = i == j && k == l;
          if (!diagonal && std::make_pair(i, k) > std::make_pair(j, l)) continue;
          add(coeffs.get({i, j, k, l}),
              {bf(i, true), bf(j, false), ab(k, true), ab(l, false)}, !diagonal);
          add(coeffs.get({i, j, k, l}),
              {df(i, true), df(j, false), ab(k, true), ab(l, false)}, !diagonal);
        }
  // b_i† d_j† a_k a_l + h.c.: momenta i + j = k + l
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      for (int k = 0; k < K; ++k)
        for (int l = k; l < K; ++l) {
          if (momentum(i) + momentum(j) != momentum(k) + momentum(l)) continue;
          add(coeffs.get({i, j, k, l}),
              {bf(i, true), df(j, true), ab(k, false), ab(l, false)}, true);
        }
  return normalize(expr);
}

}  // namespace lobe

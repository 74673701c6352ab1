#include "lobe/pauli.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lobe {

namespace {

constexpr double kDropTol = 1e-12;

// Single-letter product table: returns (phase, letter) for a*b.
std::pair<cplx, PauliLetter> letter_product(PauliLetter a, PauliLetter b) {
  using L = PauliLetter;
  if (a == L::I) return {1.0, b};
  if (b == L::I) return {1.0, a};
  if (a == b) return {1.0, L::I};
  const cplx i{0.0, 1.0};
  // XY=iZ, YZ=iX, ZX=iY; reversed order conjugates
  if (a == L::X && b == L::Y) return {i, L::Z};
  if (a == L::Y && b == L::X) return {-i, L::Z};
  if (a == L::Y && b == L::Z) return {i, L::X};
  if (a == L::Z && b == L::Y) return {-i, L::X};
  if (a == L::Z && b == L::X) return {i, L::Y};
  return {-i, L::Y};  // X*Z
}

Matrix letter_matrix(PauliLetter l) {
  Matrix m(2, 2);
  switch (l) {
    case PauliLetter::I: m(0, 0) = m(1, 1) = 1.0; break;
    case PauliLetter::X: m(0, 1) = m(1, 0) = 1.0; break;
    case PauliLetter::Y:
      m(0, 1) = cplx{0.0, -1.0};
      m(1, 0) = cplx{0.0, 1.0};
      break;
    case PauliLetter::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

char letter_char(PauliLetter l) {
  switch (l) {
    case PauliLetter::I: return 'I';
    case PauliLetter::X: return 'X';
    case PauliLetter::Y: return 'Y';
    case PauliLetter::Z: return 'Z';
  }
  return '?';
}

PauliString identity_string(int n) {
  return PauliString{cplx{1.0, 0.0},
                     std::vector<PauliLetter>(std::size_t(n), PauliLetter::I)};
}

}  // namespace

PauliString operator*(const PauliString& a, const PauliString& b) {
  if (a.letters.size() != b.letters.size())
    throw std::invalid_argument("Pauli string width mismatch");
  PauliString out;
  out.coefficient = a.coefficient * b.coefficient;
  out.letters.resize(a.letters.size());
  for (std::size_t q = 0; q < a.letters.size(); ++q) {
    auto [phase, letter] = letter_product(a.letters[q], b.letters[q]);
    out.coefficient *= phase;
    out.letters[q] = letter;
  }
  return out;
}

void PauliSum::merge() {
  std::vector<PauliString> merged;
  for (auto& s : strings) {
    bool found = false;
    for (auto& m : merged)
      if (m.same_letters(s)) {
        m.coefficient += s.coefficient;
        found = true;
        break;
      }
    if (!found) merged.push_back(std::move(s));
  }
  std::erase_if(merged, [](const PauliString& s) {
    return std::abs(s.coefficient) <= kDropTol;
  });
  strings = std::move(merged);
}

PauliSum& PauliSum::operator+=(const PauliSum& o) {
  strings.insert(strings.end(), o.strings.begin(), o.strings.end());
  merge();
  return *this;
}

PauliSum PauliSum::operator*(const PauliSum& o) const {
  PauliSum out;
  for (const auto& a : strings)
    for (const auto& b : o.strings) out.strings.push_back(a * b);
  out.merge();
  return out;
}

PauliSum& PauliSum::operator*=(cplx s) {
  for (auto& str : strings) str.coefficient *= s;
  merge();
  return *this;
}

Matrix to_matrix(const PauliString& s) {
  Matrix m(1, 1);
  m(0, 0) = s.coefficient;
  // letters are little-endian: qubit 0 is the least-significant factor
  for (std::size_t q = 0; q < s.letters.size(); ++q) {
    const Matrix lm = letter_matrix(s.letters[q]);
    const std::size_t d = m.rows();
    Matrix out(2 * d, 2 * d);
    for (std::size_t hb = 0; hb < 2; ++hb)
      for (std::size_t hk = 0; hk < 2; ++hk) {
        const cplx f = lm(hb, hk);
        if (f == cplx{}) continue;
        for (std::size_t r = 0; r < d; ++r)
          for (std::size_t c = 0; c < d; ++c)
            out(hb * d + r, hk * d + c) += f * m(r, c);
      }
    m = std::move(out);
  }
  return m;
}

Matrix to_matrix(const PauliSum& sum) {
  if (sum.strings.empty()) return Matrix(1, 1);
  Matrix acc = to_matrix(sum.strings[0]);
  for (std::size_t i = 1; i < sum.strings.size(); ++i)
    acc = acc + to_matrix(sum.strings[i]);
  return acc;
}

std::string to_text(const PauliSum& sum) {
  std::ostringstream os;
  os.precision(15);
  for (const auto& s : sum.strings) {
    os << '(' << s.coefficient.real() << ',' << s.coefficient.imag() << ") ";
    // most-significant letter first, matching ket notation
    for (std::size_t q = s.letters.size(); q-- > 0;) os << letter_char(s.letters[q]);
    os << '\n';
  }
  return os.str();
}

int bosonic_register_width(int omega) {
  int w = 1;
  while ((1 << w) < omega + 1) ++w;
  return w;
}

int system_qubit_count(const ModeSpec& modes) {
  return modes.n_fermionic + modes.n_bosonic * bosonic_register_width(modes.omega);
}

PauliSum jordan_wigner(const LadderOp& op, const ModeSpec& modes) {
  if (op.species == Species::boson)
    throw std::invalid_argument("jordan_wigner requires a fermionic operator");
  const int n = system_qubit_count(modes);
  PauliSum out;
  PauliString x = identity_string(n);
  PauliString y = identity_string(n);
  x.letters[std::size_t(op.mode)] = PauliLetter::X;
  y.letters[std::size_t(op.mode)] = PauliLetter::Y;
  for (int j = 0; j < op.mode; ++j) {
    x.letters[std::size_t(j)] = PauliLetter::Z;
    y.letters[std::size_t(j)] = PauliLetter::Z;
  }
  x.coefficient = 0.5;
  // b = (X + iY)/2 Z..., b† = (X - iY)/2 Z...
  y.coefficient = op.dagger ? cplx{0.0, -0.5} : cplx{0.0, 0.5};
  out.strings = {x, y};
  return out;
}

PauliSum standard_binary_power(int mode, int creation_power, int annihilation_power,
                               const ModeSpec& modes) {
  const int w = bosonic_register_width(modes.omega);
  const int n = system_qubit_count(modes);
  const int base = modes.n_fermionic + mode * w;
  const std::size_t dim = std::size_t{1} << w;

  // truncated matrix of (a†)^R a^S on the W-qubit register
  Matrix target(dim, dim);
  for (int s = 0; s <= modes.omega; ++s) {
    double amp = 1.0;
    int occ = s;
    bool ok = true;
    for (int k = 0; k < annihilation_power; ++k) {
      if (occ == 0) {
        ok = false;
        break;
      }
      amp *= std::sqrt(double(occ));
      --occ;
    }
    if (!ok) continue;
    for (int k = 0; k < creation_power; ++k) {
      if (occ >= modes.omega) {
        ok = false;
        break;
      }
      amp *= std::sqrt(double(occ + 1));
      ++occ;
    }
    if (!ok) continue;
    target(std::size_t(occ), std::size_t(s)) = amp;
  }

  // decompose: coeff(P) = tr(P† M) / 2^W
  PauliSum out;
  std::vector<PauliLetter> letters(std::size_t(w), PauliLetter::I);
  const std::size_t strings = std::size_t{1} << (2 * w);
  for (std::size_t code = 0; code < strings; ++code) {
    for (int q = 0; q < w; ++q)
      letters[std::size_t(q)] = PauliLetter((code >> (2 * q)) & 3);
    PauliString local{1.0, letters};
    Matrix pm = to_matrix(local);
    cplx tr{};
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) tr += std::conj(pm(r, c)) * target(r, c);
    const cplx coeff = tr / double(dim);
    if (std::abs(coeff) <= kDropTol) continue;
    PauliString embedded = identity_string(n);
    embedded.coefficient = coeff;
    for (int q = 0; q < w; ++q)
      embedded.letters[std::size_t(base + q)] = letters[std::size_t(q)];
    out.strings.push_back(std::move(embedded));
  }
  out.merge();
  return out;
}

PauliSum standard_binary(const LadderOp& op, const ModeSpec& modes) {
  if (op.species != Species::boson)
    throw std::invalid_argument("standard_binary requires a bosonic operator");
  return standard_binary_power(op.mode, op.dagger ? 1 : 0, op.dagger ? 0 : 1, modes);
}

PauliSum expand_term(const Term& term, const ModeSpec& modes) {
  const int n = system_qubit_count(modes);
  PauliSum acc;
  PauliString id = identity_string(n);
  id.coefficient = term.coefficient;
  acc.strings = {id};
  // factors act right-to-left; operator product order matches factor order
  for (const auto& f : term.factors) {
    PauliSum factor = f.species == Species::boson ? standard_binary(f, modes)
                                                  : jordan_wigner(f, modes);
    acc = acc * factor;
  }
  return acc;
}

PauliExpansion pauli_expand(const OperatorExpr& expr, const ModeSpec& modes,
                            PauliGranularity granularity) {
  PauliExpansion out;
  out.granularity = granularity;
  if (granularity == PauliGranularity::full_term) {
    for (const auto& g : expr.groups) {
      out.full += expand_term(g.term, modes);
      if (g.with_hc) out.full += expand_term(hermitian_conjugate(g.term), modes);
    }
    return out;
  }

  auto emit = [&](const Term& t) {
    PerModeExpansion piece;
    piece.coefficient = t.coefficient;
    // group consecutive factors per (species, mode); term is mode ordered
    std::size_t i = 0;
    while (i < t.factors.size()) {
      std::size_t j = i;
      while (j < t.factors.size() && t.factors[j].species == t.factors[i].species &&
             t.factors[j].mode == t.factors[i].mode)
        ++j;
      Term sub{cplx{1.0, 0.0},
               {t.factors.begin() + long(i), t.factors.begin() + long(j)}};
      ModeFactorExpansion mf;
      mf.mode = t.factors[i].mode;
      mf.species = t.factors[i].species;
      mf.sum = expand_term(sub, modes);
      piece.factors.push_back(std::move(mf));
      i = j;
    }
    out.pieces.push_back(std::move(piece));
  };

  for (const auto& g : expr.groups) {
    emit(g.term);
    if (g.with_hc) emit(hermitian_conjugate(g.term));
  }
  return out;
}

}  // namespace lobe

#include "lobe/fock.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace lobe {

namespace {

constexpr double kMergeTol = 1e-12;
constexpr int kMaxModeIndex = 4096;

bool is_fermionic(const LadderOp& op) { return op.species == Species::fermion; }

// Canonical mode-ordered ranking: fermionic factors first (mode ascending,
// dagger before non-dagger within a mode), then bosonic factors likewise.
int species_rank(const LadderOp& op) { return op.species == Species::boson ? 1 : 0; }

bool mode_ordered_before(const LadderOp& a, const LadderOp& b) {
  if (species_rank(a) != species_rank(b)) return species_rank(a) < species_rank(b);
  if (a.mode != b.mode) return a.mode < b.mode;
  if (a.dagger != b.dagger) return a.dagger;
  return false;  // equal position
}

// Normal-ordered ranking: all creations before all annihilations; creations
// sorted fermions-then-bosons ascending, annihilations mirrored.
bool normal_ordered_before(const LadderOp& a, const LadderOp& b) {
  if (a.dagger != b.dagger) return a.dagger;
  if (a.dagger) return mode_ordered_before(a, b);
  // annihilation block mirrors the creation block
  if (species_rank(a) != species_rank(b)) return species_rank(a) > species_rank(b);
  if (a.mode != b.mode) return a.mode > b.mode;
  return false;
}

using OrderPred = bool (*)(const LadderOp&, const LadderOp&);

// Exchanges factors at i, i+1 and appends the resulting terms to `out`.
// Returns the terms generated by one adjacent swap of t.factors[i], [i+1].
void swap_adjacent(const Term& t, std::size_t i, std::vector<Term>& out) {
  const LadderOp a = t.factors[i];
  const LadderOp b = t.factors[i + 1];
  const bool both_fermionic = is_fermionic(a) && is_fermionic(b);
  const bool same_site = a.species == b.species && a.mode == b.mode;

  if (same_site && a.dagger == b.dagger && both_fermionic) return;  // b†b† = bb = 0

  Term swapped = t;
  std::swap(swapped.factors[i], swapped.factors[i + 1]);
  if (both_fermionic) swapped.coefficient = -swapped.coefficient;
  out.push_back(std::move(swapped));

  if (same_site && !a.dagger && b.dagger) {
    // a a† = a†a + 1 and b b† = 1 - b†b: contraction term with both dropped.
    Term contracted = t;
    contracted.factors.erase(contracted.factors.begin() + long(i),
                             contracted.factors.begin() + long(i) + 2);
    out.push_back(std::move(contracted));
  }
}

std::vector<Term> reorder_by(const Term& term, OrderPred before) {
  std::vector<Term> pending{term};
  std::vector<Term> done;
  while (!pending.empty()) {
    Term t = std::move(pending.back());
    pending.pop_back();
    if (std::abs(t.coefficient) <= kMergeTol) continue;
    bool rewritten = false;
    bool zero = false;
    for (std::size_t i = 0; i + 1 < t.factors.size(); ++i) {
      const LadderOp& a = t.factors[i];
      const LadderOp& b = t.factors[i + 1];
      if (is_fermionic(a) && a == b) {  // repeated fermionic factor
        zero = true;
        break;
      }
      if (before(b, a)) {
        swap_adjacent(t, i, pending);
        rewritten = true;
        break;
      }
    }
    if (!zero && !rewritten) done.push_back(std::move(t));
  }
  // merge identical factor sequences
  std::vector<Term> merged;
  for (auto& t : done) {
    bool found = false;
    for (auto& m : merged)
      if (m.same_factors(t)) {
        m.coefficient += t.coefficient;
        found = true;
        break;
      }
    if (!found) merged.push_back(std::move(t));
  }
  std::erase_if(merged, [](const Term& t) {
    return std::abs(t.coefficient) <= kMergeTol;
  });
  return merged;
}

}  // namespace

FockState state_of_index(std::size_t index, const ModeSpec& modes) {
  FockState s;
  s.fermions.resize(std::size_t(modes.n_fermionic));
  s.bosons.resize(std::size_t(modes.n_bosonic));
  for (int i = 0; i < modes.n_fermionic; ++i)
    s.fermions[std::size_t(i)] = uint8_t((index >> i) & 1u);
  index >>= modes.n_fermionic;
  const std::size_t base = std::size_t(modes.omega + 1);
  for (int i = 0; i < modes.n_bosonic; ++i) {
    s.bosons[std::size_t(i)] = int(index % base);
    index /= base;
  }
  return s;
}

std::size_t index_of_state(const FockState& state, const ModeSpec& modes) {
  std::size_t idx = 0;
  const std::size_t base = std::size_t(modes.omega + 1);
  for (int i = modes.n_bosonic - 1; i >= 0; --i)
    idx = idx * base + std::size_t(state.bosons[std::size_t(i)]);
  idx <<= modes.n_fermionic;
  for (int i = 0; i < modes.n_fermionic; ++i)
    if (state.fermions[std::size_t(i)]) idx |= std::size_t{1} << i;
  return idx;
}

Term hermitian_conjugate(const Term& term) {
  Term out;
  out.coefficient = std::conj(term.coefficient);
  out.factors.assign(term.factors.rbegin(), term.factors.rend());
  for (auto& f : out.factors) f.dagger = !f.dagger;
  return out;
}

std::optional<Applied> apply_term(const Term& term, const FockState& state,
                                  int omega) {
  Applied result{term.coefficient, state};
  for (auto it = term.factors.rbegin(); it != term.factors.rend(); ++it) {
    const LadderOp& op = *it;
    if (op.species == Species::boson) {
      if (op.mode >= int(result.state.bosons.size()))
        throw std::out_of_range("bosonic mode out of range");
      int& occ = result.state.bosons[std::size_t(op.mode)];
      if (op.dagger) {
        if (occ >= omega) return std::nullopt;
        result.amplitude *= std::sqrt(double(occ + 1));
        ++occ;
      } else {
        if (occ == 0) return std::nullopt;
        result.amplitude *= std::sqrt(double(occ));
        --occ;
      }
    } else {
      if (op.species == Species::antifermion)
        throw std::logic_error("antifermionic factor survived normalization");
      if (op.mode >= int(result.state.fermions.size()))
        throw std::out_of_range("fermionic mode out of range");
      uint8_t& occ = result.state.fermions[std::size_t(op.mode)];
      if (op.dagger ? occ == 1 : occ == 0) return std::nullopt;
      int parity = 0;
      for (int j = 0; j < op.mode; ++j) parity ^= result.state.fermions[std::size_t(j)];
      if (parity) result.amplitude = -result.amplitude;
      occ ^= 1;
    }
  }
  return result;
}

std::vector<Term> reorder(const Term& term, Ordering target) {
  return reorder_by(term, target == Ordering::mode ? &mode_ordered_before
                                                   : &normal_ordered_before);
}

std::vector<Term> mode_order(const Term& term) {
  return reorder(term, Ordering::mode);
}

Matrix to_matrix(const OperatorExpr& expr, const ModeSpec& modes,
                 std::size_t dimension_cap) {
  const std::size_t d = modes.dim();
  if (d > dimension_cap) throw std::length_error("Fock dimension exceeds cap");
  Matrix m(d, d);
  for (std::size_t col = 0; col < d; ++col)
    for (const auto& [row, amp] : oracle_column(expr, modes, col)) m(row, col) += amp;
  return m;
}

std::map<std::size_t, cplx> oracle_column(const OperatorExpr& expr,
                                          const ModeSpec& modes,
                                          std::size_t col) {
  std::map<std::size_t, cplx> out;
  const FockState in = state_of_index(col, modes);
  for (const auto& group : expr.groups) {
    if (auto r = apply_term(group.term, in, modes.omega))
      out[index_of_state(r->state, modes)] += r->amplitude;
    if (group.with_hc) {
      if (auto r = apply_term(hermitian_conjugate(group.term), in, modes.omega))
        out[index_of_state(r->state, modes)] += r->amplitude;
    }
  }
  return out;
}

namespace {

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  explicit Parser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(uint8_t(text[pos]))) ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool try_consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  bool try_consume_hc() {
    skip_ws();
    if (text.compare(pos, 4, "h.c.") == 0) {
      pos += 4;
      return true;
    }
    return false;
  }

  double parse_decimal() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
    bool digits = false;
    while (pos < text.size() && (std::isdigit(uint8_t(text[pos])) || text[pos] == '.')) {
      digits = digits || std::isdigit(uint8_t(text[pos]));
      ++pos;
    }
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
      ++pos;
      if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
      while (pos < text.size() && std::isdigit(uint8_t(text[pos]))) ++pos;
    }
    if (!digits) throw ParseError("expected number", start);
    return std::stod(text.substr(start, pos - start));
  }

  // coeff := decimal | '(' decimal ('+'|'-') decimal 'j' ')'
  std::optional<cplx> try_parse_coeff() {
    skip_ws();
    if (pos >= text.size()) return std::nullopt;
    if (text[pos] == '(') {
      ++pos;
      double re = parse_decimal();
      skip_ws();
      if (pos >= text.size() || (text[pos] != '+' && text[pos] != '-'))
        throw ParseError("expected '+' or '-' in complex coefficient", pos);
      double sign = text[pos] == '-' ? -1.0 : 1.0;
      ++pos;
      double im = sign * parse_decimal();
      skip_ws();
      if (pos >= text.size() || text[pos] != 'j')
        throw ParseError("expected 'j' in complex coefficient", pos);
      ++pos;
      skip_ws();
      if (pos >= text.size() || text[pos] != ')')
        throw ParseError("expected ')' in complex coefficient", pos);
      ++pos;
      try_consume('*');
      return cplx{re, im};
    }
    if (std::isdigit(uint8_t(text[pos])) || text[pos] == '.') {
      double re = parse_decimal();
      try_consume('*');
      return cplx{re, 0.0};
    }
    return std::nullopt;
  }

  // factor := ('b' | 'd' | 'a') INT ['^']
  std::optional<LadderOp> try_parse_factor() {
    skip_ws();
    if (pos >= text.size()) return std::nullopt;
    char c = text[pos];
    Species sp;
    if (c == 'b')
      sp = Species::fermion;
    else if (c == 'd')
      sp = Species::antifermion;
    else if (c == 'a')
      sp = Species::boson;
    else
      return std::nullopt;
    std::size_t start = pos;
    ++pos;
    if (pos >= text.size() || !std::isdigit(uint8_t(text[pos])))
      throw ParseError("expected mode index", start + 1);
    long mode = 0;
    while (pos < text.size() && std::isdigit(uint8_t(text[pos]))) {
      mode = mode * 10 + (text[pos] - '0');
      if (mode > kMaxModeIndex) throw ParseError("mode index overflow", start);
      ++pos;
    }
    bool dagger = pos < text.size() && text[pos] == '^';
    if (dagger) ++pos;
    return LadderOp{sp, int(mode), dagger};
  }

  Term parse_term() {
    Term t;
    if (auto c = try_parse_coeff()) t.coefficient = *c;
    bool any = false;
    while (auto f = try_parse_factor()) {
      t.factors.push_back(*f);
      any = true;
    }
    if (!any && t.coefficient == cplx{1.0, 0.0})
      throw ParseError("expected term", pos);
    return t;
  }
};

}  // namespace

OperatorExpr parse_operator(const std::string& text) {
  Parser p(text);
  OperatorExpr expr;
  double sign = 1.0;
  if (p.try_consume('-')) sign = -1.0;
  while (true) {
    Term t = p.parse_term();
    t.coefficient *= sign;
    bool hc = false;
    std::size_t save = p.pos;
    if (p.try_consume('+')) {
      if (p.try_consume_hc())
        hc = true;
      else
        p.pos = save;
    }
    expr.groups.push_back(TermGroup{std::move(t), hc});
    if (p.eof()) break;
    if (p.try_consume('+'))
      sign = 1.0;
    else if (p.try_consume('-'))
      sign = -1.0;
    else
      throw ParseError("expected '+' or '-'", p.pos);
    if (p.eof()) throw ParseError("dangling operator", p.pos);
  }
  return normalize(expr);
}

OperatorExpr normalize(const OperatorExpr& expr) {
  // Remap antifermionic modes after the native fermionic modes.
  int max_fermion = -1;
  for (const auto& g : expr.groups)
    for (const auto& f : g.term.factors)
      if (f.species == Species::fermion) max_fermion = std::max(max_fermion, f.mode);
  const int fermion_count = max_fermion + 1;

  std::vector<TermGroup> canonical;
  for (const auto& g : expr.groups) {
    Term t = g.term;
    for (auto& f : t.factors)
      if (f.species == Species::antifermion) {
        f.species = Species::fermion;
        f.mode += fermion_count;
      }
    for (auto& piece : mode_order(t)) {
      canonical.push_back(TermGroup{std::move(piece), g.with_hc});
    }
  }

  // Self-adjoint detection: T + h.c. with T self-adjoint is 2T.
  for (auto& g : canonical) {
    if (!g.with_hc) continue;
    Term hc = hermitian_conjugate(g.term);
    auto hc_canon = mode_order(hc);
    if (hc_canon.size() == 1 && hc_canon[0].same_factors(g.term)) {
      // self-adjoint up to the canonical reordering sign
      if (std::abs(hc_canon[0].coefficient - g.term.coefficient) <= kMergeTol) {
        g.term.coefficient *= 2.0;
        g.with_hc = false;
      }
    }
  }

  // Merge duplicates (same factors, same hc flag).
  std::vector<TermGroup> merged;
  for (auto& g : canonical) {
    bool found = false;
    for (auto& m : merged)
      if (m.with_hc == g.with_hc && m.term.same_factors(g.term)) {
        m.term.coefficient += g.term.coefficient;
        found = true;
        break;
      }
    if (!found) merged.push_back(std::move(g));
  }
  std::erase_if(merged, [](const TermGroup& g) {
    return std::abs(g.term.coefficient) <= kMergeTol;
  });

  // Split mixed-complex coefficients so every group carries a coefficient of
  // the form r * i^k (phase absorbable into the operator).
  OperatorExpr out;
  for (auto& g : merged) {
    const cplx c = g.term.coefficient;
    if (std::abs(c.real()) > kMergeTol && std::abs(c.imag()) > kMergeTol) {
      TermGroup re = g;
      re.term.coefficient = cplx{c.real(), 0.0};
      TermGroup im = g;
      im.term.coefficient = cplx{0.0, c.imag()};
      out.groups.push_back(std::move(re));
      out.groups.push_back(std::move(im));
    } else {
      out.groups.push_back(std::move(g));
    }
  }
  return out;
}

ModeSpec infer_modes(const OperatorExpr& expr, int omega) {
  ModeSpec m;
  m.omega = omega;
  for (const auto& g : expr.groups)
    for (const auto& f : g.term.factors) {
      if (f.species == Species::boson)
        m.n_bosonic = std::max(m.n_bosonic, f.mode + 1);
      else
        m.n_fermionic = std::max(m.n_fermionic, f.mode + 1);
    }
  return m;
}

std::string to_string(const Term& term) {
  std::ostringstream os;
  os << "(" << term.coefficient.real() << (term.coefficient.imag() < 0 ? "-" : "+")
     << std::abs(term.coefficient.imag()) << "j)";
  for (const auto& f : term.factors) {
    os << ' ' << (f.species == Species::boson ? 'a' : 'b') << f.mode
       << (f.dagger ? "^" : "");
  }
  if (term.factors.empty()) os << " 1";
  return os.str();
}

std::string to_string(const OperatorExpr& expr) {
  std::ostringstream os;
  bool first = true;
  for (const auto& g : expr.groups) {
    if (!first) os << " + ";
    first = false;
    os << to_string(g.term);
    if (g.with_hc) os << " + h.c.";
  }
  return os.str();
}

}  // namespace lobe

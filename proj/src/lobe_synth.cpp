#include "lobe/lobe_synth.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iostream>
#include <numbers>

#include "lobe/lcu.hpp"
#include "lobe/pauli.hpp"
#include "lobe/primitives.hpp"

namespace lobe {

namespace {

constexpr double kTol = 1e-12;

int phase_power_of(cplx unit) {
  for (int k = 0; k < 4; ++k) {
    const cplx axis = std::polar(1.0, double(k) * std::numbers::pi / 2.0);
    if (std::abs(unit - axis) < 1e-9) return k;
  }
  throw std::invalid_argument("coefficient phase is not a power of i");
}

// Applies phase i^k conditioned on a literal (or globally when absent).
void apply_phase_power(CircuitBuilder& b, std::optional<Literal> lit, int k) {
  k = ((k % 4) + 4) % 4;
  if (k == 0) return;
  if (!lit) {
    b.global_phase(double(k) * std::numbers::pi / 2.0);
    return;
  }
  auto [q, pol] = *lit;
  if (pol == 0) b.x(q);
  if (k == 2) {
    b.z(q);
  } else {
    if (k == 3) b.z(q);
    b.s(q);
  }
  if (pol == 0) b.x(q);
}

// Phase -1 exactly on the subspace where both literals hold.
void apply_minus_on(CircuitBuilder& b, std::optional<Literal> ctrl, Literal branch) {
  if (!ctrl) {
    if (branch.second == 0) b.x(branch.first);
    b.z(branch.first);
    if (branch.second == 0) b.x(branch.first);
    return;
  }
  if (ctrl->second != 1) throw std::logic_error("open top-level control");
  b.z(ctrl->first, {{branch.first, branch.second}});
}

// Phase i exactly on the subspace where ctrl (optional) and branch hold:
// a controlled-S, counted as one rotation by the resource model.
void apply_i_on(CircuitBuilder& b, std::optional<Literal> ctrl, Literal branch) {
  std::vector<std::pair<Qubit, int>> ctrls;
  if (ctrl) ctrls.emplace_back(ctrl->first, ctrl->second);
  if (branch.second == 0) b.x(branch.first);
  b.s(branch.first, ctrls);
  if (branch.second == 0) b.x(branch.first);
}

}  // namespace

bool cz_sign_required(int non_number_modes) {
  const long c = non_number_modes;
  return ((c * (c - 1) / 2) % 2) == 1;
}

double lobe_angles(int post_value, int creation_power, int annihilation_power,
                   int omega, int register_width) {
  const int size = 1 << register_width;
  const int r = creation_power;
  const int s = annihilation_power;
  int pre = ((post_value - r + s) % size + size) % size;
  const bool valid = pre >= s && pre <= omega && pre - s + r <= omega;
  if (!valid) return std::numbers::pi;
  double prod = 1.0;
  for (int k = 1; k <= s; ++k) prod *= double(pre - s + k) / double(omega);
  for (int k = 1; k <= r; ++k) prod *= double(pre - s + k) / double(omega);
  return 2.0 * std::acos(std::sqrt(prod));
}

TermShape classify(const TermGroup& group) {
  TermShape shape;
  shape.with_hc = group.with_hc;
  for (const auto& f : group.term.factors) {
    if (f.species == Species::boson) {
      auto& [r, s] = shape.boson_modes[f.mode];
      if (f.dagger)
        ++r;
      else
        ++s;
    } else {
      auto it = shape.fermion_modes.find(f.mode);
      const FermionPattern p = f.dagger ? FermionPattern::create
                                        : FermionPattern::annihilate;
      if (it == shape.fermion_modes.end()) {
        shape.fermion_modes[f.mode] = p;
      } else {
        // mode-ordered: at most one creation then one annihilation per mode
        if (it->second == FermionPattern::create && !f.dagger)
          it->second = FermionPattern::number;
        else
          throw std::invalid_argument("term is not mode ordered");
      }
    }
  }
  shape.active_modes = int(shape.fermion_modes.size() + shape.boson_modes.size());
  for (const auto& [m, p] : shape.fermion_modes)
    if (p != FermionPattern::number) ++shape.non_number_modes;
  for (const auto& [m, rs] : shape.boson_modes)
    shape.exponent_sum += rs.first + rs.second;

  const bool has_f = !shape.fermion_modes.empty();
  const bool has_b = !shape.boson_modes.empty();
  if (!has_f && !has_b) {
    shape.cls = TermClass::identity;
  } else if (has_f && has_b) {
    shape.cls = TermClass::mixed_term;
  } else if (has_f) {
    if (group.with_hc)
      shape.cls = TermClass::fermionic_lc_hc;
    else if (group.term.factors.size() == 1)
      shape.cls = TermClass::fermionic_single;
    else
      shape.cls = TermClass::fermionic_product;
  } else {
    shape.cls = group.with_hc ? TermClass::bosonic_lc_hc
                              : TermClass::bosonic_product_single_mode;
  }
  return shape;
}

LobeCostFormula lobe_cost_formula(const TermShape& shape, int omega) {
  const int w = bosonic_register_width(omega);
  const int b_total = shape.active_modes;
  const int b_f = int(shape.fermion_modes.size());
  const int b_a = int(shape.boson_modes.size());
  const double lam_bos = std::pow(double(omega), double(shape.exponent_sum) / 2.0);
  LobeCostFormula f;
  switch (shape.cls) {
    case TermClass::identity:
      break;
    case TermClass::fermionic_single:
      f = {4, 0, 1, 1, 1.0, false};
      break;
    case TermClass::fermionic_product:
      f = {4L * b_total, 0, 1, b_total, 1.0, false};
      break;
    case TermClass::fermionic_lc_hc:
      f = {4L * (b_total - 1), 0, b_total > 1 ? 1 : 0,
           std::max(b_total - 1, 0), 1.0, false};
      break;
    case TermClass::bosonic_product_single_mode:
      f = {long(b_a) * (7L * w), long(b_a) * long(omega + 3), b_a, w, lam_bos,
           true};
      break;
    case TermClass::bosonic_lc_hc:
      f = {12L * b_a * w - 8L * b_a + 4, long(b_a) * long(omega + 3), b_a + 1,
           w + 1, 2.0 * lam_bos, true};
      break;
    case TermClass::mixed_term: {
      // condition literals: pairwise links among non-number fermionic modes
      // plus number-mode checks (h.c. case), or one per mode (plain case)
      if (shape.with_hc) {
        const int n_lit = std::max(shape.non_number_modes - 1, 0) +
                          (b_f - shape.non_number_modes);
        const bool h_index = shape.non_number_modes == 0;
        long t = 4L * n_lit + 4 + long(b_a) * (12L * w - 8);
        f.t_count = t;
        f.rotation_bound = long(b_a) * long(omega + 3);
        f.be_ancillae = (n_lit > 0 ? 1 : 0) + b_a + (h_index ? 1 : 0);
        f.clean_ancillae = w + 1;
        f.lambda = (h_index ? 2.0 : 1.0) * lam_bos;
        f.t_is_bound = true;
      } else {
        f.t_count = 4L * b_f + long(b_a) * (8L * w - 4);
        f.rotation_bound = long(b_a) * long(omega + 3);
        f.be_ancillae = (b_f > 0 ? 1 : 0) + b_a;
        f.clean_ancillae = std::max(b_f, w);
        f.lambda = lam_bos;
        f.t_is_bound = true;
      }
      break;
    }
  }
  return f;
}

namespace {

struct BuildContext {
  CircuitBuilder* b = nullptr;
  const LobeConfig* cfg = nullptr;
  int w = 0;
  std::optional<Literal> ctrl;

  Qubit fermion(int mode) const { return b->system(mode); }
  std::vector<Qubit> boson_reg(int mode) const {
    std::vector<Qubit> reg;
    const int base = cfg->modes.n_fermionic + mode * w;
    for (int i = 0; i < w; ++i) reg.push_back(b->system(base + i));
    return reg;
  }
};

// Flips `anc` outside the encoded subspace unless every literal holds.
void flip_unless(BuildContext& ctx, const std::vector<Literal>& literals,
                 Qubit anc) {
  CircuitBuilder& b = *ctx.b;
  if (literals.empty()) return;
  if (literals.size() == 1) {
    auto [q, pol] = literals[0];
    if (ctx.ctrl)
      b.toffoli(ctx.ctrl->first, ctx.ctrl->second, q, 1 - pol, anc);
    else
      b.cnot(q, anc, 1 - pol);
    return;
  }
  AndLadder ladder(b, literals);
  if (ctx.ctrl)
    b.toffoli(ctx.ctrl->first, ctx.ctrl->second, ladder.result(), 0, anc);
  else
    b.cnot(ladder.result(), anc, 0);
  ladder.release();
}

// Controlled Z-string (parity sign) and X (occupation flip) for one mode.
void apply_zx_update(BuildContext& ctx, int mode) {
  CircuitBuilder& b = *ctx.b;
  std::vector<std::pair<Qubit, int>> ctrls;
  if (ctx.ctrl) ctrls.emplace_back(ctx.ctrl->first, ctx.ctrl->second);
  for (int j = 0; j < mode; ++j) b.z(ctx.fermion(j), ctrls);
  if (ctx.ctrl)
    b.cnot(ctx.ctrl->first, ctx.fermion(mode), ctx.ctrl->second);
  else
    b.x(ctx.fermion(mode));
}

AngleSchedule boson_schedule(int r, int s, int omega, int w, bool* all_pi) {
  std::vector<double> raw(std::size_t(1) << w);
  bool nontrivial = false;
  for (std::size_t v = 0; v < raw.size(); ++v) {
    raw[v] = lobe_angles(int(v), r, s, omega, w);
    if (std::abs(raw[v] - std::numbers::pi) > kTol) nontrivial = true;
  }
  if (all_pi) *all_pi = !nontrivial;
  return gray_transform(raw);
}

// Branch descriptor for the two-branch (T + partner) constructions.
struct BranchSpec {
  // fermionic needs of branch 1 per non-number mode (branch 2 flips modes in
  // `flipped`); number modes always require occupation 1
  std::map<int, int> needs;
  std::vector<int> flipped;     // subset of non-number modes, ascending
  std::vector<int> unflipped;   // non-number modes shared between branches
  std::vector<int> numbers;     // fermionic number modes
  int relative_phase_power = 0; // i^k of branch 2 relative to branch 1
};

void build_two_branch(BuildContext& ctx, const BranchSpec& br,
                      const std::map<int, std::pair<int, int>>& boson_modes,
                      int omega) {
  CircuitBuilder& b = *ctx.b;
  const int w = ctx.w;

  // --- validity conditions ---
  std::vector<Literal> lits;
  const auto& fl = br.flipped;
  // pairwise parity links over the flipped set (chain targets leave the
  // first flipped mode untouched; it doubles as the branch selector)
  std::vector<std::pair<int, int>> chain;  // (control mode, target mode)
  for (std::size_t k = fl.size(); k-- > 1;) chain.emplace_back(fl[k - 1], fl[k]);
  for (auto [from, to] : chain) b.cnot(ctx.fermion(from), ctx.fermion(to));
  for (std::size_t k = 1; k < fl.size(); ++k) {
    const int want = br.needs.at(fl[k]) ^ br.needs.at(fl[k - 1]);
    lits.emplace_back(ctx.fermion(fl[k]), want);
  }
  for (int m : br.unflipped) lits.emplace_back(ctx.fermion(m), br.needs.at(m));
  for (int m : br.numbers) lits.emplace_back(ctx.fermion(m), 1);

  if (!lits.empty()) {
    Qubit anc_v = b.add_be_ancilla();
    flip_unless(ctx, lits, anc_v);
  }
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    b.cnot(ctx.fermion(it->first), ctx.fermion(it->second));

  // --- branch selector ---
  std::optional<Literal> sel_t, sel_partner;
  std::optional<Qubit> h_index;
  bool used_elbow = false;
  Qubit q{};
  if (!fl.empty()) {
    const int m1 = fl.front();
    const int need1 = br.needs.at(m1);
    if (!boson_modes.empty()) {
      if (ctx.ctrl) {
        q = b.left_elbow(ctx.ctrl->first, ctx.ctrl->second, ctx.fermion(m1), need1);
        used_elbow = true;
        sel_t = Literal{q, 1};
      } else {
        sel_t = Literal{ctx.fermion(m1), need1};
        sel_partner = Literal{ctx.fermion(m1), 1 - need1};
      }
    }
  } else {
    // no fermionic discriminator: index the two branches explicitly
    h_index = b.add_be_ancilla();
    b.h(*h_index);
    if (ctx.ctrl) {
      q = b.left_elbow(ctx.ctrl->first, ctx.ctrl->second, *h_index, 0);
      used_elbow = true;
      sel_t = Literal{q, 1};
    } else {
      sel_t = Literal{*h_index, 0};
      sel_partner = Literal{*h_index, 1};
    }
  }

  // --- bosonic occupancy updates and coefficient rotations ---
  if (!boson_modes.empty()) {
    const std::size_t size = std::size_t{1} << w;
    // branch T adds +R-S before the rotations
    for (const auto& [mode, rs] : boson_modes) {
      const long delta = long(rs.first) - long(rs.second);
      const unsigned long add = (unsigned long)(((delta % long(size)) + long(size)) % long(size));
      if (add) compile_add_constant(b, ctx.boson_reg(mode), add, sel_t);
    }
    for (const auto& [mode, rs] : boson_modes) {
      Qubit anc = b.add_be_ancilla();
      bool all_pi = false;
      AngleSchedule sched = boson_schedule(rs.first, rs.second, omega, w, &all_pi);
      if (all_pi)
        std::cerr << "[lobe] note: bosonic exponents (" << rs.first << ","
                  << rs.second << ") exceed the cutoff; block is zero\n";
      compile_ucr(b, sched, anc, ctx.boson_reg(mode), ctx.ctrl);
    }
    // branch partner subtracts +R-S after the rotations
    if (used_elbow) b.cnot(ctx.ctrl->first, q, ctx.ctrl->second);
    for (const auto& [mode, rs] : boson_modes) {
      const long delta = long(rs.first) - long(rs.second);
      const unsigned long sub =
          (unsigned long)((((-delta) % long(size)) + long(size)) % long(size));
      if (sub)
        compile_add_constant(b, ctx.boson_reg(mode), sub,
                             used_elbow ? Literal{q, 1} : *sel_partner);
    }
    if (used_elbow) {
      b.cnot(ctx.ctrl->first, q, ctx.ctrl->second);
      const Literal other = fl.empty() ? Literal{*h_index, 0}
                                       : Literal{ctx.fermion(fl.front()),
                                                 br.needs.at(fl.front())};
      b.right_elbow(q, ctx.ctrl->first, ctx.ctrl->second, other.first, other.second);
    }
  } else if (used_elbow) {
    b.right_elbow(q, ctx.ctrl->first, ctx.ctrl->second, *h_index, 0);
  }

  // --- relative phase between the branches ---
  const int rel = ((br.relative_phase_power % 4) + 4) % 4;
  if (rel != 0) {
    Literal partner_lit = h_index ? Literal{*h_index, 1}
                                  : Literal{ctx.fermion(fl.front()),
                                            1 - br.needs.at(fl.front())};
    if (rel == 2) {
      apply_minus_on(*ctx.b, ctx.ctrl, partner_lit);
    } else {
      apply_i_on(*ctx.b, ctx.ctrl, partner_lit);
      if (rel == 3) apply_minus_on(*ctx.b, ctx.ctrl, partner_lit);
    }
  }

  // --- fermionic occupation updates, highest mode first ---
  std::vector<int> updates = br.flipped;
  updates.insert(updates.end(), br.unflipped.begin(), br.unflipped.end());
  std::sort(updates.begin(), updates.end());
  for (auto it = updates.rbegin(); it != updates.rend(); ++it)
    apply_zx_update(ctx, *it);

  if (h_index) b.h(*h_index);
}

}  // namespace

BlockEncoding encode_group(const TermGroup& group, const LobeConfig& cfg) {
  const TermShape shape = classify(group);
  const int w = bosonic_register_width(cfg.modes.omega);
  const int nsys = system_qubit_count(cfg.modes);
  const cplx coeff = group.term.coefficient;
  const double mag = std::abs(coeff);
  if (mag <= kTol) throw std::invalid_argument("zero-coefficient group");
  const int phase_k = phase_power_of(coeff / mag);

  CircuitBuilder b(nsys, cfg.controlled);
  BuildContext ctx;
  ctx.b = &b;
  ctx.cfg = &cfg;
  ctx.w = w;
  if (cfg.controlled) ctx.ctrl = Literal{*b.ctrl(), 1};

  double lambda = mag * std::pow(double(cfg.modes.omega),
                                 double(shape.exponent_sum) / 2.0);

  if (shape.cls == TermClass::identity) {
    apply_phase_power(b, ctx.ctrl, phase_k);
    BlockEncoding be;
    be.circuit = b.finalize();
    be.lambda = mag;
    be.method = "lobe";
    return be;
  }

  if (!group.with_hc) {
    // plain term: fermionic occupation conditions, bosonic per-mode updates
    std::vector<Literal> lits;
    for (const auto& [m, p] : shape.fermion_modes)
      lits.emplace_back(ctx.fermion(m), p == FermionPattern::create ? 0 : 1);
    if (!shape.fermion_modes.empty()) {
      Qubit anc_f = b.add_be_ancilla();
      flip_unless(ctx, lits, anc_f);
    }
    for (const auto& [mode, rs] : shape.boson_modes) {
      Qubit anc = b.add_be_ancilla();
      const std::size_t size = std::size_t{1} << w;
      const long delta = long(rs.first) - long(rs.second);
      const unsigned long add =
          (unsigned long)(((delta % long(size)) + long(size)) % long(size));
      if (add) compile_add_constant(b, ctx.boson_reg(mode), add, ctx.ctrl);
      bool all_pi = false;
      AngleSchedule sched =
          boson_schedule(rs.first, rs.second, cfg.modes.omega, w, &all_pi);
      if (all_pi)
        std::cerr << "[lobe] note: bosonic exponents (" << rs.first << ","
                  << rs.second << ") exceed the cutoff; block is zero\n";
      compile_ucr(b, sched, anc, ctx.boson_reg(mode), ctx.ctrl);
    }
    std::vector<int> updates;
    for (const auto& [m, p] : shape.fermion_modes)
      if (p != FermionPattern::number) updates.push_back(m);
    for (auto it = updates.rbegin(); it != updates.rend(); ++it)
      apply_zx_update(ctx, *it);
    apply_phase_power(b, ctx.ctrl, phase_k);
  } else {
    // T + h.c.: flipped set = all non-number fermionic modes; bosonic modes
    // swap (R,S) <-> (S,R) between the branches
    BranchSpec br;
    for (const auto& [m, p] : shape.fermion_modes) {
      if (p == FermionPattern::number) {
        br.numbers.push_back(m);
      } else {
        br.flipped.push_back(m);
        br.needs[m] = p == FermionPattern::annihilate ? 1 : 0;
      }
    }
    // reordering sign (C choose 2) plus the conjugated coefficient's phase
    int rel = cz_sign_required(shape.non_number_modes) ? 2 : 0;
    rel += (phase_k % 2 == 1) ? 2 : 0;  // conj phase: i^k vs i^{-k}
    br.relative_phase_power = rel;
    if (br.flipped.empty() && shape.boson_modes.empty())
      throw std::invalid_argument("self-adjoint group marked with_hc");
    build_two_branch(ctx, br, shape.boson_modes, cfg.modes.omega);
    apply_phase_power(b, ctx.ctrl, phase_k);
    if (br.flipped.empty()) lambda *= 2.0;  // H-indexed branches
  }

  BlockEncoding be;
  be.circuit = b.finalize();
  be.lambda = lambda;
  be.method = "lobe";
  return be;
}

namespace {

// Detects a pair of plain fermionic groups encodable as one two-branch block:
// same modes, patterns equal or creation/annihilation-flipped (flip set
// nonempty), equal magnitudes.
struct PairMatch {
  BranchSpec branch;
  double magnitude = 0.0;
  int phase_k1 = 0;
};

std::optional<PairMatch> match_pair(const TermGroup& g1, const TermGroup& g2) {
  if (g1.with_hc || g2.with_hc) return std::nullopt;
  TermShape s1, s2;
  try {
    s1 = classify(g1);
    s2 = classify(g2);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  if (!s1.boson_modes.empty() || !s2.boson_modes.empty()) return std::nullopt;
  if (s1.fermion_modes.empty()) return std::nullopt;
  if (s1.fermion_modes.size() != s2.fermion_modes.size()) return std::nullopt;
  const double m1 = std::abs(g1.term.coefficient);
  const double m2 = std::abs(g2.term.coefficient);
  if (std::abs(m1 - m2) > kTol) return std::nullopt;

  PairMatch out;
  for (const auto& [mode, p1] : s1.fermion_modes) {
    auto it = s2.fermion_modes.find(mode);
    if (it == s2.fermion_modes.end()) return std::nullopt;
    const FermionPattern p2 = it->second;
    if (p1 == FermionPattern::number || p2 == FermionPattern::number) {
      if (p1 != p2) return std::nullopt;
      out.branch.numbers.push_back(mode);
    } else if (p1 == p2) {
      out.branch.unflipped.push_back(mode);
      out.branch.needs[mode] = p1 == FermionPattern::annihilate ? 1 : 0;
    } else {
      out.branch.flipped.push_back(mode);
      out.branch.needs[mode] = p1 == FermionPattern::annihilate ? 1 : 0;
    }
  }
  if (out.branch.flipped.empty()) return std::nullopt;
  out.magnitude = m1;
  const cplx u1 = g1.term.coefficient / m1;
  const cplx u2 = g2.term.coefficient / m2;
  int k1, k2;
  try {
    k1 = phase_power_of(u1);
    k2 = phase_power_of(u2);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  out.phase_k1 = k1;
  out.branch.relative_phase_power = ((k2 - k1) % 4 + 4) % 4;
  return out;
}

BlockEncoding encode_pair(const PairMatch& pm, const LobeConfig& cfg) {
  CircuitBuilder b(system_qubit_count(cfg.modes), cfg.controlled);
  BuildContext ctx;
  ctx.b = &b;
  ctx.cfg = &cfg;
  ctx.w = bosonic_register_width(cfg.modes.omega);
  if (cfg.controlled) ctx.ctrl = Literal{*b.ctrl(), 1};
  build_two_branch(ctx, pm.branch, {}, cfg.modes.omega);
  apply_phase_power(b, ctx.ctrl, pm.phase_k1);
  BlockEncoding be;
  be.circuit = b.finalize();
  be.lambda = pm.magnitude;
  be.method = "lobe";
  return be;
}

}  // namespace

BlockEncoding encode_hamiltonian(const OperatorExpr& raw, const LobeConfig& cfg) {
  OperatorExpr expr = normalize(raw);
  if (expr.groups.empty()) throw std::invalid_argument("empty expression");
  if (expr.groups.size() == 1) return encode_group(expr.groups[0], cfg);

  // pair plain fermionic groups that admit the shared two-branch construction
  std::vector<bool> used(expr.groups.size(), false);
  std::vector<BlockEncoding> encodings;
  LobeConfig child_cfg = cfg;
  child_cfg.controlled = true;
  for (std::size_t i = 0; i < expr.groups.size(); ++i) {
    if (used[i]) continue;
    std::optional<BlockEncoding> enc;
    for (std::size_t j = i + 1; j < expr.groups.size() && !enc; ++j) {
      if (used[j]) continue;
      if (auto pm = match_pair(expr.groups[i], expr.groups[j])) {
        enc = encode_pair(*pm, child_cfg);
        used[j] = true;
      }
    }
    if (!enc) enc = encode_group(expr.groups[i], child_cfg);
    used[i] = true;
    encodings.push_back(std::move(*enc));
  }
  if (encodings.size() == 1 && cfg.controlled == true) return encodings[0];
  std::vector<double> ones(encodings.size(), 1.0);
  BlockEncoding be = combine(encodings, ones, CombineMode::lco, cfg.controlled);
  be.method = "lobe";
  return be;
}

}  // namespace lobe

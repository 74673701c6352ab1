#include "lobe/primitives.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lobe {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t padded_size(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

int log2_exact(std::size_t n) { return std::countr_zero(n); }

uint64_t gray(uint64_t i) { return i ^ (i >> 1); }

int popcount_parity(uint64_t x) { return std::popcount(x) & 1; }

}  // namespace

AngleSchedule gray_transform(std::vector<double> alphas) {
  const std::size_t L = padded_size(std::max<std::size_t>(alphas.size(), 1));
  alphas.resize(L, 0.0);
  AngleSchedule sched;
  sched.raw_angles = alphas;
  sched.processed_angles.assign(L, 0.0);
  for (std::size_t i = 0; i < L; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < L; ++j) {
      const double sign = popcount_parity(uint64_t(j) & gray(uint64_t(i))) ? -1.0 : 1.0;
      acc += sign * alphas[j];
    }
    sched.processed_angles[i] = acc / double(L);
  }
  return sched;
}

std::vector<double> gray_untransform(const std::vector<double>& thetas) {
  const std::size_t L = thetas.size();
  if (!is_power_of_two(L)) throw std::invalid_argument("length must be 2^k");
  std::vector<double> alphas(L, 0.0);
  for (std::size_t j = 0; j < L; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
      const double sign = popcount_parity(uint64_t(j) & gray(uint64_t(i))) ? -1.0 : 1.0;
      acc += sign * thetas[i];
    }
    alphas[j] = acc;  // M^{-1} = L M^T
  }
  return alphas;
}

AdditionPlan plan_addition(unsigned long m, int width, AddStrategy strategy) {
  if (width <= 0) throw std::invalid_argument("register width must be positive");
  const unsigned long mod = width >= 64 ? 0 : (1ul << width);
  if (mod && m >= mod) throw std::invalid_argument("constant exceeds register range");
  AdditionPlan plan;
  plan.constant = m;
  plan.register_width = width;
  plan.strategy = strategy;
  if (m == 0) return plan;
  const int p = std::countr_zero(m);
  plan.trailing_zeros = p;
  const int n = width - p;
  switch (strategy) {
    case AddStrategy::incrementer_chain: {
      long t = 0;
      for (int i = 0; i < width; ++i)
        if ((m >> i) & 1ul) t += 4 * long(width - i - 1);
      plan.predicted_t_count = t;
      plan.predicted_clean_ancillae = width - p - 1;
      break;
    }
    case AddStrategy::load_add_unload:
      plan.predicted_t_count = 4 * long(n - 1);
      plan.predicted_clean_ancillae = n >= 2 ? 2 * n - 1 : 0;
      break;
    case AddStrategy::inlined_controlled_add:
      plan.predicted_t_count = n >= 2 ? 4 * long(2 * n - 3) : 0;
      plan.predicted_clean_ancillae = n >= 2 ? 2 * n - 3 : 0;
      break;
  }
  return plan;
}

AdditionPlan plan_addition(unsigned long m, int width) {
  AdditionPlan best;
  bool first = true;
  for (auto s : {AddStrategy::incrementer_chain, AddStrategy::load_add_unload,
                 AddStrategy::inlined_controlled_add}) {
    AdditionPlan p = plan_addition(m, width, s);
    if (first || p.predicted_t_count < best.predicted_t_count ||
        (p.predicted_t_count == best.predicted_t_count &&
         p.predicted_clean_ancillae < best.predicted_clean_ancillae)) {
      best = p;
      first = false;
    }
  }
  return best;
}

AndLadder::AndLadder(CircuitBuilder& b, std::vector<std::pair<Qubit, int>> literals)
    : b_(b), literals_(std::move(literals)) {
  if (literals_.size() < 2)
    throw std::invalid_argument("AndLadder needs at least two literals");
  Qubit acc = b_.left_elbow(literals_[0].first, literals_[0].second,
                            literals_[1].first, literals_[1].second);
  chain_.push_back(acc);
  for (std::size_t i = 2; i < literals_.size(); ++i) {
    acc = b_.left_elbow(acc, 1, literals_[i].first, literals_[i].second);
    chain_.push_back(acc);
  }
}

void AndLadder::release() {
  if (released_) throw std::logic_error("AndLadder already released");
  for (std::size_t i = chain_.size(); i-- > 0;) {
    if (i == 0) {
      b_.right_elbow(chain_[0], literals_[0].first, literals_[0].second,
                     literals_[1].first, literals_[1].second);
    } else {
      b_.right_elbow(chain_[i], chain_[i - 1], 1, literals_[i + 1].first,
                     literals_[i + 1].second);
    }
  }
  released_ = true;
}

AndLadder::~AndLadder() = default;  // unreleased ladders surface as leaks at finalize

void compile_mcx(CircuitBuilder& b, std::vector<std::pair<Qubit, int>> literals,
                 Qubit target) {
  if (literals.empty()) {
    b.x(target);
    return;
  }
  if (literals.size() == 1) {
    b.cnot(literals[0].first, target, literals[0].second);
    return;
  }
  AndLadder ladder(b, literals);
  b.cnot(ladder.result(), target);
  ladder.release();
}

namespace {

// Controlled +1 on sub-register [q0..qn): ripple of elbows, 4(n-1) T when
// controlled, 4(n-2) T uncontrolled.
void controlled_incrementer(CircuitBuilder& b, const std::vector<Qubit>& reg,
                            std::optional<Literal> control) {
  const std::size_t n = reg.size();
  if (n == 0) return;
  if (control) {
    const auto [cq, cp] = *control;
    if (n == 1) {
      b.cnot(cq, reg[0], cp);
      return;
    }
    // carries[k] = AND(control, reg[0..k]) = carry into bit k+1
    std::vector<Qubit> carries;
    carries.push_back(b.left_elbow(cq, cp, reg[0], 1));
    for (std::size_t i = 1; i + 1 < n; ++i)
      carries.push_back(b.left_elbow(carries.back(), 1, reg[i], 1));
    for (std::size_t k = carries.size(); k-- > 0;) {
      b.cnot(carries[k], reg[k + 1]);
      if (k == 0)
        b.right_elbow(carries[0], cq, cp, reg[0], 1);
      else
        b.right_elbow(carries[k], carries[k - 1], 1, reg[k], 1);
    }
    b.cnot(cq, reg[0], cp);
  } else {
    if (n == 1) {
      b.x(reg[0]);
      return;
    }
    if (n == 2) {
      b.cnot(reg[0], reg[1]);
      b.x(reg[0]);
      return;
    }
    // carries[k] = AND(reg[0..k+1]) = carry into bit k+2
    std::vector<Qubit> carries;
    carries.push_back(b.left_elbow(reg[0], 1, reg[1], 1));
    for (std::size_t i = 2; i + 1 < n; ++i)
      carries.push_back(b.left_elbow(carries.back(), 1, reg[i], 1));
    for (std::size_t k = carries.size(); k-- > 0;) {
      b.cnot(carries[k], reg[k + 2]);
      if (k == 0)
        b.right_elbow(carries[0], reg[0], 1, reg[1], 1);
      else
        b.right_elbow(carries[k], carries[k - 1], 1, reg[k + 1], 1);
    }
    b.cnot(reg[0], reg[1]);
    b.x(reg[0]);
  }
}

// Uncontrolled two-register ripple adder: b += a (mod 2^n), a preserved.
// n-1 elbows, 4(n-1) T.
void uncontrolled_adder(CircuitBuilder& b, const std::vector<Qubit>& a,
                        const std::vector<Qubit>& dst) {
  const std::size_t n = dst.size();
  if (n == 0) return;
  if (n == 1) {
    b.cnot(a[0], dst[0]);
    return;
  }
  std::vector<Qubit> c(n);  // c[i] = carry into bit i, i >= 1
  c[1] = b.left_elbow(a[0], 1, dst[0], 1);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    b.cnot(c[i], a[i]);
    b.cnot(c[i], dst[i]);
    c[i + 1] = b.left_elbow(a[i], 1, dst[i], 1);
    b.cnot(c[i], c[i + 1]);
  }
  b.cnot(c[n - 1], dst[n - 1]);
  b.cnot(a[n - 1], dst[n - 1]);
  for (std::size_t i = n - 1; i-- > 1;) {
    b.cnot(c[i], c[i + 1]);
    b.right_elbow(c[i + 1], a[i], 1, dst[i], 1);
    b.cnot(a[i], dst[i]);
    b.cnot(c[i], dst[i]);
    b.cnot(c[i], a[i]);
  }
  b.right_elbow(c[1], a[0], 1, dst[0], 1);
  b.cnot(a[0], dst[0]);
}

void load_add_unload(CircuitBuilder& b, const std::vector<Qubit>& reg,
                     unsigned long m, std::optional<Literal> control) {
  const int p = std::countr_zero(m);
  const unsigned long mp = m >> p;
  std::vector<Qubit> sub(reg.begin() + p, reg.end());
  const std::size_t n = sub.size();
  if (n == 1) {
    if (control)
      b.cnot(control->first, sub[0], control->second);
    else
      b.x(sub[0]);
    return;
  }
  std::vector<Qubit> loaded;
  for (std::size_t i = 0; i < n; ++i) loaded.push_back(b.alloc_clean());
  auto load = [&]() {
    for (std::size_t i = 0; i < n; ++i)
      if ((mp >> i) & 1ul) {
        if (control)
          b.cnot(control->first, loaded[i], control->second);
        else
          b.x(loaded[i]);
      }
  };
  load();
  uncontrolled_adder(b, loaded, sub);
  load();
  for (std::size_t i = loaded.size(); i-- > 0;) b.free_clean(loaded[i]);
}

// Classical bits folded into the carry network; ctrl participates in every
// carry, keeping the whole addition conditioned without masked loads.
void inlined_controlled_add(CircuitBuilder& b, const std::vector<Qubit>& reg,
                            unsigned long m, Literal control) {
  const auto [cq, cp] = control;
  const int p = std::countr_zero(m);
  const unsigned long mp = m >> p;
  std::vector<Qubit> sub(reg.begin() + p, reg.end());
  const std::size_t n = sub.size();
  if (n == 1) {
    b.cnot(cq, sub[0], cp);
    return;
  }
  // carries q[i] = carry into bit i (<= ctrl); helper t[i] per middle bit
  std::vector<Qubit> q(n), t(n);
  q[1] = b.left_elbow(cq, cp, sub[0], 1);  // m bit 0 is set
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const bool mi = (mp >> i) & 1ul;
    if (mi) {
      t[i] = b.left_elbow(cq, cp, sub[i], 1);
      q[i + 1] = b.left_elbow(t[i], 0, q[i], 0);
      b.x(q[i + 1]);  // carry = (ctrl & sub_i) | q_i
    } else {
      t[i] = b.left_elbow(sub[i], 1, q[i], 1);
      q[i + 1] = b.left_elbow(t[i], 1, cq, cp);
    }
  }
  // sums top-down, releasing carry machinery as wires become dead
  for (std::size_t i = n; i-- > 1;) {
    b.cnot(q[i], sub[i]);
    if ((mp >> i) & 1ul) b.cnot(cq, sub[i], cp);
    if (i >= 2) {
      const bool mi = (mp >> (i - 1)) & 1ul;
      if (mi) {
        b.x(q[i]);
        b.right_elbow(q[i], t[i - 1], 0, q[i - 1], 0);
        b.right_elbow(t[i - 1], cq, cp, sub[i - 1], 1);
      } else {
        b.right_elbow(q[i], t[i - 1], 1, cq, cp);
        b.right_elbow(t[i - 1], sub[i - 1], 1, q[i - 1], 1);
      }
    } else {
      b.right_elbow(q[1], cq, cp, sub[0], 1);
    }
  }
  b.cnot(cq, sub[0], cp);
}

}  // namespace

void compile_add_constant(CircuitBuilder& b, const std::vector<Qubit>& reg,
                          unsigned long m, std::optional<Literal> control,
                          std::optional<AddStrategy> strategy) {
  const int width = int(reg.size());
  if (width == 0 || m == 0) return;
  const unsigned long mod = width >= 64 ? 0 : (1ul << width);
  if (mod && m >= mod) throw std::invalid_argument("constant exceeds register");
  const AdditionPlan plan =
      strategy ? plan_addition(m, width, *strategy) : plan_addition(m, width);
  switch (plan.strategy) {
    case AddStrategy::incrementer_chain:
      for (int i = 0; i < width; ++i)
        if ((m >> i) & 1ul) {
          std::vector<Qubit> sub(reg.begin() + i, reg.end());
          controlled_incrementer(b, sub, control);
        }
      break;
    case AddStrategy::load_add_unload:
      load_add_unload(b, reg, m, control);
      break;
    case AddStrategy::inlined_controlled_add:
      if (!control)
        load_add_unload(b, reg, m, std::nullopt);
      else
        inlined_controlled_add(b, reg, m, *control);
      break;
  }
}

namespace {

// Gray-walk CNOT control position after rotation l (L rotations total).
int gray_cnot_position(std::size_t l, std::size_t L) {
  const int k = log2_exact(L);
  if (l + 1 == L) return k - 1;
  return std::countr_zero(uint64_t(l + 1));
}

}  // namespace

void compile_ucr(CircuitBuilder& b, const AngleSchedule& schedule, Qubit target,
                 const std::vector<Qubit>& index_register,
                 std::optional<Literal> control) {
  const std::size_t L = schedule.processed_angles.size();
  if (!is_power_of_two(L)) throw std::invalid_argument("schedule not padded");
  if (L == 1) {
    if (control)
      b.ry(target, schedule.raw_angles[0], {{control->first, control->second}});
    else
      b.ry(target, schedule.raw_angles[0]);
    return;
  }
  const int k = log2_exact(L);
  if (int(index_register.size()) < k)
    throw std::invalid_argument("index register too small for schedule");

  std::vector<Qubit> lines(index_register.begin(), index_register.begin() + k);
  std::vector<Qubit> ands;
  if (control) {
    for (int j = 0; j < k; ++j)
      ands.push_back(
          b.left_elbow(control->first, control->second, lines[std::size_t(j)], 1));
    lines.assign(ands.begin(), ands.end());
  }
  double total = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    b.ry(target, schedule.processed_angles[l]);
    total += schedule.processed_angles[l];
    b.cnot(lines[std::size_t(gray_cnot_position(l, L))], target);
  }
  if (control) {
    for (int j = k; j-- > 0;)
      b.right_elbow(ands[std::size_t(j)], control->first, control->second,
                    index_register[std::size_t(j)], 1);
    b.ry(target, -total, {{control->first, 1 - control->second}});
  }
}

std::vector<double> grover_rudolph_layer_angles(const std::vector<double>& probs,
                                                int layer) {
  const std::size_t L = probs.size();
  const int b_total = log2_exact(L);
  const int j = layer;
  std::vector<double> angles(std::size_t(1) << j, 0.0);
  for (std::size_t v = 0; v < angles.size(); ++v) {
    double whole = 0.0, left = 0.0;
    const std::size_t span = L >> j;
    for (std::size_t l = v * span; l < (v + 1) * span; ++l) {
      whole += probs[l];
      if (l < v * span + span / 2) left += probs[l];
    }
    if (whole <= 0.0) {
      angles[v] = 0.0;
    } else {
      double ratio = std::sqrt(std::clamp(left / whole, 0.0, 1.0));
      angles[v] = 2.0 * std::acos(ratio);
    }
  }
  (void)b_total;
  return angles;
}

void compile_grover_rudolph(CircuitBuilder& b, std::vector<double> probabilities,
                            const std::vector<Qubit>& reg) {
  if (probabilities.empty()) throw std::invalid_argument("empty distribution");
  double sum = 0.0;
  for (double p : probabilities) {
    if (p < -1e-12) throw std::invalid_argument("negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("probabilities must sum to 1");
  const std::size_t L = padded_size(probabilities.size());
  probabilities.resize(L, 0.0);
  const int nq = log2_exact(L);
  if (int(reg.size()) < nq) throw std::invalid_argument("register too small");
  if (nq == 0) return;

  for (int j = 0; j < nq; ++j) {
    auto raw = grover_rudolph_layer_angles(probabilities, j);
    // index register = the j already-rotated qubits (little-endian slice of
    // the prefix value), target = next qubit down
    AngleSchedule sched = gray_transform(raw);
    Qubit target = reg[std::size_t(nq - 1 - j)];
    std::vector<Qubit> idx;
    for (int q = nq - j; q < nq; ++q) idx.push_back(reg[std::size_t(q)]);
    compile_ucr(b, sched, target, idx, std::nullopt);
  }
}

namespace {

void usp_rec(CircuitBuilder& b, unsigned long n, const std::vector<Qubit>& reg,
             std::vector<std::pair<Qubit, int>> ctrls) {
  if (n <= 1) return;
  const int bits = int(std::bit_width(n - 1));  // ceil(log2 n)
  if ((n & (n - 1)) == 0) {
    for (int i = 0; i < bits; ++i) b.h(reg[std::size_t(i)], ctrls);
    return;
  }
  const unsigned long half = 1ul << (bits - 1);
  const unsigned long n1 = n - half;
  const Qubit top = reg[std::size_t(bits - 1)];
  const double angle = 2.0 * std::acos(std::sqrt(double(half) / double(n)));
  b.ry(top, angle, ctrls);
  auto with0 = ctrls;
  with0.emplace_back(top, 0);
  for (int i = 0; i < bits - 1; ++i) b.h(reg[std::size_t(i)], with0);
  auto with1 = ctrls;
  with1.emplace_back(top, 1);
  const int b1 = n1 > 1 ? int(std::bit_width(n1 - 1)) : 0;
  std::vector<Qubit> sub(reg.begin(), reg.begin() + b1);
  usp_rec(b, n1, sub, with1);
}

}  // namespace

void compile_usp(CircuitBuilder& b, unsigned long n, const std::vector<Qubit>& reg) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const int bits = n > 1 ? int(std::bit_width(n - 1)) : 0;
  if (int(reg.size()) < bits) throw std::invalid_argument("register too small");
  usp_rec(b, n, std::vector<Qubit>(reg.begin(), reg.begin() + bits), {});
}

namespace {

void unary_rec(CircuitBuilder& b, std::optional<Literal> lit,
               const std::vector<Qubit>& bits, int bit, std::size_t prefix,
               std::size_t count,
               const std::function<void(std::size_t, std::optional<Literal>)>& fn) {
  if (bit < 0) {
    fn(prefix, lit);
    return;
  }
  const Qubit q = bits[std::size_t(bit)];
  const std::size_t half = std::size_t{1} << bit;
  const bool hi_live = prefix + half < count;
  if (!lit) {
    unary_rec(b, Literal{q, 0}, bits, bit - 1, prefix, count, fn);
    if (hi_live) unary_rec(b, Literal{q, 1}, bits, bit - 1, prefix + half, count, fn);
    return;
  }
  Qubit t = b.left_elbow(lit->first, lit->second, q, 0);
  unary_rec(b, Literal{t, 1}, bits, bit - 1, prefix, count, fn);
  if (hi_live) {
    b.cnot(lit->first, t, lit->second);  // t becomes AND(lit, q=1)
    unary_rec(b, Literal{t, 1}, bits, bit - 1, prefix + half, count, fn);
    b.cnot(lit->first, t, lit->second);  // restore
  }
  b.right_elbow(t, lit->first, lit->second, q, 0);
}

}  // namespace

void unary_iteration(
    CircuitBuilder& b, std::optional<Qubit> control,
    const std::vector<Qubit>& index_register, std::size_t count,
    const std::function<void(std::size_t, std::optional<Literal>)>& fn) {
  if (count == 0) return;
  const int bits = count > 1 ? int(std::bit_width(count - 1)) : 0;
  if (int(index_register.size()) < bits)
    throw std::invalid_argument("index register too small");
  std::optional<Literal> root;
  if (control) root = Literal{*control, 1};
  unary_rec(b, root, index_register, bits - 1, 0, count, fn);
}

}  // namespace lobe

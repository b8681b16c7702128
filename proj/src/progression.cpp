#include "specbench/progression.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "specbench/semantics.hpp"

namespace specbench {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Violated: return "violated";
    case Verdict::Open: return "open";
  }
  return "open";
}

namespace {

void flatten(Formula f, Op op, std::vector<Formula>& out) {
  if (f.op() == op) {
    flatten(f.lhs(), op, out);
    flatten(f.rhs(), op, out);
  } else {
    out.push_back(f);
  }
}

class Simplifier {
 public:
  Formula run(Formula f) {
    if (auto it = memo_.find(f); it != memo_.end()) return it->second;
    Formula out = step(f);
    memo_.emplace(f, out);
    return out;
  }

 private:
  Formula step(Formula f) {
    switch (f.op()) {
      case Op::True:
      case Op::False:
      case Op::Atom:
        return f;
      case Op::Not: {
        Formula a = run(f.lhs());
        if (a.is_true()) return Formula::ff();
        if (a.is_false()) return Formula::tt();
        if (a.op() == Op::Not) return a.lhs();
        return make_not(a);
      }
      case Op::And:
      case Op::Or:
        return junction(f);
      case Op::Next: {
        Formula a = run(f.lhs());
        if (a.is_true() || a.is_false()) return a;
        return make_next(a);
      }
      case Op::Eventually: {
        Formula a = run(f.lhs());
        if (a.is_true() || a.is_false() || a.op() == Op::Eventually) return a;
        return make_eventually(a);
      }
      case Op::Always: {
        Formula a = run(f.lhs());
        if (a.is_true() || a.is_false() || a.op() == Op::Always) return a;
        return make_always(a);
      }
      case Op::Until: {
        Formula a = run(f.lhs());
        Formula b = run(f.rhs());
        if (b.is_true() || b.is_false() || a.is_false() || a == b) return b;
        if (a.is_true()) return b.op() == Op::Eventually ? b : make_eventually(b);
        return make_until(a, b);
      }
      case Op::Implies: {
        Formula a = run(f.lhs());
        Formula b = run(f.rhs());
        if (a.is_false() || b.is_true() || a == b) return Formula::tt();
        if (a.is_true()) return b;
        if (b.is_false()) return run(make_not(a));
        return make_implies(a, b);
      }
    }
    return f;
  }

  Formula junction(Formula f) {
    const Op op = f.op();
    const bool is_and = op == Op::And;
    const Formula unit = is_and ? Formula::tt() : Formula::ff();
    const Formula zero = is_and ? Formula::ff() : Formula::tt();

    std::vector<Formula> raw;
    flatten(f, op, raw);
    std::vector<Formula> operands;
    for (Formula g : raw) {
      Formula s = run(g);
      if (s.op() == op) {
        flatten(s, op, operands);
      } else {
        operands.push_back(s);
      }
    }

    std::vector<Formula> kept;
    std::unordered_set<Formula> seen;
    for (Formula g : operands) {
      if (g == zero) return zero;
      if (g == unit) continue;
      if (seen.insert(g).second) kept.push_back(g);
    }
    for (Formula g : kept) {
      if (g.op() == Op::Not && seen.contains(g.lhs())) return zero;
    }

    // Absorption: drop an operand of the dual junction that contains another
    // operand of this junction.
    const Op dual = is_and ? Op::Or : Op::And;
    std::vector<Formula> absorbed;
    for (Formula g : kept) {
      bool drop = false;
      if (g.op() == dual) {
        std::vector<Formula> parts;
        flatten(g, dual, parts);
        drop = std::any_of(parts.begin(), parts.end(),
                           [&](Formula p) { return p != g && seen.contains(p); });
      }
      if (!drop) absorbed.push_back(g);
    }

    if (absorbed.empty()) return unit;
    std::sort(absorbed.begin(), absorbed.end(), FormulaLess{});
    return is_and ? make_and(absorbed) : make_or(absorbed);
  }

  std::unordered_map<Formula, Formula> memo_;
};

Formula progress_raw(Formula f, const LabelSet& sigma) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
      return f;
    case Op::Atom:
      return sigma.contains(Proposition(f.name())) ? Formula::tt() : Formula::ff();
    case Op::Not:
      return make_not(progress_raw(f.lhs(), sigma));
    case Op::And:
      return make_and(progress_raw(f.lhs(), sigma), progress_raw(f.rhs(), sigma));
    case Op::Or:
      return make_or(progress_raw(f.lhs(), sigma), progress_raw(f.rhs(), sigma));
    case Op::Implies:
      return make_implies(progress_raw(f.lhs(), sigma), progress_raw(f.rhs(), sigma));
    case Op::Next:
      return f.lhs();
    case Op::Until:
      return make_or(progress_raw(f.rhs(), sigma), make_and(progress_raw(f.lhs(), sigma), f));
    case Op::Eventually:
      return make_or(progress_raw(f.lhs(), sigma), f);
    case Op::Always:
      return make_and(progress_raw(f.lhs(), sigma), f);
  }
  return f;
}

}  // namespace

Formula simplify(Formula f) { return Simplifier{}.run(f); }

Formula progress(Formula f, const LabelSet& sigma) {
  if (!is_nnf(f)) f = nnf(f);
  return simplify(progress_raw(f, sigma));
}

Verdict verdict_of(Formula progressed) noexcept {
  if (progressed.is_true()) return Verdict::Satisfied;
  if (progressed.is_false()) return Verdict::Violated;
  return Verdict::Open;
}

ProgressionResult run_progression(Formula f, const std::vector<LabelSet>& trace) {
  ProgressionResult result;
  Formula cur = simplify(is_nnf(f) ? f : nnf(f));
  result.verdict = verdict_of(cur);
  if (result.verdict != Verdict::Open) result.steps_to_decision = 0;
  for (std::size_t i = 0; i < trace.size() && result.verdict == Verdict::Open; ++i) {
    cur = progress(cur, trace[i]);
    result.verdict = verdict_of(cur);
    if (result.verdict != Verdict::Open) result.steps_to_decision = i + 1;
  }
  result.residual = cur;
  return result;
}

}  // namespace specbench

#include "specbench/semantics.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace specbench {

namespace {

Formula negated_nnf(Formula f);

Formula positive_nnf(Formula f) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Atom:
      return f;
    case Op::Not:
      return negated_nnf(f.lhs());
    case Op::And:
      return make_and(positive_nnf(f.lhs()), positive_nnf(f.rhs()));
    case Op::Or:
      return make_or(positive_nnf(f.lhs()), positive_nnf(f.rhs()));
    case Op::Implies:
      return make_or(negated_nnf(f.lhs()), positive_nnf(f.rhs()));
    case Op::Next:
      return make_next(positive_nnf(f.lhs()));
    case Op::Eventually:
      return make_eventually(positive_nnf(f.lhs()));
    case Op::Always:
      return make_always(positive_nnf(f.lhs()));
    case Op::Until:
      return make_until(positive_nnf(f.lhs()), positive_nnf(f.rhs()));
  }
  return f;
}

// nnf(!f)
Formula negated_nnf(Formula f) {
  switch (f.op()) {
    case Op::True:
      return Formula::ff();
    case Op::False:
      return Formula::tt();
    case Op::Atom:
      return make_not(f);
    case Op::Not:
      return positive_nnf(f.lhs());
    case Op::And:
      return make_or(negated_nnf(f.lhs()), negated_nnf(f.rhs()));
    case Op::Or:
      return make_and(negated_nnf(f.lhs()), negated_nnf(f.rhs()));
    case Op::Implies:
      return make_and(positive_nnf(f.lhs()), negated_nnf(f.rhs()));
    case Op::Next:
      return make_next(negated_nnf(f.lhs()));
    case Op::Eventually:
      return make_always(negated_nnf(f.lhs()));
    case Op::Always:
      return make_eventually(negated_nnf(f.lhs()));
    case Op::Until: {
      Formula not_a = negated_nnf(f.lhs());
      Formula not_b = negated_nnf(f.rhs());
      return make_or(make_until(not_b, make_and(not_a, not_b)), make_always(not_b));
    }
  }
  return f;
}

class LassoEvaluator {
 public:
  explicit LassoEvaluator(const LassoTrace& w) : w_(w), n_(w.positions()) {}

  const std::vector<char>& eval(Formula f) {
    if (auto it = memo_.find(f); it != memo_.end()) return it->second;
    std::vector<char> v(n_, 0);
    switch (f.op()) {
      case Op::True:
        std::fill(v.begin(), v.end(), 1);
        break;
      case Op::False:
        break;
      case Op::Atom: {
        Proposition p(f.name());
        for (std::size_t i = 0; i < n_; ++i) v[i] = w_.at(i).contains(p);
        break;
      }
      case Op::Not: {
        const auto& a = eval(f.lhs());
        for (std::size_t i = 0; i < n_; ++i) v[i] = !a[i];
        break;
      }
      case Op::And: {
        auto a = eval(f.lhs());
        const auto& b = eval(f.rhs());
        for (std::size_t i = 0; i < n_; ++i) v[i] = a[i] && b[i];
        break;
      }
      case Op::Or: {
        auto a = eval(f.lhs());
        const auto& b = eval(f.rhs());
        for (std::size_t i = 0; i < n_; ++i) v[i] = a[i] || b[i];
        break;
      }
      case Op::Implies: {
        auto a = eval(f.lhs());
        const auto& b = eval(f.rhs());
        for (std::size_t i = 0; i < n_; ++i) v[i] = !a[i] || b[i];
        break;
      }
      case Op::Next: {
        const auto& a = eval(f.lhs());
        for (std::size_t i = 0; i < n_; ++i) v[i] = a[w_.successor(i)];
        break;
      }
      case Op::Until: {
        auto a = eval(f.lhs());
        const auto& b = eval(f.rhs());
        v = least_fixpoint(a, b);
        break;
      }
      case Op::Eventually: {
        std::vector<char> all(n_, 1);
        v = least_fixpoint(all, eval(f.lhs()));
        break;
      }
      case Op::Always: {
        // G a = greatest fixpoint of  v = a & X v
        const auto& a = eval(f.lhs());
        v = a;
        for (bool changed = true; changed;) {
          changed = false;
          for (std::size_t i = n_; i-- > 0;) {
            char next = static_cast<char>(a[i] && v[w_.successor(i)]);
            if (next != v[i]) {
              v[i] = next;
              changed = true;
            }
          }
        }
        break;
      }
    }
    return memo_.emplace(f, std::move(v)).first->second;
  }

 private:
  // a U b = least fixpoint of  v = b | (a & X v)
  std::vector<char> least_fixpoint(const std::vector<char>& a, const std::vector<char>& b) const {
    std::vector<char> v = b;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = n_; i-- > 0;) {
        char next = static_cast<char>(b[i] || (a[i] && v[w_.successor(i)]));
        if (next != v[i]) {
          v[i] = next;
          changed = true;
        }
      }
    }
    return v;
  }

  const LassoTrace& w_;
  std::size_t n_;
  std::unordered_map<Formula, std::vector<char>> memo_;
};

}  // namespace

Formula nnf(Formula f) { return positive_nnf(f); }

bool is_nnf(Formula f) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Atom:
      return true;
    case Op::Not:
      return f.lhs().is_atom();
    case Op::Implies:
      return false;
    default:
      break;
  }
  if (f.is_unary()) return is_nnf(f.lhs());
  return is_nnf(f.lhs()) && is_nnf(f.rhs());
}

bool holds_on_lasso(Formula f, const LassoTrace& w) {
  if (w.loop.empty()) throw std::invalid_argument("lasso loop must be non-empty");
  LassoEvaluator ev(w);
  return ev.eval(f)[0] != 0;
}

}  // namespace specbench

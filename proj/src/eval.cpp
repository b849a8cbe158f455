#include "lightfield/eval.hpp"

#include <cstdlib>
#include <span>
#include <vector>

namespace lightfield {

EvalBudget EvalBudget::from_env() {
  EvalBudget b;
  if (const char* v = std::getenv("LIGHTFIELD_BUDGET")) {
    char* end = nullptr;
    const auto n = std::strtoull(v, &end, 10);
    if (end != v && *end == '\0' && n > 0) b.max_steps = n;
  }
  return b;
}

BudgetExhausted::BudgetExhausted(std::uint64_t steps)
    : EvalError("evaluation budget of " + std::to_string(steps) + " steps exhausted") {}

ArityMismatch::ArityMismatch(std::size_t destructor, std::size_t tuple)
    : EvalError("destructor of arity " + std::to_string(destructor) + " applied to tuple of arity " +
                std::to_string(tuple)) {}

namespace {

bool is_redex(const Term& fn, const Term& arg) {
  return fn.is(TermKind::Abs) || (fn.is(TermKind::Destr) && arg.is(TermKind::Tuple));
}

}  // namespace

bool is_normal(const Term& t) {
  switch (t.kind()) {
    case TermKind::Bound:
    case TermKind::Free:
      return true;
    case TermKind::Abs:
    case TermKind::Destr:
      return is_normal(t.body());
    case TermKind::App:
      return !is_redex(t.fn(), t.arg()) && is_normal(t.fn()) && is_normal(t.arg());
    case TermKind::Tuple:
      for (const auto& k : t.items())
        if (!is_normal(k)) return false;
      return true;
  }
  return false;
}

Value as_value(const Term& t) {
  if (!is_normal(t)) throw std::invalid_argument("term is not in normal form");
  return Value(t);
}

class Evaluator {
 public:
  explicit Evaluator(EvalBudget budget) : budget_(budget) {}

  Value run(const Term& t) { return Value(norm(t)); }
  std::uint64_t steps() const { return steps_; }

 private:
  void tick() {
    if (++steps_ > budget_.max_steps) throw BudgetExhausted(budget_.max_steps);
  }

  struct DepthGuard {
    explicit DepthGuard(Evaluator& e) : ev(e) {
      if (++ev.depth_ > kMaxDepth) {
        --ev.depth_;
        throw BudgetExhausted(ev.budget_.max_steps);
      }
    }
    ~DepthGuard() { --ev.depth_; }
    Evaluator& ev;
  };

  Term norm(const Term& t) {
    DepthGuard guard(*this);
    tick();
    switch (t.kind()) {
      case TermKind::Bound:
      case TermKind::Free:
        return t;
      case TermKind::Abs: {
        Term b = norm(t.body());
        return b.same_node(t.body()) ? t : Term::lam_raw(t.name(), std::move(b));
      }
      case TermKind::Destr: {
        Term b = norm(t.body());
        return b.same_node(t.body()) ? t : Term::destr_raw(t.binders(), std::move(b));
      }
      case TermKind::Tuple: {
        std::vector<Term> xs;
        xs.reserve(t.items().size());
        for (const auto& k : t.items()) xs.push_back(norm(k));
        return Term::tuple(std::move(xs));
      }
      case TermKind::App: {
        Term f = norm(t.fn());
        if (f.is(TermKind::Abs) && f.body().fv_bound() == 0) {
          // x does not occur: V[N/x] = V
          tick();
          return f.body();
        }
        if (f.is(TermKind::Abs) && !uses_index0(f.body())) {
          tick();
          return shift_down(f.body());
        }
        Term a = norm(t.arg());
        return make_app(std::move(f), std::move(a));
      }
    }
    return t;
  }

  static bool uses_index0(const Term& t) {
    if (t.fv_bound() == 0) return false;
    switch (t.kind()) {
      case TermKind::Bound:
        return t.index() == 0;
      case TermKind::Abs:
        return uses_index(t.body(), 1);
      case TermKind::Destr:
        return uses_index(t.body(), static_cast<std::uint32_t>(t.arity()));
      default:
        for (const auto& k : t.items())
          if (uses_index0(k)) return true;
        return false;
    }
  }

  static bool uses_index(const Term& t, std::uint32_t i) {
    if (t.fv_bound() <= i) return false;
    switch (t.kind()) {
      case TermKind::Bound:
        return t.index() == i;
      case TermKind::Abs:
        return uses_index(t.body(), i + 1);
      case TermKind::Destr:
        return uses_index(t.body(), i + static_cast<std::uint32_t>(t.arity()));
      default:
        for (const auto& k : t.items())
          if (uses_index(k, i)) return true;
        return false;
    }
  }

  Term shift_down(const Term& body) {
    const std::vector<Term> none{Term::bound(0)};
    return subst(body, 0, none);
  }

  // Builds fn arg where both are normal, contracting the redex if one forms.
  Term make_app(Term f, Term a) {
    if (f.is(TermKind::Abs)) {
      tick();
      const std::vector<Term> vals{std::move(a)};
      return subst(f.body(), 0, vals);
    }
    if (f.is(TermKind::Destr) && a.is(TermKind::Tuple)) {
      if (f.arity() != a.arity()) throw ArityMismatch(f.arity(), a.arity());
      tick();
      std::vector<Term> vals(a.items().rbegin(), a.items().rend());
      return subst(f.body(), 0, vals);
    }
    return Term::app(std::move(f), std::move(a));
  }

  // Hereditary substitution of vals[k] for index depth+k into a normal term.
  Term subst(const Term& t, std::uint32_t depth, std::span<const Term> vals) {
    if (t.fv_bound() <= depth) return t;
    DepthGuard guard(*this);
    const auto m = static_cast<std::uint32_t>(vals.size());
    switch (t.kind()) {
      case TermKind::Bound: {
        const auto i = t.index();
        if (i < depth) return t;
        if (i < depth + m) return shift_indices(vals[i - depth], depth, 0);
        return Term::bound(i - m);
      }
      case TermKind::Free:
        return t;
      case TermKind::Abs:
        return Term::lam_raw(t.name(), subst(t.body(), depth + 1, vals));
      case TermKind::Destr:
        return Term::destr_raw(t.binders(), subst(t.body(), depth + static_cast<std::uint32_t>(t.arity()), vals));
      case TermKind::Tuple: {
        std::vector<Term> xs;
        xs.reserve(t.items().size());
        for (const auto& k : t.items()) xs.push_back(subst(k, depth, vals));
        return Term::tuple(std::move(xs));
      }
      case TermKind::App: {
        Term f = subst(t.fn(), depth, vals);
        if (f.is(TermKind::Abs) && !uses_index0(f.body())) {
          tick();
          return shift_down(f.body());
        }
        return make_app(std::move(f), subst(t.arg(), depth, vals));
      }
    }
    return t;
  }

  // Nesting bound for the recursive walk; deeper nesting only arises from
  // runaway untyped terms and is reported like an exhausted budget.
  static constexpr std::uint32_t kMaxDepth = 20'000;

  EvalBudget budget_;
  std::uint64_t steps_ = 0;
  std::uint32_t depth_ = 0;
};

Value eval(const Term& term, EvalBudget budget, EvalStats* stats) {
  Evaluator ev(budget);
  try {
    Value v = ev.run(term);
    if (stats) stats->steps = ev.steps();
    return v;
  } catch (...) {
    if (stats) stats->steps = ev.steps();
    throw;
  }
}

}  // namespace lightfield

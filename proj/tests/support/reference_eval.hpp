#pragma once

// Literal transcription of the big-step rules, used as an oracle for the
// hereditary evaluator: the argument is substituted unevaluated and the
// substituted body is normalized again from scratch.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lightfield/term.hpp"

namespace lightfield::testing {

class ReferenceEvaluator {
 public:
  explicit ReferenceEvaluator(std::uint64_t max_steps = 2'000'000) : max_steps_(max_steps) {}

  Term eval(const Term& t) {
    if (++steps_ > max_steps_) throw std::runtime_error("reference evaluator budget exhausted");
    switch (t.kind()) {
      case TermKind::Bound:
      case TermKind::Free:
        return t;
      case TermKind::Abs:
        return Term::lam_raw(t.name(), eval(t.body()));
      case TermKind::Destr:
        return Term::destr_raw(t.binders(), eval(t.body()));
      case TermKind::Tuple: {
        std::vector<Term> xs;
        for (const auto& k : t.items()) xs.push_back(eval(k));
        return Term::tuple(std::move(xs));
      }
      case TermKind::App: {
        Term f = eval(t.fn());
        if (f.is(TermKind::Abs)) return eval(plain_subst(f.body(), 0, {t.arg()}));
        Term a = eval(t.arg());
        if (f.is(TermKind::Destr) && a.is(TermKind::Tuple)) {
          if (a.arity() != f.arity()) throw std::runtime_error("arity mismatch");
          std::vector<Term> vals(a.items().rbegin(), a.items().rend());
          return eval(plain_subst(f.body(), 0, vals));
        }
        return Term::app(f, a);
      }
    }
    return t;
  }

  std::uint64_t steps() const { return steps_; }

 private:
  static Term plain_subst(const Term& t, std::uint32_t depth, const std::vector<Term>& vals) {
    const auto m = static_cast<std::uint32_t>(vals.size());
    switch (t.kind()) {
      case TermKind::Bound:
        if (t.index() < depth) return t;
        if (t.index() < depth + m) return shift_indices(vals[t.index() - depth], depth);
        return Term::bound(t.index() - m);
      case TermKind::Free:
        return t;
      case TermKind::Abs:
        return Term::lam_raw(t.name(), plain_subst(t.body(), depth + 1, vals));
      case TermKind::Destr:
        return Term::destr_raw(t.binders(), plain_subst(t.body(), depth + static_cast<std::uint32_t>(t.arity()), vals));
      case TermKind::App:
        return Term::app(plain_subst(t.fn(), depth, vals), plain_subst(t.arg(), depth, vals));
      case TermKind::Tuple: {
        std::vector<Term> xs;
        for (const auto& k : t.items()) xs.push_back(plain_subst(k, depth, vals));
        return Term::tuple(std::move(xs));
      }
    }
    return t;
  }

  std::uint64_t max_steps_;
  std::uint64_t steps_ = 0;
};

}  // namespace lightfield::testing

#include "lightfield/patterns.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

namespace lightfield {

const char* pattern_name(Pattern p) {
  switch (p) {
    case Pattern::Map: return "Map";
    case Pattern::Fold: return "Fold";
    case Pattern::MapState: return "MapState";
    case Pattern::MapThread: break;
  }
  return "MapThread";
}

std::vector<std::string> pattern_holes(Pattern p) {
  switch (p) {
    case Pattern::Map: return {"F"};
    case Pattern::Fold: return {"F", "S", "Cast0"};
    case Pattern::MapState: return {"F", "Cast0"};
    case Pattern::MapThread: break;
  }
  return {"F"};
}

ParameterNotClosed::ParameterNotClosed(const std::string& hole)
    : std::invalid_argument("pattern parameter " + hole + " is not closed") {}

MissingParameter::MissingParameter(const std::string& hole)
    : std::invalid_argument("pattern parameter " + hole + " is missing") {}

Term instantiate(const PatternInstance& inst, const Library& lib) {
  Term t = lib.get(pattern_name(inst.pattern));
  for (const auto& hole : pattern_holes(inst.pattern)) {
    auto it = inst.params.find(hole);
    if (it == inst.params.end()) throw MissingParameter(hole);
    const Term filler = lib.resolve(it->second);
    if (!filler.closed()) throw ParameterNotClosed(hole);
    t = substitute(t, hole, filler);
  }
  for (const auto& [hole, _] : inst.params) {
    const auto holes = pattern_holes(inst.pattern);
    if (std::find(holes.begin(), holes.end(), hole) == holes.end())
      throw std::invalid_argument(std::string(pattern_name(inst.pattern)) + " has no hole " + hole);
  }
  return t;
}

EquivError::EquivError(const std::string& input, const std::string& cause)
    : std::runtime_error("on input " + input + ": " + cause), input_(input) {}

std::vector<std::pair<std::string, Term>> generate_inputs(InputFamily family, std::size_t max_size, Alphabet alphabet) {
  std::vector<Trit> trits{Trit::tt, Trit::ff};
  if (alphabet == Alphabet::Trits) trits.push_back(Trit::bot);
  std::vector<std::pair<std::string, Term>> out;
  if (family == InputFamily::Words) {
    std::vector<TritWord> layer{TritWord{}};
    for (std::size_t len = 0; len <= max_size; ++len) {
      std::vector<TritWord> next;
      for (const auto& w : layer) {
        out.emplace_back("[" + to_string(w) + "]", encode_word(w));
        if (len < max_size)
          for (Trit t : trits) {
            TritWord x = w;
            x.trits.push_back(t);
            next.push_back(std::move(x));
          }
      }
      layer = std::move(next);
    }
    return out;
  }
  std::vector<TritPair> elems;
  for (Trit a : trits)
    for (Trit b : trits) elems.emplace_back(a, b);
  std::vector<PairWord> layer{PairWord{}};
  for (std::size_t len = 0; len <= max_size; ++len) {
    std::vector<PairWord> next;
    for (const auto& w : layer) {
      std::string desc = "[";
      for (std::size_t i = 0; i < w.size(); ++i)
        desc += std::string(i ? " " : "") + "<" + trit_char(w[i].first) + "," + trit_char(w[i].second) + ">";
      out.emplace_back(desc + "]", encode_pair_word(w));
      if (len < max_size)
        for (const auto& e : elems) {
          PairWord x = w;
          x.push_back(e);
          next.push_back(std::move(x));
        }
    }
    layer = std::move(next);
  }
  return out;
}

EquivReport equiv_check(const Term& lhs, const Term& rhs, const EquivOptions& opts) {
  if (!lhs.closed() || !rhs.closed()) throw std::invalid_argument("equiv_check needs closed terms");
  const auto inputs = generate_inputs(opts.family, opts.max_size, opts.alphabet);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(opts.threads ? opts.threads : std::thread::hardware_concurrency(),
                                      static_cast<unsigned>(inputs.size())));
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::atomic<std::size_t> first_bad{kNone};
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(inputs.size());

  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= inputs.size() || i > first_bad.load()) return;
      try {
        const Term a = eval(Term::app(lhs, inputs[i].second), opts.budget).term();
        const Term b = eval(Term::app(rhs, inputs[i].second), opts.budget).term();
        if (a == b) continue;
      } catch (...) {
        errors[i] = std::current_exception();
      }
      std::size_t cur = first_bad.load();
      while (i < cur && !first_bad.compare_exchange_weak(cur, i)) {
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned k = 1; k < workers; ++k) pool.emplace_back(work);
  work();
  pool.clear();

  EquivReport r;
  const std::size_t bad = first_bad.load();
  if (bad == kNone) {
    r.pass = true;
    r.cases = inputs.size();
    return r;
  }
  const auto& [desc, input] = inputs[bad];
  if (errors[bad]) {
    try {
      std::rethrow_exception(errors[bad]);
    } catch (const std::exception& e) {
      throw EquivError(desc, e.what());
    }
  }
  r.cases = bad + 1;
  r.counterexample = Counterexample{desc, eval(Term::app(lhs, input), opts.budget).term(),
                                    eval(Term::app(rhs, input), opts.budget).term()};
  return r;
}

Term tos_from_fold(const Library& lib) {
  return instantiate({Pattern::Fold,
                      {{"F", parse_term("\\e. \\s. \\t. \\c. c <e, s>")},
                       {"S", parse_term("sNil")},
                       {"Cast0", parse_term("\\x. x")}}},
                     lib);
}

Term proj_from_map(const Library& lib) {
  return instantiate({Pattern::Map, {{"F", parse_term("\\<a, b>. a")}}}, lib);
}

Term map_of(const Term& h, const Library& lib) { return instantiate({Pattern::Map, {{"F", h}}}, lib); }

Term map_from_fold(const Term& h, const Library& lib) {
  const Term step = substitute(parse_term("\\e. \\p. \\f. \\x. f (H e) (p f x)"), "H", lib.resolve(h));
  return instantiate({Pattern::Fold, {{"F", step}, {"S", parse_term("wNil")}, {"Cast0", parse_term("\\x. x")}}}, lib);
}

}  // namespace lightfield

#include "lightfield/field.hpp"

#include <bit>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

namespace lightfield {

int Poly::degree() const { return bits == 0 ? -1 : 63 - std::countl_zero(bits); }

Poly Poly::from_string(const std::string& msb_first) {
  if (msb_first.empty() || msb_first.size() > 64) throw std::invalid_argument("bad polynomial '" + msb_first + "'");
  Poly p;
  for (char c : msb_first) {
    if (c != '0' && c != '1') throw std::invalid_argument("bad polynomial '" + msb_first + "'");
    p.bits = (p.bits << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return p;
}

std::string Poly::to_string() const {
  if (bits == 0) return "0";
  std::string s;
  for (int i = degree(); i >= 0; --i) s += ((bits >> i) & 1u) ? '1' : '0';
  return s;
}

Poly poly_add(Poly a, Poly b) { return {a.bits ^ b.bits}; }

Poly poly_mul(Poly a, Poly b) {
  if (a.degree() + b.degree() > 63) throw std::overflow_error("product degree exceeds 63");
  Poly r;
  for (int i = 0; i <= b.degree(); ++i)
    if ((b.bits >> i) & 1u) r.bits ^= a.bits << i;
  return r;
}

Poly poly_mod(Poly a, Poly p) {
  const int dp = p.degree();
  if (dp < 0) throw std::domain_error("reduction modulo zero");
  while (a.degree() >= dp) a.bits ^= p.bits << (a.degree() - dp);
  return a;
}

Poly poly_sqr(Poly a) { return poly_mul(a, a); }

bool is_irreducible(Poly p) {
  const int d = p.degree();
  if (d < 1) return false;
  for (std::uint64_t q = 2; Poly{q}.degree() <= d / 2; ++q)
    if (poly_mod(p, Poly{q}).bits == 0) return false;
  return true;
}

WrongLength::WrongLength(std::size_t expected, std::size_t got)
    : FieldError("expected a word of length " + std::to_string(expected) + ", got " + std::to_string(got)) {}

ParamsRef FieldParams::make(std::size_t n, const std::string& p_bits) {
  if (n < 2 || n > 16) throw FieldError("field degree must lie in 2..16");
  const Poly p = Poly::from_string(p_bits);
  if (p_bits.size() != n + 1 || p.degree() != static_cast<int>(n) || (p.bits & 1u) == 0)
    throw FieldError("modulus " + p_bits + " is not a degree-" + std::to_string(n) + " polynomial with constant term");
  if (!is_irreducible(p)) throw FieldError("modulus " + p_bits + " is reducible");
  auto fp = std::make_shared<FieldParams>();
  fp->n = n;
  fp->p = p;
  fp->n_numeral = encode_numeral(n);
  for (char c : p_bits) fp->p_hat.trits.push_back(trit_from_char(c));
  fp->p_hat.trits.insert(fp->p_hat.trits.end(), n - 2, Trit::bot);
  return fp;
}

std::vector<ParamsRef> FieldParams::load(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<ParamsRef> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::size_t n = 0;
    std::string p;
    std::istringstream fields(line);
    std::string f;
    while (fields >> f) {
      if (f.rfind("n=", 0) == 0) n = std::stoul(f.substr(2));
      else if (f.rfind("p=", 0) == 0) p = f.substr(2);
    }
    out.push_back(make(n, p));
  }
  return out;
}

std::vector<ParamsRef> FieldParams::defaults() { return load(Library::data_dir() + "/fields.txt"); }

FieldElement::FieldElement(ParamsRef params, std::vector<bool> coeffs_lsb_first)
    : params_(std::move(params)), coeffs_(std::move(coeffs_lsb_first)) {
  if (coeffs_.size() != params_->n) throw WrongLength(params_->n, coeffs_.size());
}

FieldElement FieldElement::from_poly(ParamsRef params, Poly a) {
  if (a.degree() >= static_cast<int>(params->n)) a = poly_mod(a, params->p);
  std::vector<bool> c(params->n);
  for (std::size_t i = 0; i < params->n; ++i) c[i] = (a.bits >> i) & 1u;
  return FieldElement(std::move(params), std::move(c));
}

FieldElement FieldElement::from_string(ParamsRef params, const std::string& msb_first) {
  return from_word(std::move(params), word_from_string(msb_first));
}

FieldElement FieldElement::from_word(ParamsRef params, const TritWord& w) {
  if (w.size() != params->n) throw WrongLength(params->n, w.size());
  std::vector<bool> c(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Trit t = w.trits[w.size() - 1 - i];
    if (t == Trit::bot) throw FieldError("field element word contains bot: " + lightfield::to_string(w));
    c[i] = t == Trit::tt;
  }
  return FieldElement(std::move(params), std::move(c));
}

Poly FieldElement::poly() const {
  Poly p;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i]) p.bits |= std::uint64_t{1} << i;
  return p;
}

TritWord FieldElement::word() const {
  TritWord w;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) w.trits.push_back(*it ? Trit::tt : Trit::ff);
  return w;
}

std::string FieldElement::to_string() const { return lightfield::to_string(word()); }

namespace {

Term with_params(const Term& t, const FieldParams& p) {
  return substitute(substitute(t, "modN", p.n_numeral), "modP", encode_word(p.p_hat));
}

Term run(const Term& t, FieldTrace* trace) {
  EvalStats stats;
  Value v = eval(t, EvalBudget::from_env(), &stats);
  if (trace) trace->steps += stats.steps;
  return v.term();
}

void same_field(const FieldElement& a, const FieldElement& b) {
  if (a.params_ref() != b.params_ref() && !(a.params().p == b.params().p)) throw ParamsMismatch();
}

}  // namespace

FieldTerms::FieldTerms(ParamsRef params, const Library& lib) : params_(std::move(params)) {
  const auto& p = *params_;
  add_ = lib.get("bfAdd");
  mod_ = with_params(lib.get("wMod"), p);
  mod_pre_ = with_params(
      lib.resolve(parse_term("\\d. wRev (wProj (modN (\\l. msModFun l <bot, ff>) (wModBase (wCast0 d))))")), p);
  sqr_word_ = lib.get("wSqr");
  sqr_ = with_params(lib.get("bfSqr"), p);
  mult_word_ = lib.get("wMult");
  mult_ = with_params(lib.get("bfMult"), p);
}

const FieldTerms& FieldTerms::cached(const ParamsRef& params) {
  static std::mutex mu;
  static std::map<ParamsRef, std::unique_ptr<FieldTerms>> table;
  std::lock_guard lock(mu);
  auto& slot = table[params];
  if (!slot) slot = std::make_unique<FieldTerms>(params);
  return *slot;
}

FieldElement bf_add(const FieldElement& a, const FieldElement& b, FieldTrace* trace) {
  same_field(a, b);
  const auto& ft = FieldTerms::cached(a.params_ref());
  return FieldElement::from_word(a.params_ref(),
                                 decode_word(run(Term::apps(ft.bf_add(), {encode_word(a.word()), encode_word(b.word())}), trace)));
}

TritWord w_mod(const ParamsRef& params, const TritWord& d, FieldTrace* trace) {
  if (d.size() != 2 * params->n) throw WrongLength(2 * params->n, d.size());
  const auto& ft = FieldTerms::cached(params);
  if (trace) trace->pre_drop = decode_word(run(Term::app(ft.w_mod_pre_drop(), encode_word(d)), nullptr));
  TritWord r = decode_word(run(Term::app(ft.w_mod(), encode_word(d)), trace));
  if (r.size() != params->n) throw WrongLength(params->n, r.size());
  return r;
}

FieldElement bf_sqr(const FieldElement& a, FieldTrace* trace) {
  const auto& ft = FieldTerms::cached(a.params_ref());
  if (trace) trace->unreduced = decode_word(run(Term::app(ft.w_sqr(), encode_word(a.word())), nullptr));
  return FieldElement::from_word(a.params_ref(), decode_word(run(Term::app(ft.bf_sqr(), encode_word(a.word())), trace)));
}

FieldElement bf_mult(const FieldElement& a, const FieldElement& b, FieldTrace* trace) {
  same_field(a, b);
  const auto& ft = FieldTerms::cached(a.params_ref());
  const std::vector<Term> args{encode_word(a.word()), encode_word(b.word())};
  if (trace) trace->unreduced = decode_word(run(Term::apps(ft.w_mult(), args), nullptr));
  return FieldElement::from_word(a.params_ref(), decode_word(run(Term::apps(ft.bf_mult(), args), trace)));
}

}  // namespace lightfield

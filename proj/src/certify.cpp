#include "lightfield/certify.hpp"

#include <regex>
#include <sstream>

#include "lightfield/syntax.hpp"

namespace lightfield {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) s.replace(p, from.size(), to);
  return s;
}

std::string paras(std::size_t n) { return std::string(n, '$'); }

std::string tuple_text(const std::string& item, std::size_t t) {
  std::string s;
  for (std::size_t i = 0; i < t; ++i) s += (i ? " * " : "") + item;
  return s;
}

std::string boxed(const std::string& s, std::size_t n) {
  std::string out = s;
  for (std::size_t i = 0; i < n; ++i) out = "(box " + out + ")";
  return out;
}

// lam x. (prev x) applied to the zero-cast of the argument
std::string cast_step(const std::string& prev, const std::string& cast0) {
  return "(lam p (ap (lift 1 " + prev + ") (ap " + cast0 + " p)))";
}

}  // namespace

std::vector<CatalogueEntry> load_catalogue(const std::string& path) {
  std::vector<CatalogueEntry> out;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto cols = split(t, '|');
    if (cols.size() < 4 || cols.size() > 5)
      throw std::runtime_error(path + ":" + std::to_string(no) + ": expected name | source | type | cert [| params]");
    CatalogueEntry e;
    e.name = cols[0];
    e.source = cols[1];
    e.type_text = cols[2];
    e.cert = cols[3];
    try {
      e.type = parse_type(e.type_text);
    } catch (const std::exception& ex) {
      throw std::runtime_error(path + ":" + std::to_string(no) + ": " + ex.what());
    }
    if (cols.size() == 5 && !cols[4].empty()) {
      for (const auto& kv : split(cols[4], ';')) {
        if (kv.empty()) continue;
        const auto eq = kv.find('=');
        if (eq == std::string::npos || kv[0] != '@')
          throw std::runtime_error(path + ":" + std::to_string(no) + ": parameter must read @K=text");
        e.params.emplace_back(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string family_script(const std::string& name) {
  static const std::regex family(R"((bDup|bCast|tCast|wCast)(\d+))");
  static const std::regex dup(R"(wDup(\d+)_(\d+))");
  std::smatch m;
  if (std::regex_match(name, m, family)) {
    const std::size_t k = std::stoul(m[2]);
    const std::string f = m[1];
    if (f == "bCast") {
      const std::string t = paras(k + 1) + "B2";
      return "(lam b (ap (inst b \"" + t + "\") " + boxed("tt", k + 1) + " " + boxed("ff", k + 1) + " " +
             boxed("bot", k + 1) + "))";
    }
    if (f == "bDup") {
      if (k < 2) throw std::invalid_argument("bDup needs at least two copies");
      std::string s = "(lam b (ap (inst b \"" + tuple_text("B2", k) + "\")";
      for (const char* c : {"tt", "ff", "bot"}) {
        s += " (tup";
        for (std::size_t i = 0; i < k; ++i) s += std::string(" ") + c;
        s += ")";
      }
      return s + "))";
    }
    if (k == 0) throw std::invalid_argument(name + " has a hand-written certificate");
    return cast_step(f + std::to_string(k - 1), f + "0");
  }
  if (std::regex_match(name, m, dup)) {
    const std::size_t t = std::stoul(m[1]), k = std::stoul(m[2]);
    if (t < 2) throw std::invalid_argument("wDup needs at least two copies");
    if (k > 0) return cast_step("wDup" + std::to_string(t) + "_" + std::to_string(k - 1), "wCast0");
    const std::string tw = tuple_text("W2", t);
    std::string xs, arms;
    for (std::size_t i = 1; i <= t; ++i) xs += (i > 1 ? " x" : "x") + std::to_string(i);
    for (const char* c : {"tt", "ff", "bot"}) {
      arms += " (tlam (" + xs + ") (tup";
      for (std::size_t i = 1; i <= t; ++i) arms += std::string(" (ap wSuc ") + c + " x" + std::to_string(i) + ")";
      arms += "))";
    }
    std::string nils;
    for (std::size_t i = 0; i < t; ++i) nils += " wNil";
    return "(lam l (cut y (ap (inst l \"" + tw + "\") (lam b (ap (inst b \"" + tw + " -o " + tw + "\")" + arms +
           "))) (cut n (the \"$(" + tw + ")\" (box (tup" + nils + "))) (box (ap y n)))))";
  }
  throw std::invalid_argument("no generator for " + name);
}

std::string certificate_text(const CatalogueEntry& e, const std::string& data_dir) {
  if (e.cert == "gen") return family_script(e.name);
  std::string text = read_file(data_dir + "/" + e.cert);
  // longest keys first so @F does not clobber @FF
  auto params = e.params;
  std::sort(params.begin(), params.end(), [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  for (const auto& [k, v] : params) text = replace_all(text, k, v);
  if (text.find('@') != std::string::npos) throw std::runtime_error(e.name + ": unfilled template parameter");
  return text;
}

bool CertifyReport::all_accepted() const {
  for (const auto& r : results)
    if (!r.report.accepted) return false;
  return true;
}

const CertResult* CertifyReport::find(const std::string& name) const {
  for (const auto& r : results)
    if (r.name == name) return &r;
  return nullptr;
}

LemmaTable catalogue_lemmas(const std::vector<CatalogueEntry>& entries) {
  LemmaTable t;
  for (const auto& e : entries) t.insert_or_assign(e.name, LemmaInfo{e.type, false});
  return t;
}

namespace {

Term resolve_all(const Library& lib, const Term& t) {
  Term out = t;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& n : out.free_vars()) {
      Term def;
      try {
        def = lib.lookup(n);
      } catch (const std::exception&) {
        continue;
      }
      out = substitute(out, n, def);
      changed = true;
    }
  }
  return out;
}

CheckReport reject(std::string node, std::string rule, std::string why) {
  CheckReport r;
  r.node = std::move(node);
  r.rule = std::move(rule);
  r.condition = std::move(why);
  return r;
}

}  // namespace

CertifyReport certify_library(const Library& lib, const std::string& data_dir) {
  CertifyReport out;
  LemmaTable lemmas;
  for (const auto& e : load_catalogue(data_dir + "/catalogue.txt")) {
    CertResult res;
    res.name = e.name;
    if (e.cert == "axiom") {
      res.axiom = true;
      res.report.accepted = true;
      lemmas.insert_or_assign(e.name, LemmaInfo{e.type, false});
      out.results.push_back(std::move(res));
      continue;
    }
    try {
      DrvFile f = parse_drv(certificate_text(e, data_dir));
      if (f.name && *f.name != e.name) {
        res.report = reject("root", "certificate", "certificate names " + *f.name);
      } else if (f.claimed && !type_eq(*f.claimed, e.type)) {
        res.report = reject("root", "certificate", "certificate type differs from the catalogue");
      } else {
        f.claimed = e.type;
        Derivation d;
        res.report = check_file(f, lemmas, &d);
        res.nodes = res.report.nodes;
        if (res.report.accepted) {
          const Term want = resolve_all(lib, lib.lookup(e.name));
          const Term got = resolve_all(lib, d.concl->subject);
          if (!alpha_eq(want, got)) res.report = reject("root", rule_name(d.rule), "subject is not the library definition");
        }
      }
    } catch (const std::exception& ex) {
      res.report = reject("root", "certificate", ex.what());
    }
    if (res.report.accepted) lemmas.insert_or_assign(e.name, LemmaInfo{e.type, !res.report.flags.empty()});
    out.results.push_back(std::move(res));
  }
  return out;
}

}  // namespace lightfield

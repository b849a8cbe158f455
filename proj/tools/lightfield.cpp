#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "lightfield/certify.hpp"
#include "lightfield/drv.hpp"
#include "lightfield/field.hpp"
#include "lightfield/patterns.hpp"
#include "lightfield/selftest.hpp"
#include "lightfield/syntax.hpp"

using namespace lightfield;

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsage = 2;

// Input the user got wrong; reported with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool porcelain = false;

// Definitions of the file on top of the standard library; names left free
// are tried as generated library families.
Term load_main(const std::string& path) {
  const auto& lib = Library::standard();
  Program prog;
  try {
    prog = parse_program(read_file(path));
  } catch (const SyntaxError& e) {
    throw UsageError(path + ":" + e.what());
  }
  if (!prog.main) throw UsageError(path + ": no main term");
  Environment env = lib.environment();
  env.load(prog);
  Term t = env.resolve(*prog.main);
  for (const auto& name : t.free_vars()) {
    try {
      t = substitute(t, name, lib.lookup(name));
    } catch (const std::out_of_range&) {
    }
  }
  return t;
}

int cmd_eval(const std::string& path, bool stats) {
  const Term t = load_main(path);
  EvalStats st;
  const Value v = eval(t, EvalBudget::from_env(), &st);
  if (porcelain) {
    std::cout << "normal-form\t" << print_term(v.term()) << "\nsteps\t" << st.steps << "\n";
  } else {
    std::cout << print_term(v.term()) << "\n";
    if (stats) std::cout << "steps: " << st.steps << "\n";
  }
  return kOk;
}

std::vector<CatalogueEntry> catalogue() { return load_catalogue(Library::data_dir() + "/catalogue.txt"); }

void print_report(const std::string& label, const CheckReport& r) {
  if (porcelain) {
    if (r.accepted) {
      std::cout << "accept\t" << label << "\t" << r.nodes << "\n";
    } else {
      std::cout << "reject\t" << label << "\t" << r.node << "\t" << r.rule << "\t" << r.condition << "\n";
    }
    for (const auto& f : r.flags) std::cout << "flag\t" << label << "\t" << f << "\n";
    return;
  }
  if (r.accepted) {
    std::cout << "Accept " << label << " (" << r.nodes << " nodes)\n";
  } else {
    std::cout << "Reject " << label << " at node " << r.node << " (" << r.rule << "): " << r.condition << "\n";
  }
  for (const auto& f : r.flags) std::cout << "  relies on: " << f << "\n";
}

int cmd_check(const std::string& path, bool show) {
  DrvFile f;
  try {
    f = parse_drv(read_file(path));
  } catch (const SExprError& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  }
  Derivation d;
  CheckReport r;
  try {
    r = check_file(f, catalogue_lemmas(catalogue()), &d);
  } catch (const MalformedDerivation& e) {
    throw UsageError(path + ": malformed derivation at " + e.path() + ": " + e.what());
  }
  print_report(f.name.value_or(path), r);
  if (r.accepted && show) std::cout << print_derivation(d) << "\n";
  return r.accepted ? kOk : kDomainFailure;
}

int cmd_certify(const std::string& emit_dir) {
  const std::string dir = Library::data_dir();
  const auto rep = certify_library(Library::standard(), dir);
  for (const auto& r : rep.results) {
    if (r.axiom) {
      if (porcelain) {
        std::cout << "axiom\t" << r.name << "\n";
      } else {
        std::cout << "Axiom  " << r.name << "\n";
      }
      continue;
    }
    print_report(r.name, r.report);
  }
  if (!emit_dir.empty()) {
    std::filesystem::create_directories(emit_dir);
    const auto entries = catalogue();
    const auto lemmas = catalogue_lemmas(entries);
    for (const auto& e : entries) {
      const auto* r = rep.find(e.name);
      if (e.cert == "axiom" || !r || !r->report.accepted) continue;
      DrvFile f = parse_drv(certificate_text(e, dir));
      f.claimed = e.type;
      Derivation d;
      check_file(f, lemmas, &d);
      std::ofstream out(emit_dir + "/" + e.name + ".drv");
      out << "(certificate " << e.name << " :type \"" << e.type_text << "\"\n" << print_derivation(d) << ")\n";
    }
  }
  return rep.all_accepted() ? kOk : kDomainFailure;
}

int cmd_equiv(const std::string& lhs, const std::string& rhs, const std::string& inputs, std::size_t max_size,
              const std::string& alphabet, unsigned threads) {
  EquivOptions o;
  o.family = inputs == "words" ? InputFamily::Words : InputFamily::PairLists;
  o.alphabet = alphabet == "bits" ? Alphabet::Bits : Alphabet::Trits;
  o.max_size = max_size;
  o.threads = threads;
  const auto r = equiv_check(load_main(lhs), load_main(rhs), o);
  if (r.pass) {
    if (porcelain) {
      std::cout << "pass\t" << r.cases << "\n";
    } else {
      std::cout << "equivalent on " << r.cases << " inputs\n";
    }
    return kOk;
  }
  const auto& c = *r.counterexample;
  if (porcelain) {
    std::cout << "fail\t" << c.input << "\t" << print_term(c.lhs) << "\t" << print_term(c.rhs) << "\n";
  } else {
    std::cout << "counterexample " << c.input << "\n  lhs: " << print_term(c.lhs) << "\n  rhs: " << print_term(c.rhs)
              << "\n";
  }
  return kDomainFailure;
}

ParamsRef field_params(std::size_t n, const std::string& poly) {
  try {
    if (!poly.empty()) return FieldParams::make(n, poly);
    for (const auto& p : FieldParams::defaults())
      if (p->n == n) return p;
  } catch (const FieldError& e) {
    throw UsageError(e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("no default modulus for n=" + std::to_string(n) + "; pass --poly");
}

int cmd_field(const std::string& op, std::size_t n, const std::string& poly, const std::vector<std::string>& operands,
              bool trace) {
  const auto p = field_params(n, poly);
  const std::size_t arity = op == "add" || op == "mul" ? 2 : 1;
  if (operands.size() != arity)
    throw UsageError("field " + op + " takes " + std::to_string(arity) + " operand(s), got " +
                     std::to_string(operands.size()));
  FieldTrace tr;
  std::string result;
  Poly expected;
  try {
    if (op == "mod") {
      const auto& s = operands[0];
      if (s.find_first_not_of("01") != std::string::npos) throw UsageError("operand must be a bit string: " + s);
      const TritWord w = w_mod(p, word_from_string(s), &tr);
      result = to_string(w);
      expected = poly_mod(Poly::from_string(s), p->p);
    } else {
      std::vector<FieldElement> xs;
      for (const auto& s : operands) xs.push_back(FieldElement::from_string(p, s));
      if (op == "add") {
        result = bf_add(xs[0], xs[1], &tr).to_string();
        expected = poly_add(xs[0].poly(), xs[1].poly());
      } else if (op == "mul") {
        result = bf_mult(xs[0], xs[1], &tr).to_string();
        expected = poly_mod(poly_mul(xs[0].poly(), xs[1].poly()), p->p);
      } else {
        result = bf_sqr(xs[0], &tr).to_string();
        expected = poly_mod(poly_sqr(xs[0].poly()), p->p);
      }
    }
  } catch (const WrongLength& e) {
    throw UsageError(e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const bool agrees = FieldElement::from_word(p, word_from_string(result)).poly() == expected;
  if (porcelain) {
    std::cout << "result\t" << result << "\n";
    if (trace) {
      if (tr.unreduced) std::cout << "unreduced\t" << to_string(*tr.unreduced) << "\n";
      if (tr.pre_drop) std::cout << "pre-drop\t" << to_string(*tr.pre_drop) << "\n";
      std::cout << "steps\t" << tr.steps << "\n";
    }
    if (!agrees) std::cout << "mismatch\t" << FieldElement::from_poly(p, expected).to_string() << "\n";
  } else {
    std::cout << result << "\n";
    if (trace) {
      if (tr.unreduced) std::cout << "unreduced: " << to_string(*tr.unreduced) << "\n";
      if (tr.pre_drop) std::cout << "before drop: " << to_string(*tr.pre_drop) << "\n";
      std::cout << "steps: " << tr.steps << "\n";
    }
    if (!agrees)
      std::cerr << "mismatch: oracle gives " << FieldElement::from_poly(p, expected).to_string() << "\n";
  }
  return agrees ? kOk : kDomainFailure;
}

int cmd_selftest(const std::vector<int>& only) {
  const SelftestOptions opts;
  bool all = true;
  for (const auto& c : acceptance_criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto r = run_criterion(c, opts);
    all = all && r.pass;
    if (porcelain) {
      std::cout << (r.pass ? "pass" : "fail") << "\t" << r.id << "\t" << r.name << "\t" << r.detail << "\n";
    } else {
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.name << ": " << r.detail << "\n";
    }
    std::cout.flush();
  }
  return all ? kOk : kDomainFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Church-encoded binary field arithmetic with checked typing certificates"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--porcelain", porcelain, "Line-oriented, tab-separated output");

  std::string file, lhs, rhs, emit_dir, inputs = "words", alphabet = "trits", op, poly;
  bool stats = false, show = false, trace = false;
  std::size_t max_size = 8, n = 0;
  unsigned threads = 0;
  std::vector<std::string> operands;
  std::vector<int> only;

  auto* eval_cmd = app.add_subcommand("eval", "Normalize the main term of a program");
  eval_cmd->add_option("file", file, "Program (.lam)")->required()->check(CLI::ExistingFile);
  eval_cmd->add_flag("--stats", stats, "Print the step count");

  auto* check_cmd = app.add_subcommand("check", "Check a typing derivation");
  check_cmd->add_option("file", file, "Derivation (.drv)")->required()->check(CLI::ExistingFile);
  check_cmd->add_flag("--explicit", show, "Print the explicit derivation when accepted");

  auto* certify_cmd = app.add_subcommand("certify", "Check every library certificate");
  certify_cmd->add_option("--emit", emit_dir, "Write explicit derivations to this directory");

  auto* equiv_cmd = app.add_subcommand("equiv", "Compare two programs on all small inputs");
  equiv_cmd->add_option("lhs", lhs)->required()->check(CLI::ExistingFile);
  equiv_cmd->add_option("rhs", rhs)->required()->check(CLI::ExistingFile);
  equiv_cmd->add_option("--inputs", inputs)->check(CLI::IsMember({"words", "pairlists"}))->capture_default_str();
  equiv_cmd->add_option("--max-size", max_size)->capture_default_str();
  equiv_cmd->add_option("--alphabet", alphabet)->check(CLI::IsMember({"bits", "trits"}))->capture_default_str();
  equiv_cmd->add_option("--threads", threads, "0 uses every core")->capture_default_str();

  auto* field_cmd = app.add_subcommand("field", "Field arithmetic through the Church encodings");
  field_cmd->add_option("op", op)->required()->check(CLI::IsMember({"add", "mul", "sqr", "mod"}));
  field_cmd->add_option("--n", n, "Extension degree")->required()->check(CLI::Range(2, 31));
  field_cmd->add_option("--poly", poly, "Modulus bits, most significant first");
  field_cmd->add_option("operands", operands, "Bit strings, most significant first")->required();
  field_cmd->add_flag("--trace", trace, "Print intermediate words and the step count");

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the acceptance criteria");
  selftest_cmd->add_option("--only", only, "Criterion numbers")->check(CLI::Range(1, 7));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*eval_cmd) return cmd_eval(file, stats);
    if (*check_cmd) return cmd_check(file, show);
    if (*certify_cmd) return cmd_certify(emit_dir);
    if (*equiv_cmd) return cmd_equiv(lhs, rhs, inputs, max_size, alphabet, threads);
    if (*field_cmd) return cmd_field(op, n, poly, operands, trace);
    if (*selftest_cmd) return cmd_selftest(only);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
  return kUsage;
}

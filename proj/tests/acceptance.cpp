// One line per acceptance criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cstdio>
#include <map>

#include "lightfield/selftest.hpp"
#include "support/gf2_model.hpp"

using namespace lightfield;

namespace {

// Wall-clock limits in seconds; criteria without an entry are untimed.
const std::map<int, double> kTimeLimit{{1, 5.0}, {2, 120.0}, {3, 600.0}};

FieldOracle model_oracle() {
  using namespace testing;
  return {
      [](Poly a, Poly b) { return poly_of(xor_bits(bits_of(a), bits_of(b))); },
      [](Poly a, Poly b) { return poly_of(school_mul(bits_of(a), bits_of(b))); },
      [](Poly a, Poly p) { return poly_of(long_div_rem(bits_of(a), bits_of(p))); },
  };
}

}  // namespace

int main() {
  SelftestOptions opts;
  opts.oracle = model_oracle();
  int failed = 0;
  for (const auto& c : acceptance_criteria()) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_criterion(c, opts);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = r.pass;
    std::string timing = std::to_string(secs).substr(0, std::to_string(secs).find('.') + 3) + " s";
    if (auto it = kTimeLimit.find(c.id); it != kTimeLimit.end()) {
      pass = pass && secs < it->second;
      timing += ", limit " + std::to_string(static_cast<int>(it->second)) + " s";
    }
    std::printf("%s %d %s: %s (%s)\n", pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(), timing.c_str());
    std::fflush(stdout);
    failed += pass ? 0 : 1;
  }
  return failed ? 1 : 0;
}

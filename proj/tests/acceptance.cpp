// One line per acceptance criterion; exit status 1 if any is red.
#include <cstdio>
#include <map>

#include "ncp/suites.hpp"

using namespace ncp;

namespace {

const char* kTitles[] = {"",
                         "Weyl relations (exact)",
                         "relations as maps",
                         "equivariance and constraint",
                         "oracle equivalence",
                         "commutative limit",
                         "torsion limit",
                         "Sklyanin calibration",
                         "sheaf track",
                         "Poisson pairing",
                         "Ore lemma (exact)"};

// distance from failing, as a fraction of the bound
double margin(const Check& c) {
  if (c.kind == Check::Exact) return c.value == 0 ? 0 : 1e300;
  if (c.kind == Check::Above) return c.value > 0 ? c.bound / c.value : 1e300;
  return c.value / c.bound;
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  std::map<int, std::vector<Check>> by;
  for (auto& name : suite_names())
    for (auto& c : run_suite(name).checks) by[c.criterion].push_back(c);
  int red = 0;
  for (int k = 1; k <= 10; ++k) {
    const auto& cs = by[k];
    bool ok = !cs.empty();
    const Check* worst = nullptr;
    for (auto& c : cs) {
      ok = ok && c.pass();
      if (!worst || margin(c) > margin(*worst)) worst = &c;
    }
    red += !ok;
    std::printf("criterion %2d: %s  %-28s %2zu checks", k, ok ? "PASS" : "FAIL", kTitles[k], cs.size());
    if (worst) {
      if (worst->kind == Check::Exact) std::printf("  tightest: %s = %g (exact)", worst->name.c_str(), worst->value);
      else std::printf("  tightest: %s = %.3g (%s %.0e)", worst->name.c_str(), worst->value,
                       worst->kind == Check::Above ? ">" : "<", worst->bound);
      if (!worst->detail.empty()) std::printf(" [%s]", worst->detail.c_str());
    }
    std::printf("\n");
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d of 10 criteria green in %.1f s\n", 10 - red, secs);
  if (secs >= 60) return 1;
  return red ? 1 : 0;
}

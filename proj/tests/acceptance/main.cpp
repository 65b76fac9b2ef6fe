// Acceptance gate: runs every verification suite and prints one line per
// criterion.  Exit code 0 only when every criterion passes.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "solitonflow/checks.hpp"

namespace {

struct CriterionStatus {
  int claims = 0;
  int failed = 0;
  std::string worst;
};

const char* criterion_label(int k) {
  switch (k) {
    case 1: return "triple-warped reference run reproduction";
    case 2: return "first-integral residuals along 21 runs";
    case 3: return "monotonicity of the potential/curvature monitors";
    case 4: return "phase-space stationary structure and locus invariance";
    case 5: return "z-system vs phase-space oracle equivalence";
    case 6: return "ricci-flat convergence and conical growth";
    case 7: return "two-summands evidence runs";
    case 8: return "integrator convergence order";
  }
  return "?";
}

}  // namespace

int main() {
  using namespace solitonflow;

  std::vector<checks::SuiteResult> results;
  for (const auto& name : checks::suite_names()) {
    std::fprintf(stderr, "running suite %s...\n", name.c_str());
    try {
      results.push_back(checks::run_suite(name));
    } catch (const std::exception& e) {
      std::fprintf(stderr, "suite %s raised: %s\n", name.c_str(), e.what());
      return 1;
    }
  }

  std::map<int, CriterionStatus> by_criterion;
  for (const auto& suite : results) {
    for (const auto& c : suite.claims) {
      int k = 0;
      if (c.name.size() > 2 && c.name[0] == 'A') k = c.name[1] - '0';
      auto& st = by_criterion[k];
      ++st.claims;
      if (!c.pass) {
        ++st.failed;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s = %.6g", c.name.c_str(), c.value);
        st.worst = buf;
      }
    }
  }

  bool all_pass = true;
  for (int k = 1; k <= 8; ++k) {
    const auto it = by_criterion.find(k);
    if (it == by_criterion.end()) {
      std::printf("FAIL criterion %d: %s (no claims ran)\n", k, criterion_label(k));
      all_pass = false;
      continue;
    }
    const auto& st = it->second;
    if (st.failed == 0) {
      std::printf("PASS criterion %d: %s (%d claims)\n", k, criterion_label(k), st.claims);
    } else {
      std::printf("FAIL criterion %d: %s (%d/%d claims failed; e.g. %s)\n", k,
                  criterion_label(k), st.failed, st.claims, st.worst.c_str());
      all_pass = false;
    }
  }

  for (const auto& suite : results)
    std::fprintf(stderr, "suite %-18s %s  (%.2f s)\n", suite.name.c_str(),
                 suite.pass() ? "PASS" : "FAIL", suite.wall_seconds);

  if (!all_pass) {
    std::printf("acceptance: FAIL\n");
    for (const auto& suite : results)
      for (const auto& c : suite.claims)
        if (!c.pass)
          std::printf("  failed %s value=%.9g band=[%.6g, %.6g] %s\n", c.name.c_str(),
                      c.value, c.lo, c.hi, c.detail.c_str());
    return 1;
  }
  std::printf("acceptance: PASS\n");
  return 0;
}

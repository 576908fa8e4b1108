// Runs the fifteen-point verification suite and prints one line per
// criterion. Thresholds are pinned inside acceptance_suite; the process
// exits nonzero when any criterion fails.

#include "stc/reports.hpp"

#include <cstdio>

int main() {
  const std::uint64_t seed = 20240817;
  auto results = stc::acceptance_suite(seed);
  bool all = true;
  for (const auto& r : results) {
    std::printf("%s  %2d  %-50s  residual %.3e  %6.2f s  %s\n",
                r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.residual,
                r.seconds, r.detail.c_str());
    all = all && r.pass;
  }
  std::printf("%s (%zu criteria, seed %llu)\n", all ? "ALL PASS" : "FAILURES PRESENT",
              results.size(), (unsigned long long)seed);
  return all ? 0 : 1;
}

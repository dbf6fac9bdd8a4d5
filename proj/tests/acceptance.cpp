// Prints one PASS/FAIL line per acceptance criterion. A criterion passes
// only if its check succeeds within the time limit.

#include <chrono>
#include <cstdio>
#include <exception>

#include "criteria.hpp"

int main() {
  int failures = 0;
  for (auto& c : wtest::criteria()) {
    auto start = std::chrono::steady_clock::now();
    wtest::CriterionResult r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = r.pass && seconds < wtest::kTimeLimitSeconds;
    if (r.pass && !ok) r.detail += " (over the time limit)";
    failures += ok ? 0 : 1;
    std::printf("criterion %d %-28s %s  %.2fs  %s\n", c.number, c.title.c_str(), ok ? "PASS" : "FAIL",
                seconds, r.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}

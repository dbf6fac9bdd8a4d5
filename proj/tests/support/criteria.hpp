#pragma once

#include <functional>
#include <string>
#include <vector>

namespace wtest {

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int number;
  std::string title;
  std::function<CriterionResult()> run;
};

/// Generated cases per property suite.
constexpr int kPropertyCases = 500;
/// Events per script in the equivalence suites and the soundness smoke.
constexpr int kEquivalenceEvents = 5;
constexpr int kSoundnessEvents = 200;
constexpr int kDbPairs = 100;
/// Wall-clock budget for each criterion.
constexpr double kTimeLimitSeconds = 5.0;

/// The acceptance criteria, in order.
const std::vector<Criterion>& criteria();

// Individual suites, shared with the unit tests.
CriterionResult check_example1_identity();
CriterionResult check_example2_toggle();
CriterionResult check_buddy_end_to_end();
CriterionResult check_event_safety();
CriterionResult check_command_semantics();
CriterionResult check_equivalences();
CriterionResult check_effect_laws();
CriterionResult check_modelgen_golden();
CriterionResult check_db_round_trip();

// Parts of the property suites with a configurable case count.
CriterionResult check_empty_widget_equivalence(int cases);
CriterionResult check_body_split_equivalence(int cases);
CriterionResult check_do_union(int cases);
CriterionResult check_widget_erasure(int cases);
CriterionResult check_soundness(int accepted_programs, int events);

}  // namespace wtest

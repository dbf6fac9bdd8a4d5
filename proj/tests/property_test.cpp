#include <doctest.h>

#include "criteria.hpp"
#include "fixtures.hpp"
#include "random_backend.hpp"
#include "widget/syntax.hpp"
#include "widget/typecheck.hpp"

using namespace widget;

namespace {

// The acceptance binary runs the full counts; these keep the unit run quick.
constexpr int kSmallCases = 60;

void require_pass(const wtest::CriterionResult& r) {
  INFO(r.detail);
  CHECK(r.pass);
}

// Runs `src` against random events and reports whether an event went
// unhandled.
bool hits_no_handler(const std::string& src) {
  wtest::TempDir dir;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto run = wtest::run_random(parse_program(src), seed, 20, dir.path());
    if (run.no_handler) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("property") {
  TEST_CASE("an empty widget behaves as its parent") { require_pass(wtest::check_empty_widget_equivalence(kSmallCases)); }

  TEST_CASE("moving bindings into a nested widget preserves behavior") {
    require_pass(wtest::check_body_split_equivalence(kSmallCases));
  }

  TEST_CASE("a do block raises the union of its commands' events") { require_pass(wtest::check_do_union(kSmallCases)); }

  TEST_CASE("a widget raises what its handlers do not erase") { require_pass(wtest::check_widget_erasure(kSmallCases)); }

  TEST_CASE("accepted programs never meet an unhandled event") { require_pass(wtest::check_soundness(20, 50)); }

  // Both programs were accepted by an earlier version of the checker and
  // fault at run time, so the checker must reject them.
  TEST_CASE("regression: a replacement erased to Top still raises") {
    auto src =
        "val main = widget s (screen(1,1,1,1, widget (button('a')) { push(i:int):<Top> = button('b') }))"
        " { move(x:int,y:int):<Top> = do { return s } }";
    CHECK_FALSE(check_runnable(parse_program(src)).empty());
    CHECK(hits_no_handler(src));
  }

  TEST_CASE("regression: a replacement's events bypass its owner") {
    auto src =
        "val main = widget s (screen(1,1,1,1, widget (button('a')) { push(i:int):<Button> = button('b') }))"
        " { move(x:int,y:int):<Top> = do { return s } }";
    CHECK_FALSE(check_runnable(parse_program(src)).empty());
    CHECK(hits_no_handler(src));
  }
}

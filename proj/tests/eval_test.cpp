#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "widget/eval.hpp"
#include "widget/syntax.hpp"

using namespace widget;

namespace {

ValueP eval_expr(Evaluator& ev, const std::string& src) { return force(ev.reduce(desugar(parse_expr(src)))); }

std::int64_t as_int(const ValueP& v) {
  auto i = v->as<val::Int>();
  REQUIRE(i);
  return i->value;
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("arithmetic, comparison and string concatenation") {
    Evaluator ev(Program{});
    CHECK(as_int(eval_expr(ev, "1 + 2 * 3")) == 7);
    CHECK(as_int(eval_expr(ev, "10 - 4 - 3")) == 3);
    CHECK(eval_expr(ev, "1 + 1 = 2")->as<val::Bool>()->value);
    CHECK(eval_expr(ev, "'CONTACT: ' + 'a@b'")->as<val::Str>()->value == "CONTACT: a@b");
    CHECK(as_int(eval_expr(ev, "if 1 = 2 then 5 else 6")) == 6);
  }

  TEST_CASE("has_contact agrees with a direct search") {
    Evaluator ev(wtest::load_app("buddy.wdg"));
    struct Case {
      std::vector<std::string> vals;
      std::string addr;
    };
    std::vector<Case> cases{{{}, "a"}, {{"a"}, "a"}, {{"b"}, "a"}, {{"b", "c", "a"}, "a"}, {{"b", "c"}, "d"}};
    for (auto& c : cases) {
      std::string list = "[";
      for (size_t i = 0; i < c.vals.size(); ++i) {
        if (i) list += ",";
        list += "{key='k" + std::to_string(i) + "';val='" + c.vals[i] + "'}";
      }
      list += c.vals.empty() ? "][Record]" : "]";
      auto got = eval_expr(ev, "has_contact('" + c.addr + "'," + list + ")");
      bool expected = std::any_of(c.vals.begin(), c.vals.end(), [&](auto& v) { return v == c.addr; });
      CAPTURE(list);
      CHECK(got->as<val::Bool>()->value == expected);
    }
  }

  TEST_CASE("a do block reduces to a command without performing it") {
    Evaluator ev(Program{});
    auto v = eval_expr(ev, "do { l:!int <- loc[int](1) return 0 }");
    CHECK(v->as<val::DoCmd>());
    CHECK(is_command(*v));
    CHECK(eval_expr(ev, "raise z(1)")->as<val::RaiseCmd>());
    CHECK(eval_expr(ev, "widget (button('a')) {}")->as<val::WidgetCmd>());
  }

  TEST_CASE("reducing the same global twice gives the same value") {
    Evaluator ev(wtest::load_app("example2.wdg"));
    CHECK(ev.global("main") == ev.global("main"));
    CHECK(is_command(*force(ev.entry())));
  }

  TEST_CASE("recursive functions reduce through their fix point") {
    Evaluator ev(parse_program("rec fun fact(n:int):int = if n = 0 then 1 else n * fact(n - 1)\n"));
    CHECK(as_int(force(ev.apply(ev.global("fact"), {v_int(10)}))) == 3628800);
  }

  TEST_CASE("letrec binds mutually recursive values") {
    Evaluator ev(Program{});
    auto v = eval_expr(ev,
                       "letrec even:(int)->bool = fun(n:int):bool if n = 0 then true else odd(n - 1);"
                       " odd:(int)->bool = fun(n:int):bool if n = 0 then false else even(n - 1) in even(7)");
    CHECK_FALSE(v->as<val::Bool>()->value);
  }

  TEST_CASE("records compare structurally, widgets by identity") {
    Evaluator ev(Program{});
    CHECK(values_equal(eval_expr(ev, "{key='a';val='b'}"), eval_expr(ev, "{key='a';val='b'}")));
    CHECK_FALSE(values_equal(eval_expr(ev, "{key='a';val='b'}"), eval_expr(ev, "{key='a';val='c'}")));
    auto w = eval_expr(ev, "widget (button('a')) {}");
    CHECK_FALSE(values_equal(w, eval_expr(ev, "widget (button('a')) {}")));
    CHECK(values_equal(w, w));
  }
}

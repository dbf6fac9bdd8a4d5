#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "widget/syntax.hpp"
#include "widget/typecheck.hpp"

using namespace widget;

namespace {

TypeP infer_in(TypeChecker& tc, const std::string& src) { return tc.infer(desugar(parse_expr(src))); }

bool any_mentions(const std::vector<Diagnostic>& ds, const std::string& text) {
  return std::any_of(ds.begin(), ds.end(), [&](auto& d) { return d.message.find(text) != std::string::npos; });
}

std::vector<Diagnostic> runnable(const std::string& src) { return check_runnable(parse_program(src)); }

}  // namespace

TEST_SUITE("typecheck") {
  TEST_CASE("a button whose push raises add has Buddy's DoAdd type") {
    TypeChecker tc(wtest::load_app("buddy.wdg"));
    auto t = infer_in(tc, "widget (button('add')) { push(i:int):<*> = raise add() }");
    auto c_type = tc.expand(t);
    auto c = c_type->as<ty::Command>();
    REQUIRE(c);
    CHECK(c->effects.empty());
    CHECK(tc.compatible(parse_type("DoAdd"), c->yield));
    CHECK(tc.compatible(c->yield, parse_type("DoAdd")));
  }

  TEST_CASE("raise yields the unit value and raises its event") {
    TypeChecker tc;
    auto c_type = tc.expand(infer_in(tc, "raise notify('x')"));
    auto c = c_type->as<ty::Command>();
    REQUIRE(c);
    CHECK(tc.equivalent(c->yield, t_unit()));
    REQUIRE(c->effects.size() == 1);
    CHECK(pretty_print(c->effects[0]) == "notify(str)");
  }

  TEST_CASE("conditionals combine command types and their effects") {
    auto a = parse_type("<Button> raises x()");
    auto b = parse_type("<Label> raises y()");
    auto c_type = combine(a, b);
    auto c = c_type->as<ty::Command>();
    REQUIRE(c);
    CHECK(c->effects.size() == 2);
    CHECK(type_compatible(parse_type("Button+Label"), c->yield));
    CHECK(pretty_print(*combine(t_int(), t_str())) == "int+str");
  }

  TEST_CASE("union types are equal up to ordering") {
    TypeChecker tc(wtest::load_app("buddy.wdg"));
    CHECK(tc.equivalent(parse_type("Notify+Main"), parse_type("Main+Notify")));
    CHECK(tc.equivalent(parse_type("(str)-><Notify+Main>"), parse_type("(str)-><Main+Notify>")));
    CHECK_FALSE(tc.equivalent(parse_type("Notify+Main"), parse_type("Add+Main")));
  }

  TEST_CASE("list elements share one type") {
    TypeChecker tc;
    CHECK(tc.equivalent(infer_in(tc, "[1,2,3]"), t_list(t_int())));
    CHECK_THROWS_AS(infer_in(tc, "[1,'a']"), TypeError);
  }

  TEST_CASE("Buddy's has_contact checks as a recursive predicate") {
    TypeChecker tc(wtest::load_app("buddy.wdg"));
    CHECK(tc.equivalent(tc.global("has_contact"), parse_type("(str,[Record])->bool")));
  }

  TEST_CASE("Buddy and both examples are runnable") {
    for (auto name : {"example1.wdg", "example2.wdg", "buddy.wdg", "commands.wdg"}) {
      CAPTURE(name);
      auto ds = check_runnable(wtest::load_app(name));
      CHECK(ds.empty());
    }
  }

  TEST_CASE("a handled event is erased, an unhandled one reaches the entry") {
    CHECK(runnable("val main = widget s (button('a')) { push(i:int):<Top> = do { return s } }").empty());
    auto ds = runnable("val main = widget s (screen(1,1,1,1,button('a'))) { push(i:int):<Top> = do { return s } }");
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].message == "unhandled event move(int,int) reaches entry main");
  }

  TEST_CASE("a declared self type must cover every escaping event") {
    auto ds = runnable(
        "type T = Widget(Button) {}\n"
        "val main:<T> = widget s:T (button('a')) {}\n");
    CHECK(any_mentions(ds, "unhandled event push(int) escapes widget T"));
  }

  TEST_CASE("removing a Buddy handler is reported with the event signature") {
    auto src = wtest::read_text(wtest::app_path("buddy.wdg"));
    auto no_notify = wtest::remove_handler(src, "notify(addr:str):<Notify + Main>");
    CHECK(any_mentions(check_runnable(parse_program(no_notify)), "notify(str)"));
    auto no_move = wtest::remove_handler(src, "move(x:int,y:int):<Add>");
    CHECK(any_mentions(check_runnable(parse_program(no_move)), "move(int,int)"));
  }

  TEST_CASE("the events of a replacement widget reach the owner's container") {
    auto ds = runnable(
        "val main = widget s (screen(1,1,1,1, widget (button('a')) { push(i:int):<Button> = button('b') }))"
        " { move(x:int,y:int):<Top> = do { return s } }");
    CHECK(any_mentions(ds, "push(int)"));
    CHECK(runnable("val main = widget s (screen(1,1,1,1, widget (button('a')) { push(i:int):<Button> = "
                   "button('b') })) { move(x:int,y:int):<Top> = do { return s }; push(i:int):<Top> = "
                   "do { return s } }")
              .empty());
  }

  TEST_CASE("only widgets raising nothing may be erased to Top") {
    auto ds = runnable(
        "val main = widget s (screen(1,1,1,1, widget (button('a')) { push(i:int):<Top> = button('b') }))"
        " { move(x:int,y:int):<Top> = do { return s } }");
    CHECK(any_mentions(ds, "expected <Top> but found <Button>"));
    TypeChecker tc;
    CHECK(tc.compatible(t_top(), parse_type("Label")));
    CHECK_FALSE(tc.compatible(t_top(), parse_type("Button")));
  }

  TEST_CASE("an event name raised with two signatures is rejected") {
    TypeChecker tc;
    CHECK_THROWS_AS(infer_in(tc, "do { a:* <- raise z(1); b:* <- raise z('x') return 0 }"), TypeError);
  }

  TEST_CASE("the entry must be a command yielding a widget") {
    CHECK(any_mentions(runnable("val main = 3"), "not a command yielding a widget"));
    CHECK(any_mentions(runnable("val other = 3"), "entry main is not defined"));
  }

  TEST_CASE("a handler must produce a widget or only raise") {
    auto ds = runnable("val main = widget s (label('a')) { push(i:int):<int> = do { return 1 } }");
    CHECK(any_mentions(ds, "must return a command yielding a widget"));
  }

  TEST_CASE("field references reach through commands to the yielded widget") {
    TypeChecker tc(wtest::load_app("buddy.wdg"));
    TypeEnv env{{"s", parse_type("<AddScreen>", false)}};
    auto t = tc.infer(env, desugar(parse_expr("s.name")));
    CHECK(tc.equivalent(t, t_cmd(t_str())));
  }

  TEST_CASE("polymorphic builtins instantiate from their arguments") {
    TypeChecker tc;
    auto c_type = tc.expand(infer_in(tc, "screen(50,50,50,50,button('PUSHME'))"));
    auto c = c_type->as<ty::Command>();
    REQUIRE(c);
    CHECK(pretty_print(*c->yield) == "Screen[Button]");
    CHECK(tc.equivalent(infer_in(tc, "loc[int](3)"), parse_type("<!int>")));
  }

  TEST_CASE("inferred global types of Buddy's screens") {
    auto r = check_program(wtest::load_app("buddy.wdg"));
    REQUIRE(r.ok());
    TypeChecker tc(wtest::load_app("buddy.wdg"));
    CHECK(tc.equivalent(r.globals.at("main"), parse_type("()-><Main>")));
    CHECK(tc.equivalent(r.globals.at("add_screen"), parse_type("(Main,DB[str,str],Notifier)-><Add>")));
    CHECK(tc.equivalent(r.globals.at("notify_screen"), parse_type("(Main,str,Notifier)-><Notify>")));
  }
}

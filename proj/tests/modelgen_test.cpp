#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "fixtures.hpp"
#include "widget/modelgen.hpp"
#include "widget/syntax.hpp"
#include "widget/typecheck.hpp"

using namespace widget;
using nlohmann::json;

namespace {

json buddy_model_json() {
  std::ifstream in(wtest::app_path("buddy-model.json"));
  return json::parse(in);
}

const TopDef* def_named(const Program& p, const std::string& name) {
  for (auto& d : p.defs)
    if (d.name == name) return &d;
  return nullptr;
}

bool contains(const std::string& text, const std::string& part) { return text.find(part) != std::string::npos; }

std::string model_error(const json& j) {
  try {
    load_model(j);
  } catch (const ModelError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("modelgen") {
  TEST_CASE("the Buddy model loads with its classes and state machine") {
    auto m = load_model(buddy_model_json());
    CHECK(m.initial == "Main");
    CHECK(m.states.size() == 4);
    CHECK(m.transitions.size() == 10);
    auto phone = m.find("Phone");
    REQUIRE(phone);
    CHECK(phone->external);
    CHECK(phone->superclass == "Window");
    CHECK(m.find("Nope") == nullptr);
  }

  TEST_CASE("generated Buddy matches the golden program up to its holes") {
    auto gen = generate(load_model(buddy_model_json()));
    auto produced = parse_program(gen.text());
    auto golden = wtest::load_app("buddy-model.golden.wdg");
    CHECK_FALSE(produced == golden);
    CHECK(normalize_holes(produced, gen.todos) == normalize_holes(golden, gen.todos));
    CHECK(check_program(produced).ok());
    CHECK(check_program(golden).ok());
  }

  TEST_CASE("Main is a phone with a clock, two buttons and a notifier") {
    auto gen = generate(load_model(buddy_model_json()));
    auto text = gen.text();
    CHECK(contains(text, "widget self:Main (phone[Clock,DoAdd+DoDel](title,clock(x,y),[add(),del()]))"));
    CHECK(contains(text, "notifier:Notifier <- notifier(port);"));
    CHECK(contains(text, "notify(addr:str):<Notify+Main>"));
    CHECK(contains(text, "if has_contact(addr,contacts) then notify_screen(addr,notifier,self) else do { return self }"));
    auto program = parse_program(text);
    auto main = def_named(program, "main");
    REQUIRE(main);
    std::vector<std::string> params;
    for (auto& p : main->params) params.push_back(p.name);
    std::sort(params.begin(), params.end());
    CHECK(params == std::vector<std::string>{"contacts_db", "port", "title", "x", "y"});
  }

  TEST_CASE("states reached from Main close over what their invariants name") {
    auto text = generate(load_model(buddy_model_json())).text();
    CHECK(contains(text, "fun add_screen(db:DB[str,str],notifier:Notifier,m:Main):<Add>"));
    CHECK(contains(text, "fun notify_screen(addr:str,notifier:Notifier,m:Main):<Notify>"));
    CHECK(contains(text, "add():<Add> = add_screen(contacts_db,notifier,self);"));
    CHECK(contains(text, "back():<Main> = do { return m };"));
  }

  TEST_CASE("every handler without a transition is listed as a hole") {
    auto gen = generate(load_model(buddy_model_json()));
    CHECK(gen.todos.size() == 9);
    for (auto& t : {"DoAdd.push", "Add.notify", "Add.move", "Notify.move"})
      CHECK(std::find(gen.todos.begin(), gen.todos.end(), t) != gen.todos.end());
    CHECK(std::find(gen.todos.begin(), gen.todos.end(), "Main.move") == gen.todos.end());
  }

  TEST_CASE("normalizing holes replaces only the listed bodies") {
    auto p = parse_program(
        "type T = Widget(Button) { push:(int)-><T> }\n"
        "val main:<T> = widget self:T (button('a')) { push(i:int):<T> = do { x:int <- loc[int](1) return self } }\n");
    auto same = normalize_holes(p, {"Other.push"});
    CHECK(same == p);
    auto holes = normalize_holes(p, {"T.push"});
    CHECK_FALSE(holes == p);
    CHECK(contains(pretty_print(holes), "push(i:int):<T> = do { return self }"));
  }

  TEST_CASE("broken models are rejected with every problem listed") {
    auto j = buddy_model_json();
    j["statemachine"]["initial"] = "";
    CHECK(contains(model_error(j), "no initial state"));

    j = buddy_model_json();
    j["classes"].push_back({{"name", "Ghost"}, {"superclass", "Spirit"}});
    j["statemachine"]["transitions"].push_back({{"source", "Main"}, {"event", "fly"}, {"target", "Moon"}});
    auto msg = model_error(j);
    CHECK(contains(msg, "class Ghost extends unknown class Spirit"));
    CHECK(contains(msg, "transition target Moon is not a state"));
    CHECK(contains(msg, "has no fly handler on Main"));

    CHECK_FALSE(model_error(json::array()).empty());
    CHECK_THROWS_AS(load_model_file("/nonexistent/model.json"), ModelError);
  }
}

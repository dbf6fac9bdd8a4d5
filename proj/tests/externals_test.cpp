#include <doctest.h>

#include "fixtures.hpp"
#include "widget/externals.hpp"
#include "widget/runtime.hpp"
#include "widget/syntax.hpp"

using namespace widget;

namespace {

std::string str_of(const ValueP& v) { return v->as<val::Str>()->value; }

ProviderSim registered_sim() {
  ProviderSim sim;
  sim.range = 10;
  sim.self_address = "me@x";
  sim.self_registered = true;
  return sim;
}

ProviderDirective peer_move(std::int64_t x, std::int64_t y) {
  return {ProviderDirective::Kind::PeerMove, "p@x", x, y};
}

}  // namespace

TEST_SUITE("externals") {
  TEST_CASE("db fields escape tab, newline and backslash") {
    for (std::string s : {"plain", "a\tb", "line\nbreak", "back\\slash", "\\t", ""}) {
      CAPTURE(s);
      auto text = encode_field(v_str(s));
      CHECK(text.find('\t') == std::string::npos);
      CHECK(text.find('\n') == std::string::npos);
      CHECK(str_of(decode_field(text, t_str())) == s);
    }
    CHECK(decode_field(encode_field(v_int(-12)), t_int())->as<val::Int>()->value == -12);
    CHECK(decode_field(encode_field(v_bool(true)), t_bool())->as<val::Bool>()->value);
  }

  TEST_CASE("db updates overwrite, removes delete, and both persist") {
    wtest::TempDir dir;
    DbState db;
    db.file = dir.path() / "c.db";
    db.key_type = t_str();
    db.val_type = t_str();
    db.update(v_str("sally"), v_str("s@x"));
    db.update(v_str("tony"), v_str("t@x"));
    db.update(v_str("sally"), v_str("s2@x"));
    REQUIRE(db.records.size() == 2);
    CHECK(str_of(db.records[0].second) == "s2@x");
    CHECK(db.remove(v_str("tony")));
    CHECK_FALSE(db.remove(v_str("nobody")));
    db.save();
    DbState again;
    again.file = db.file;
    again.key_type = t_str();
    again.val_type = t_str();
    again.load();
    REQUIRE(again.records.size() == 1);
    CHECK(str_of(again.records[0].first) == "sally");
    auto list = again.records_value()->as<val::List>();
    REQUIRE(list);
    CHECK(list->elems.size() == 1);
  }

  TEST_CASE("range includes its boundary") {
    ProviderSim sim;
    sim.range = 5;
    CHECK(sim.in_range(std::pair<std::int64_t, std::int64_t>{3, 4}, {0, 0}));
    CHECK_FALSE(sim.in_range(std::pair<std::int64_t, std::int64_t>{4, 4}, {0, 0}));
    CHECK_FALSE(sim.in_range(std::nullopt, {0, 0}));
  }

  TEST_CASE("a peer notifies once per entry into range") {
    auto sim = registered_sim();
    CHECK(provider_step(sim, {ProviderDirective::Kind::PeerRegister, "p@x"}).empty());
    CHECK(provider_step(sim, peer_move(100, 100)).empty());
    auto in = provider_step(sim, peer_move(3, 3));
    REQUIRE(in.size() == 1);
    CHECK(in[0].name == "notify");
    CHECK(str_of(in[0].args.at(0)) == "p@x");
    CHECK(provider_step(sim, peer_move(4, 4)).empty());
    CHECK(provider_step(sim, peer_move(50, 0)).empty());
    CHECK(provider_step(sim, peer_move(1, 0)).size() == 1);
  }

  TEST_CASE("moving this phone toward a peer notifies too") {
    auto sim = registered_sim();
    provider_step(sim, {ProviderDirective::Kind::PeerRegister, "p@x"});
    provider_step(sim, peer_move(40, 40));
    CHECK(provider_self_move(sim, 38, 38).size() == 1);
    CHECK(provider_self_move(sim, 39, 39).empty());
  }

  TEST_CASE("nothing is reported unless both phones are registered") {
    auto sim = registered_sim();
    sim.self_registered = false;
    provider_step(sim, {ProviderDirective::Kind::PeerRegister, "p@x"});
    provider_step(sim, peer_move(100, 0));
    CHECK(provider_step(sim, peer_move(0, 0)).empty());

    auto other = registered_sim();
    other.peers["q@x"] = std::nullopt;
    CHECK(provider_step(other, {ProviderDirective::Kind::PeerMove, "q@x", 100, 0}).empty());
    CHECK(provider_step(other, {ProviderDirective::Kind::PeerMove, "q@x", 0, 0}).empty());
  }

  TEST_CASE("external constructors record their props") {
    RuntimeState st;
    auto b = construct_external(st, "button", {}, {v_str("ok")});
    CHECK(b->kind == InstanceKind::External);
    CHECK(b->ext == "button");
    REQUIRE(b->props.size() == 1);
    CHECK(str_of(b->props[0].value) == "ok");
    auto l = construct_external(st, "label", {}, {v_str("x")});
    CHECK(l->id != b->id);
  }
}

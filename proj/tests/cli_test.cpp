#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"

namespace {

std::string app(const std::string& name) { return wtest::app_path(name).string(); }

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit with status 2") {
    std::string out;
    CHECK(wtest::run_cli("--version", &out) == 0);
    CHECK_FALSE(out.empty());
    CHECK(wtest::run_cli("") == 2);
    CHECK(wtest::run_cli("run") == 2);
    CHECK(wtest::run_cli("run " + app("example1.wdg") + " --backend carrier-pigeon") == 2);
    CHECK(wtest::run_cli("run " + app("example1.wdg") + " --backend remote") == 2);
    CHECK(wtest::run_cli("check /nonexistent.wdg") == 2);
  }

  TEST_CASE("check accepts Buddy and names the event a deleted handler leaves") {
    CHECK(wtest::run_cli("check " + app("buddy.wdg")) == 0);
    wtest::TempDir dir;
    auto broken = dir.path() / "broken.wdg";
    {
      std::ofstream out(broken);
      out << wtest::remove_handler(wtest::read_text(wtest::app_path("buddy.wdg")), "notify(addr:str):<Notify + Main>");
    }
    std::string out;
    CHECK(wtest::run_cli("check " + broken.string(), &out) == 1);
    CHECK(out.find("notify(str)") != std::string::npos);
    CHECK(out.find("broken.wdg:") != std::string::npos);
  }

  TEST_CASE("a syntax error is a check failure with a position") {
    wtest::TempDir dir;
    auto bad = dir.path() / "bad.wdg";
    std::ofstream(bad) << "val main = \n";
    std::string out;
    CHECK(wtest::run_cli("check " + bad.string(), &out) == 1);
    CHECK(out.find("bad.wdg:") != std::string::npos);
  }

  TEST_CASE("run prints one display per line") {
    wtest::TempDir dir;
    std::string out;
    REQUIRE(wtest::run_cli("run " + app("example2.wdg") + " --script " + app("scripts/example2-toggle.json") +
                               " --data-dir " + dir.path().string(),
                           &out) == 0);
    auto lines = lines_of(out);
    REQUIRE(lines.size() == 5);
    for (auto& l : lines) CHECK(nlohmann::json::parse(l).at("kind") == "screen");
    CHECK(lines[0] == lines[2]);
    CHECK(lines[0] != lines[1]);
  }

  TEST_CASE("gen writes a skeleton that parses") {
    wtest::TempDir dir;
    auto out = dir.path() / "buddy.wdg";
    REQUIRE(wtest::run_cli("gen " + app("buddy-model.json") + " -o " + out.string()) == 0);
    CHECK_NOTHROW(widget::parse_program(wtest::read_text(out)));
    CHECK(wtest::run_cli("gen /nonexistent.json") != 0);
  }
}

#include <doctest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <thread>

#include "fixtures.hpp"
#include "widget/harness.hpp"

using namespace widget;
using nlohmann::json;

namespace {

// Minimal renderer: connects, reads and writes newline-delimited frames.
class Client {
 public:
  explicit Client(int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(port));
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    REQUIRE(::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
  }
  ~Client() { close(); }
  void close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }
  void send(const json& frame) {
    auto text = frame.dump() + "\n";
    REQUIRE(::send(fd_, text.data(), text.size(), 0) == static_cast<ssize_t>(text.size()));
  }
  void send_raw(const std::string& text) { ::send(fd_, text.data(), text.size(), 0); }
  json receive() {
    for (;;) {
      auto nl = buf_.find('\n');
      if (nl != std::string::npos) {
        auto line = buf_.substr(0, nl);
        buf_.erase(0, nl + 1);
        return json::parse(line);
      }
      char chunk[4096];
      auto n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n <= 0) return nullptr;
      buf_.append(chunk, static_cast<size_t>(n));
    }
  }

 private:
  int fd_ = -1;
  std::string buf_;
};

json button_of(const json& frame) { return frame.at("root").at("children").at(0); }

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("scripts parse every entry kind") {
    auto s = parse_script(json::parse(R"([
      {"event":"push","select":{"label":"PUSHME"}},
      {"context":"notify","args":["a@b"]},
      {"set-field":"name","text":"Sally"},
      {"provider":"peer-move","address":"a@b","x":1,"y":2},
      {"expect":{"select":{"kind":"label"},"props":{"text":"hi"}}}
    ])"));
    REQUIRE(s.size() == 5);
    CHECK(std::get<script::UiEvent>(s[0]).select.label == "PUSHME");
    CHECK(std::get<script::ContextEvent>(s[1]).name == "notify");
    CHECK(std::get<script::SetField>(s[2]).text == "Sally");
    auto& p = std::get<script::Provider>(s[3]).directive;
    CHECK(p.kind == ProviderDirective::Kind::PeerMove);
    CHECK(p.y == 2);
    CHECK(std::get<script::Expect>(s[4]).props.size() == 1);
  }

  TEST_CASE("malformed scripts are rejected") {
    CHECK_THROWS_AS(parse_script(json::object()), ScriptError);
    CHECK_THROWS_AS(parse_script(json::parse(R"([{"dance":1}])")), ScriptError);
    CHECK_THROWS_AS(parse_script(json::parse(R"([{"provider":"teleport","address":"a"}])")), ScriptError);
  }

  TEST_CASE("selectors match on every given criterion") {
    DisplayNode root{1, "screen", {}, {}};
    root.children.push_back({2, "button", {{"label", v_str("a")}}, {}});
    root.children.push_back({3, "button", {{"label", v_str("b")}}, {}});
    std::optional<DisplayNode> d = root;
    CHECK(select_nodes(d, Selector{std::nullopt, "button", std::nullopt, std::nullopt}).size() == 2);
    auto b = select_nodes(d, Selector{std::nullopt, "button", "b", std::nullopt});
    REQUIRE(b.size() == 1);
    CHECK(b[0]->id == 3);
    CHECK(select_nodes(d, Selector{2, "label", std::nullopt, std::nullopt}).empty());
    CHECK(select_nodes(d, Selector{std::nullopt, std::nullopt, std::nullopt, std::vector<size_t>{1}})[0]->id == 3);
    CHECK(select_nodes(std::nullopt, Selector{}).empty());
  }

  TEST_CASE("displays serialize to id, kind, props and children") {
    DisplayNode root{4, "screen", {{"x", v_int(50)}}, {{1, "button", {{"label", v_str("P")}}, {}}}};
    auto j = display_to_json(root);
    CHECK(j.dump() ==
          R"({"id":4,"kind":"screen","props":{"x":50},"children":[{"id":1,"kind":"button","props":{"label":"P"},"children":[]}]})");
    CHECK(display_from_json(json::parse(j.dump())) == std::optional<DisplayNode>(root));
    CHECK(display_to_json(std::nullopt).is_null());
  }

  TEST_CASE("a failed expectation stops the script") {
    auto script = parse_script(json::parse(R"([{"expect":{"select":{"label":"NOPE"}}}])"));
    CHECK_THROWS_AS(run_script(wtest::load_app("example1.wdg"), script), ScriptError);
    auto ok = parse_script(json::parse(R"([{"expect":{"select":{"kind":"button"},"props":{"label":"PUSHME"}}}])"));
    CHECK(run_script(wtest::load_app("example1.wdg"), ok).size() == 1);
  }

  TEST_CASE("a renderer drives the program over a socket") {
    RendererServer server(0);
    std::string fault;
    std::thread t([&] {
      try {
        server.serve(wtest::load_app("example2.wdg"), {});
      } catch (const std::exception& e) {
        fault = e.what();
      }
    });
    {
      Client c(server.port());
      auto first = c.receive();
      REQUIRE(first.at("type") == "display");
      auto b = button_of(first);
      CHECK(b.at("props").at("label") == "PUSHME");
      c.send({{"type", "event"}, {"target", b.at("id")}, {"name", "push"}, {"args", {b.at("id")}}});
      auto second = c.receive();
      CHECK(button_of(second).at("props").at("label") == "PUSHED");
      c.close();
    }
    t.join();
    CHECK(fault.empty());
  }

  TEST_CASE("a bad frame is answered with an error") {
    RendererServer server(0);
    std::thread t([&] {
      try {
        server.serve(wtest::load_app("example1.wdg"), {});
      } catch (const std::exception&) {
      }
    });
    {
      Client c(server.port());
      CHECK(c.receive().at("type") == "display");
      c.send_raw("this is not json\n");
      auto err = c.receive();
      CHECK(err.at("type") == "error");
      CHECK_FALSE(err.at("message").get<std::string>().empty());
    }
    t.join();
  }
}

#pragma once

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "widget/dispatch.hpp"

namespace widget {

/// Script or protocol input that cannot be used.
class ScriptError : public Error {
 public:
  explicit ScriptError(const std::string& msg) : Error(Pos{}, msg) {}
};

/// Picks one node of the current display. Every given criterion must hold;
/// `label` matches the label, text or title prop.
struct Selector {
  std::optional<int> id;
  std::optional<std::string> kind;
  std::optional<std::string> label;
  std::optional<std::vector<size_t>> path;
};

namespace script {

struct UiEvent {
  Selector select;
  std::string name;
  /// When absent, args are synthesized (push gets the target id).
  std::optional<std::vector<ValueP>> args;
};
struct ContextEvent {
  std::string name;
  std::vector<ValueP> args;
};
struct SetField {
  Selector select;
  std::string field;
  std::string text;
};
struct Provider {
  ProviderDirective directive;
};
/// Assertion on the current display: `count` nodes match `select`
/// (default exactly one), and the single match has `props`.
struct Expect {
  Selector select;
  size_t count = 1;
  std::vector<std::pair<std::string, ValueP>> props;
};

}  // namespace script

using ScriptEntry = std::variant<script::UiEvent, script::ContextEvent, script::SetField,
                                 script::Provider, script::Expect>;

/// Parses a script: a JSON array of entries such as
/// `{"event":"push","select":{"label":"PUSHME"}}`,
/// `{"context":"notify","args":["a@b"]}`,
/// `{"set-field":"name","text":"Sally"}`,
/// `{"provider":"peer-move","address":"a@b","x":1,"y":2}` or
/// `{"expect":{"select":{"kind":"label"},"props":{"text":"hi"}}}`.
std::vector<ScriptEntry> parse_script(const nlohmann::json& j);
std::vector<ScriptEntry> load_script(const std::string& path);

ValueP value_from_json(const nlohmann::json& j);
nlohmann::json value_to_json(const ValueP& v);

nlohmann::ordered_json display_to_json(const std::optional<DisplayNode>& d);
std::optional<DisplayNode> display_from_json(const nlohmann::json& j);

using DisplayTrace = std::vector<std::optional<DisplayNode>>;
nlohmann::ordered_json trace_to_json(const DisplayTrace& trace);

/// Nodes of `root` matching `sel`, in preorder.
std::vector<const DisplayNode*> select_nodes(const std::optional<DisplayNode>& root, const Selector& sel);

/// Applies a non-event entry or turns an event entry into an Event. Shared
/// by the headless backend and the remote side script.
std::optional<Event> apply_entry(Runtime& rt, const ValueP& root,
                                 const std::optional<DisplayNode>& display, const ScriptEntry& e);

/// Feeds a script to the execution cycle and records every display.
class HeadlessBackend : public Backend {
 public:
  explicit HeadlessBackend(std::vector<ScriptEntry> script) : script_(std::move(script)) {}

  void show(const std::optional<DisplayNode>& display) override;
  std::optional<Event> next_event(Runtime& rt, const ValueP& root) override;

  const DisplayTrace& trace() const { return trace_; }

 private:
  std::vector<ScriptEntry> script_;
  size_t next_ = 0;
  DisplayTrace trace_;
};

struct RunOptions {
  std::filesystem::path data_dir = ".";
  double range = 10;
  std::int64_t port = 0;
};

/// Runs a program's entry against a script and returns the display trace.
DisplayTrace run_script(const Program& program, const std::vector<ScriptEntry>& script,
                        const RunOptions& options = {});

/// Serves one renderer over TCP with newline-delimited JSON frames.
/// Outbound: `{"type":"display","root":...}` after every cycle and
/// `{"type":"error","message":...}` before closing on bad input. Inbound:
/// `{"type":"event","target":id,"name":..,"args":[..]}`,
/// `{"type":"set-field","target":id,"field":..,"text":..}` and
/// `{"type":"advance"}`, which runs the next side-script entry.
class RendererServer {
 public:
  /// Listens on all interfaces; port 0 picks a free port.
  explicit RendererServer(int port);
  ~RendererServer();
  RendererServer(const RendererServer&) = delete;
  RendererServer& operator=(const RendererServer&) = delete;

  int port() const { return port_; }
  /// Accepts one connection and runs the program until it disconnects.
  void serve(const Program& program, const std::vector<ScriptEntry>& side_script,
             const RunOptions& options = {});

 private:
  int listen_fd_ = -1;
  int port_ = 0;
};

}  // namespace widget

// Headless scripted backend, trace serialization and the renderer server.

#include "widget/harness.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>

namespace widget {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

Selector parse_selector(const json& j) {
  Selector s;
  if (j.is_string()) {
    s.label = j.get<std::string>();
    return s;
  }
  if (!j.is_object()) throw ScriptError("selector must be an object or a label string");
  if (j.contains("id")) s.id = j.at("id").get<int>();
  if (j.contains("kind")) s.kind = j.at("kind").get<std::string>();
  if (j.contains("label")) s.label = j.at("label").get<std::string>();
  if (j.contains("path")) s.path = j.at("path").get<std::vector<size_t>>();
  return s;
}

std::vector<ValueP> parse_args(const json& j) {
  std::vector<ValueP> out;
  if (!j.is_array()) throw ScriptError("args must be an array");
  for (auto& a : j) out.push_back(value_from_json(a));
  return out;
}

ScriptEntry parse_entry(const json& j) {
  if (!j.is_object()) throw ScriptError("script entry must be an object: " + j.dump());
  if (j.contains("event")) {
    script::UiEvent e;
    e.name = j.at("event").get<std::string>();
    if (!j.contains("select")) throw ScriptError("event entry needs a select: " + j.dump());
    e.select = parse_selector(j.at("select"));
    if (j.contains("args")) e.args = parse_args(j.at("args"));
    return e;
  }
  if (j.contains("context")) {
    script::ContextEvent e;
    e.name = j.at("context").get<std::string>();
    if (j.contains("args")) e.args = parse_args(j.at("args"));
    return e;
  }
  if (j.contains("set-field")) {
    script::SetField e;
    e.field = j.at("set-field").get<std::string>();
    e.text = j.at("text").get<std::string>();
    if (j.contains("select"))
      e.select = parse_selector(j.at("select"));
    else
      e.select.kind = "addscreen";
    return e;
  }
  if (j.contains("provider")) {
    script::Provider e;
    auto kind = j.at("provider").get<std::string>();
    if (kind == "peer-register") {
      e.directive.kind = ProviderDirective::Kind::PeerRegister;
    } else if (kind == "peer-move") {
      e.directive.kind = ProviderDirective::Kind::PeerMove;
      e.directive.x = j.at("x").get<std::int64_t>();
      e.directive.y = j.at("y").get<std::int64_t>();
    } else {
      throw ScriptError("unknown provider directive " + kind);
    }
    e.directive.address = j.at("address").get<std::string>();
    return e;
  }
  if (j.contains("expect")) {
    auto& x = j.at("expect");
    script::Expect e;
    if (x.contains("select")) e.select = parse_selector(x.at("select"));
    if (x.contains("count")) e.count = x.at("count").get<size_t>();
    if (x.contains("props"))
      for (auto& [k, v] : x.at("props").items()) e.props.emplace_back(k, value_from_json(v));
    return e;
  }
  throw ScriptError("unrecognized script entry: " + j.dump());
}

bool matches(const DisplayNode& n, const Selector& s) {
  if (s.id && n.id != *s.id) return false;
  if (s.kind && n.kind != *s.kind) return false;
  if (s.label) {
    bool found = false;
    for (auto key : {"label", "text", "title"}) {
      auto p = n.prop(key);
      if (!p) continue;
      auto str = (*p)->as<val::Str>();
      if (str && str->value == *s.label) found = true;
    }
    if (!found) return false;
  }
  return true;
}

void collect(const DisplayNode& n, const Selector& s, std::vector<const DisplayNode*>& out) {
  if (matches(n, s)) out.push_back(&n);
  for (auto& c : n.children) collect(c, s, out);
}

std::string describe_selector(const Selector& s) {
  json j = json::object();
  if (s.id) j["id"] = *s.id;
  if (s.kind) j["kind"] = *s.kind;
  if (s.label) j["label"] = *s.label;
  if (s.path) j["path"] = *s.path;
  return j.dump();
}

const DisplayNode& select_one(const std::optional<DisplayNode>& display, const Selector& s) {
  auto found = select_nodes(display, s);
  if (found.size() != 1)
    throw ScriptError("selector " + describe_selector(s) + " matches " + std::to_string(found.size()) +
                      " nodes, expected exactly one");
  return *found.front();
}

std::optional<Event> take_pending(Runtime& rt, const ValueP& root) {
  auto& pending = rt.state().pending;
  if (pending.empty()) return std::nullopt;
  auto ev = pending.front();
  pending.pop_front();
  auto target = context_target(root, rt.state());
  if (!target) throw NoHandler({}, "no widget to receive " + ev.name);
  return Event{*target, ev.name, ev.args};
}

}  // namespace

ValueP value_from_json(const json& j) {
  if (j.is_string()) return v_str(j.get<std::string>());
  if (j.is_boolean()) return v_bool(j.get<bool>());
  if (j.is_number_integer()) return v_int(j.get<std::int64_t>());
  throw ScriptError("unsupported scalar " + j.dump());
}

json value_to_json(const ValueP& v) {
  if (auto s = v->as<val::Str>()) return s->value;
  if (auto i = v->as<val::Int>()) return i->value;
  if (auto b = v->as<val::Bool>()) return b->value;
  return describe(v);
}

ordered_json display_to_json(const std::optional<DisplayNode>& d) {
  if (!d) return nullptr;
  ordered_json j;
  j["id"] = d->id;
  j["kind"] = d->kind;
  ordered_json props = ordered_json::object();
  for (auto& [k, v] : d->props) props[k] = value_to_json(v);
  j["props"] = props;
  ordered_json children = ordered_json::array();
  for (auto& c : d->children) children.push_back(display_to_json(c));
  j["children"] = children;
  return j;
}

std::optional<DisplayNode> display_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  DisplayNode n;
  n.id = j.at("id").get<int>();
  n.kind = j.at("kind").get<std::string>();
  for (auto& [k, v] : j.at("props").items()) n.props.emplace_back(k, value_from_json(v));
  for (auto& c : j.at("children")) n.children.push_back(*display_from_json(c));
  return n;
}

ordered_json trace_to_json(const DisplayTrace& trace) {
  ordered_json out = ordered_json::array();
  for (auto& d : trace) out.push_back(display_to_json(d));
  return out;
}

std::vector<ScriptEntry> parse_script(const json& j) {
  if (!j.is_array()) throw ScriptError("script must be a JSON array");
  std::vector<ScriptEntry> out;
  for (auto& e : j) out.push_back(parse_entry(e));
  return out;
}

std::vector<ScriptEntry> load_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScriptError("cannot read script " + path);
  try {
    return parse_script(json::parse(in));
  } catch (const json::exception& e) {
    throw ScriptError(path + ": " + e.what());
  }
}

std::vector<const DisplayNode*> select_nodes(const std::optional<DisplayNode>& root, const Selector& sel) {
  std::vector<const DisplayNode*> out;
  if (!root) return out;
  if (sel.path) {
    const DisplayNode* n = &*root;
    for (auto i : *sel.path) {
      if (i >= n->children.size()) return out;
      n = &n->children[i];
    }
    if (matches(*n, sel)) out.push_back(n);
    return out;
  }
  collect(*root, sel, out);
  return out;
}

std::optional<Event> apply_entry(Runtime& rt, const ValueP& root,
                                 const std::optional<DisplayNode>& display, const ScriptEntry& entry) {
  auto& st = rt.state();
  if (auto e = std::get_if<script::UiEvent>(&entry)) {
    auto& node = select_one(display, e->select);
    std::vector<ValueP> args;
    if (e->args)
      args = *e->args;
    else if (e->name == "push")
      args = {v_int(node.id)};
    return Event{node.id, e->name, args};
  }
  if (auto e = std::get_if<script::ContextEvent>(&entry)) {
    auto target = context_target(root, st);
    if (!target) throw ScriptError("context event " + e->name + " with an empty display");
    return Event{*target, e->name, e->args};
  }
  if (auto e = std::get_if<script::SetField>(&entry)) {
    auto& node = select_one(display, e->select);
    auto it = st.external_states.find(node.id);
    auto s = it == st.external_states.end() ? nullptr : std::get_if<AddScreenState>(&it->second);
    if (!s) throw ScriptError("set-field target " + std::to_string(node.id) + " has no text fields");
    if (e->field == "name")
      s->name = e->text;
    else if (e->field == "address")
      s->address = e->text;
    else
      throw ScriptError("unknown text field " + e->field);
    return std::nullopt;
  }
  if (auto e = std::get_if<script::Provider>(&entry)) {
    for (auto& ev : provider_step(st.provider, e->directive)) st.pending.push_back(ev);
    return std::nullopt;
  }
  auto& e = std::get<script::Expect>(entry);
  auto found = select_nodes(display, e.select);
  if (found.size() != e.count)
    throw ScriptError("expected " + std::to_string(e.count) + " nodes matching " +
                      describe_selector(e.select) + ", found " + std::to_string(found.size()));
  for (auto& [k, v] : e.props) {
    auto p = found.front()->prop(k);
    if (!p || !values_equal(*p, v))
      throw ScriptError("expected prop " + k + " = " + describe(v) + " on node " +
                        std::to_string(found.front()->id) + ", found " + (p ? describe(*p) : "nothing"));
  }
  return std::nullopt;
}

void HeadlessBackend::show(const std::optional<DisplayNode>& display) { trace_.push_back(display); }

std::optional<Event> HeadlessBackend::next_event(Runtime& rt, const ValueP& root) {
  if (auto ev = take_pending(rt, root)) return ev;
  while (next_ < script_.size()) {
    const auto& display = trace_.empty() ? std::optional<DisplayNode>{} : trace_.back();
    if (auto ev = apply_entry(rt, root, display, script_[next_++])) return ev;
    if (auto ev = take_pending(rt, root)) return ev;
  }
  return std::nullopt;
}

DisplayTrace run_script(const Program& program, const std::vector<ScriptEntry>& script,
                        const RunOptions& options) {
  Evaluator ev(program, options.port);
  RuntimeState st;
  st.data_dir = options.data_dir;
  st.provider.range = options.range;
  Runtime rt(ev, st);
  HeadlessBackend backend(script);
  run_loop(rt, backend);
  return backend.trace();
}

namespace {

[[noreturn]] void sys_fail(const std::string& what) {
  throw RuntimeFault({}, what + ": " + std::strerror(errno));
}

void send_all(int fd, const std::string& data) {
  size_t off = 0;
  while (off < data.size()) {
    auto n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      sys_fail("send");
    }
    off += static_cast<size_t>(n);
  }
}

class RemoteBackend : public Backend {
 public:
  RemoteBackend(int fd, std::vector<ScriptEntry> side) : fd_(fd), side_(std::move(side)) {}

  void show(const std::optional<DisplayNode>& display) override {
    last_ = display;
    ordered_json frame;
    frame["type"] = "display";
    frame["root"] = display_to_json(display);
    send_all(fd_, frame.dump() + "\n");
  }

  std::optional<Event> next_event(Runtime& rt, const ValueP& root) override {
    if (auto ev = take_pending(rt, root)) return ev;
    std::string line;
    while (read_line(line)) {
      if (line.empty()) continue;
      try {
        auto frame = json::parse(line);
        auto type = frame.at("type").get<std::string>();
        std::optional<Event> ev;
        if (type == "event") {
          ev = Event{frame.at("target").get<int>(), frame.at("name").get<std::string>(),
                     frame.contains("args") ? parse_args(frame.at("args")) : std::vector<ValueP>{}};
        } else if (type == "set-field") {
          script::SetField sf;
          sf.select.id = frame.at("target").get<int>();
          sf.field = frame.at("field").get<std::string>();
          sf.text = frame.at("text").get<std::string>();
          apply_entry(rt, root, last_, sf);
        } else if (type == "advance") {
          if (next_side_ < side_.size()) ev = apply_entry(rt, root, last_, side_[next_side_++]);
        } else {
          throw ScriptError("unknown frame type " + type);
        }
        if (!ev) ev = take_pending(rt, root);
        if (ev) return ev;
      } catch (const std::exception& e) {
        ordered_json err;
        err["type"] = "error";
        err["message"] = e.what();
        send_all(fd_, err.dump() + "\n");
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

 private:
  bool read_line(std::string& line) {
    for (;;) {
      auto nl = buf_.find('\n');
      if (nl != std::string::npos) {
        line = buf_.substr(0, nl);
        buf_.erase(0, nl + 1);
        return true;
      }
      char chunk[4096];
      auto n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return false;
      buf_.append(chunk, static_cast<size_t>(n));
    }
  }

  int fd_;
  std::vector<ScriptEntry> side_;
  size_t next_side_ = 0;
  std::string buf_;
  std::optional<DisplayNode> last_;
};

}  // namespace

RendererServer::RendererServer(int port) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) sys_fail("socket");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(static_cast<uint16_t>(port));
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    ::close(listen_fd_);
    sys_fail("bind");
  }
  if (::listen(listen_fd_, 1) < 0) {
    ::close(listen_fd_);
    sys_fail("listen");
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

RendererServer::~RendererServer() {
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void RendererServer::serve(const Program& program, const std::vector<ScriptEntry>& side_script,
                           const RunOptions& options) {
  int fd = ::accept(listen_fd_, nullptr, nullptr);
  if (fd < 0) sys_fail("accept");
  Evaluator ev(program, options.port);
  RuntimeState st;
  st.data_dir = options.data_dir;
  st.provider.range = options.range;
  Runtime rt(ev, st);
  RemoteBackend backend(fd, side_script);
  try {
    run_loop(rt, backend);
  } catch (const std::exception& e) {
    try {
      ordered_json err;
      err["type"] = "error";
      err["message"] = e.what();
      send_all(fd, err.dump() + "\n");
    } catch (const std::exception&) {
    }
    ::close(fd);
    throw;
  }
  ::close(fd);
}

}  // namespace widget

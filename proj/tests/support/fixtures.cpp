#include "fixtures.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace wtest {

fs::path source_dir() { return WIDGET_SOURCE_DIR; }

fs::path app_path(const std::string& name) { return source_dir() / "apps" / name; }

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

widget::Program load_app(const std::string& name) {
  return widget::parse_program(read_text(app_path(name)));
}

TempDir::TempDir() {
  auto tmpl = (fs::temp_directory_path() / "widget-test-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string remove_handler(const std::string& source, const std::string& signature) {
  auto start = source.find(signature);
  if (start == std::string::npos) throw std::runtime_error("handler not found: " + signature);
  auto eq = source.find('=', start + signature.size());
  int depth = 0;
  size_t end = eq + 1;
  for (; end < source.size(); ++end) {
    char c = source[end];
    if (c == '{' || c == '(' || c == '[') ++depth;
    if (c == '}' || c == ')' || c == ']') {
      if (depth == 0) break;
      --depth;
    }
    if (c == ';' && depth == 0) {
      ++end;
      break;
    }
  }
  return source.substr(0, start) + source.substr(end);
}

widget::DisplayTrace run_app(const std::string& program, const std::string& script) {
  TempDir dir;
  widget::RunOptions o;
  o.data_dir = dir.path();
  return widget::run_script(load_app(program), widget::load_script(app_path("scripts") / script), o);
}

std::string screen_kind(const std::optional<widget::DisplayNode>& frame) {
  if (!frame || frame->children.empty()) return "";
  return frame->children.front().kind;
}

std::string text_of(const std::optional<widget::DisplayNode>& frame, const std::string& kind) {
  widget::Selector sel;
  sel.kind = kind;
  auto nodes = widget::select_nodes(frame, sel);
  if (nodes.size() != 1) return "";
  for (auto prop : {"label", "text", "title"})
    if (auto v = nodes.front()->prop(prop))
      if (auto s = (*v)->as<widget::val::Str>()) return s->value;
  return "";
}

namespace {

bool same_shape(const widget::DisplayNode& a, const widget::DisplayNode& b, std::map<int, int>& ab,
                std::map<int, int>& ba) {
  auto [i, fresh_a] = ab.emplace(a.id, b.id);
  auto [j, fresh_b] = ba.emplace(b.id, a.id);
  if (i->second != b.id || j->second != a.id) return false;
  if (a.kind != b.kind || a.props.size() != b.props.size() || a.children.size() != b.children.size())
    return false;
  for (size_t k = 0; k < a.props.size(); ++k)
    if (a.props[k].first != b.props[k].first || !widget::values_equal(a.props[k].second, b.props[k].second))
      return false;
  for (size_t k = 0; k < a.children.size(); ++k)
    if (!same_shape(a.children[k], b.children[k], ab, ba)) return false;
  return true;
}

}  // namespace

bool equal_modulo_ids(const widget::DisplayTrace& a, const widget::DisplayTrace& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> ab, ba;
  for (size_t k = 0; k < a.size(); ++k) {
    if (a[k].has_value() != b[k].has_value()) return false;
    if (a[k] && !same_shape(*a[k], *b[k], ab, ba)) return false;
  }
  return true;
}

int run_cli(const std::string& args, std::string* output) {
  TempDir dir;
  auto out = dir.path() / "out.txt";
  auto cmd = std::string(WIDGET_BINARY) + " " + args + " > " + out.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  if (output) *output = read_text(out);
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

}  // namespace wtest

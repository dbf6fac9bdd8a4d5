#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "widget/harness.hpp"
#include "widget/syntax.hpp"

namespace wtest {

namespace fs = std::filesystem;

fs::path source_dir();
/// A file shipped under apps/.
fs::path app_path(const std::string& name);
std::string read_text(const fs::path& path);
widget::Program load_app(const std::string& name);

/// A fresh directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

/// Deletes the handler definition starting at `signature` (as written in the
/// source) up to its terminating `;` or the enclosing `}`. Throws when the
/// signature is not found.
std::string remove_handler(const std::string& source, const std::string& signature);

/// Runs a shipped program against a shipped script with a private db dir.
widget::DisplayTrace run_app(const std::string& program, const std::string& script);

/// Kind of the first child of the display root (`clock`, `addscreen`,
/// `label`), which tells the Buddy screens apart.
std::string screen_kind(const std::optional<widget::DisplayNode>& frame);

/// Label/text/title of the only node matching `kind`, or "" when absent.
std::string text_of(const std::optional<widget::DisplayNode>& frame, const std::string& kind);

/// Frame-by-frame equality where ids may differ by one bijection that is
/// consistent across the whole trace.
bool equal_modulo_ids(const widget::DisplayTrace& a, const widget::DisplayTrace& b);

/// Exit status of running the widget binary with `args` (stdout and stderr
/// go to `output` when given).
int run_cli(const std::string& args, std::string* output = nullptr);

}  // namespace wtest

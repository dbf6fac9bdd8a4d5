// The `widget` command: check, run and gen.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "widget/harness.hpp"
#include "widget/modelgen.hpp"
#include "widget/syntax.hpp"
#include "widget/typecheck.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDiagnostics = 1;
constexpr int kUsage = 2;

// Reported with a nonzero exit code after printing the diagnostics.
struct Failed {
  int code;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "widget: cannot read " << path << "\n";
    throw Failed{kUsage};
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

widget::Program load_program(const std::string& path, const std::string& entry) {
  auto src = read_file(path);
  try {
    auto p = widget::parse_program(src);
    if (!entry.empty()) p.entry = entry;
    return p;
  } catch (const widget::Error& e) {
    std::cerr << widget::format_diagnostic(path, {e.pos(), e.what()}) << "\n";
    throw Failed{kDiagnostics};
  }
}

// Prints diagnostics; true when there were none.
bool report(const std::string& path, const std::vector<widget::Diagnostic>& diags) {
  for (auto& d : diags) std::cerr << widget::format_diagnostic(path, d) << "\n";
  return diags.empty();
}

struct Options {
  std::string input;
  std::string entry;
  std::string backend = "headless";
  std::string script;
  std::string trace;
  std::string output;
  std::string data_dir = ".";
  int port = -1;
  double range = 10;
  bool types = false;
};

int cmd_check(const Options& o) {
  auto p = load_program(o.input, o.entry);
  try {
    if (!report(o.input, widget::check_runnable(p))) return kDiagnostics;
    if (o.types) {
      auto r = widget::check_program(p);
      for (auto& [name, t] : r.globals) std::cout << name << " : " << widget::pretty_print(*t) << "\n";
    }
  } catch (const widget::Error& e) {
    report(o.input, {{e.pos(), e.what()}});
    return kDiagnostics;
  }
  return kOk;
}

int cmd_run(const Options& o) {
  if (o.backend != "headless" && o.backend != "remote") {
    std::cerr << "widget: --backend must be headless or remote\n";
    return kUsage;
  }
  if (o.backend == "headless" && o.script.empty()) {
    std::cerr << "widget: the headless backend needs --script\n";
    return kUsage;
  }
  if (o.backend == "remote" && o.port < 0) {
    std::cerr << "widget: the remote backend needs --port\n";
    return kUsage;
  }
  auto p = load_program(o.input, o.entry);
  if (!report(o.input, widget::check_runnable(p))) return kDiagnostics;

  widget::RunOptions ro;
  ro.data_dir = o.data_dir;
  ro.range = o.range;
  try {
    std::vector<widget::ScriptEntry> script;
    if (!o.script.empty()) script = widget::load_script(o.script);
    if (o.backend == "remote") {
      widget::RendererServer server(o.port);
      std::cerr << "widget: waiting for a renderer on port " << server.port() << "\n";
      server.serve(p, script, ro);
      return kOk;
    }
    auto trace = widget::run_script(p, script, ro);
    if (o.trace.empty()) {
      for (auto& d : trace) std::cout << widget::display_to_json(d).dump() << "\n";
    } else {
      std::ofstream out(o.trace);
      if (!out) {
        std::cerr << "widget: cannot write " << o.trace << "\n";
        return kUsage;
      }
      out << widget::trace_to_json(trace).dump(2) << "\n";
    }
  } catch (const widget::Error& e) {
    std::cerr << widget::format_diagnostic(o.input, {e.pos(), e.what()}) << "\n";
    return kDiagnostics;
  }
  return kOk;
}

int cmd_gen(const Options& o) {
  try {
    auto src = widget::generate(widget::load_model_file(o.input)).text();
    if (o.output.empty()) {
      std::cout << src;
    } else {
      std::ofstream out(o.output);
      if (!out) {
        std::cerr << "widget: cannot write " << o.output << "\n";
        return kUsage;
      }
      out << src;
    }
  } catch (const widget::Error& e) {
    std::cerr << o.input << ": " << e.what() << "\n";
    return kDiagnostics;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Widget calculus toolchain"};
  app.set_version_flag("--version", std::string("widget 0.1.0"));
  app.require_subcommand(1);
  Options o;

  auto check = app.add_subcommand("check", "type-check a program and its entry point");
  check->add_option("input", o.input, "program file")->required();
  check->add_option("--entry", o.entry, "entry definition (default main)");
  check->add_flag("--types", o.types, "print the inferred type of every definition");

  auto run = app.add_subcommand("run", "run a program against a backend");
  run->add_option("input", o.input, "program file")->required();
  run->add_option("--backend", o.backend, "headless or remote")->capture_default_str();
  run->add_option("--script", o.script, "script (headless) or side script (remote)");
  run->add_option("--trace", o.trace, "write the display trace here instead of stdout");
  run->add_option("--port", o.port, "TCP port for the remote backend");
  run->add_option("--range", o.range, "provider notification range")->capture_default_str();
  run->add_option("--entry", o.entry, "entry definition (default main)");
  run->add_option("--data-dir", o.data_dir, "directory for db files")->capture_default_str();

  auto gen = app.add_subcommand("gen", "generate Widget skeletons from a model");
  gen->add_option("input", o.input, "model file (JSON)")->required();
  gen->add_option("-o,--output", o.output, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return cmd_check(o);
    if (*run) return cmd_run(o);
    return cmd_gen(o);
  } catch (const Failed& f) {
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "widget: " << e.what() << "\n";
    return kDiagnostics;
  }
}

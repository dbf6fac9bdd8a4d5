#pragma once

#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>

#include "widget/eval.hpp"
#include "widget/externals.hpp"
#include "widget/value.hpp"

namespace widget {

/// Everything performing may change: locations, the widget id counter, the
/// identity memo, external widget states and the provider simulation.
struct RuntimeState {
  std::map<int, ValueP> locations;
  int next_location = 0;
  int next_widget_id = 0;
  /// Instance built by each performed widget or constructor command, keyed
  /// by command identity. The key value is held to keep the address valid.
  std::unordered_map<const Value*, std::pair<ValueP, InstanceP>> widget_memo;
  std::map<int, ExternalState> external_states;
  ProviderSim provider;
  /// Context events produced while performing, delivered to the root.
  std::deque<ContextEvent> pending;
  std::filesystem::path data_dir = ".";
};

struct RaisedEvent {
  std::string name;
  std::vector<ValueP> args;
};

/// Result of performing: a value, or an event that aborted the command.
struct Outcome {
  ValueP value;
  std::optional<RaisedEvent> raised;
};

/// The performing stage. Commands are run against a state that is updated
/// in place.
class Runtime {
 public:
  Runtime(Evaluator& evaluator, RuntimeState& state) : ev_(evaluator), st_(state) {}

  Outcome perform(const ValueP& cmd);
  /// Builds the widget described by a widget command value.
  Outcome instantiate_widget(const ValueP& cmd);
  /// `loc`, `get` and `set`.
  ValueP loc_get_set(const std::string& which, const std::vector<ValueP>& args);

  Evaluator& evaluator() { return ev_; }
  RuntimeState& state() { return st_; }

 private:
  Outcome perform_builtin(const ValueP& cmd, const val::BuiltinCmd& b);
  // Turns a constructor argument into an instantiated widget where needed.
  Outcome realize(const ValueP& arg);
  std::optional<InstanceP> memo(const ValueP& cmd) const;
  void remember(const ValueP& cmd, const InstanceP& inst);

  Evaluator& ev_;
  RuntimeState& st_;
};

}  // namespace widget

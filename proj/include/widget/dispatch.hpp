#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "widget/error.hpp"
#include "widget/runtime.hpp"

namespace widget {

/// One external widget as shown to a renderer.
struct DisplayNode {
  int id = -1;
  std::string kind;
  /// Scalar props in constructor order (str, int or bool values).
  std::vector<std::pair<std::string, ValueP>> props;
  std::vector<DisplayNode> children;

  const ValueP* prop(const std::string& name) const;
};

bool operator==(const DisplayNode& a, const DisplayNode& b);
inline bool operator!=(const DisplayNode& a, const DisplayNode& b) { return !(a == b); }

/// Erases user widgets and invisible externals. Empty for a tree made of
/// Top alone.
std::optional<DisplayNode> project(const ValueP& root, const RuntimeState& state);

struct Event {
  int target = -1;
  std::string name;
  std::vector<ValueP> args;
};

/// Raised when an event has no handler on its path. Cannot happen for
/// programs accepted by check_runnable.
class NoHandler : public RuntimeFault {
 public:
  using RuntimeFault::RuntimeFault;
};

/// Where an event will be handled.
struct HandlerMatch {
  InstanceP owner;
  ValueP handler;
  /// Position of the owner on the path from the root.
  size_t depth = 0;
};

/// Instances from the root down to the instance with id `target`, following
/// parents, components and widget-valued props. Empty if absent.
std::vector<InstanceP> path_to(const ValueP& root, int target);

/// Innermost user widget on the root-to-target path with a handler for
/// name/arity, searching outward from `below` (exclusive).
std::optional<HandlerMatch> find_handler(const std::vector<InstanceP>& path, const std::string& name,
                                         size_t arity, size_t below);

/// Handles one event and returns the new root. Events raised by the handler
/// body are dispatched outward from the owner.
ValueP process_event(Runtime& rt, const ValueP& root, const Event& ev);

/// Id that context events are addressed to: the root of the display.
std::optional<int> context_target(const ValueP& root, const RuntimeState& state);

/// Delivers a platform event (move, notify) to the root.
ValueP process_context_event(Runtime& rt, const ValueP& root, const ContextEvent& ev);

/// Frontend of the execution cycle.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual void show(const std::optional<DisplayNode>& display) = 0;
  /// Next event, or nullopt when the session is over.
  virtual std::optional<Event> next_event(Runtime& rt, const ValueP& root) = 0;
};

/// reduce entry, perform, then alternate display and event processing until
/// the backend ends. Context events queued while performing are delivered
/// to the root, each as a cycle of its own. Returns the final root.
ValueP run_loop(Runtime& rt, Backend& backend);

/// Delivers the queued context events, showing a display after each.
ValueP drain_pending(Runtime& rt, ValueP root, Backend& backend);

}  // namespace widget

#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "widget/ast.hpp"
#include "widget/error.hpp"

namespace widget {

/// A model that cannot be loaded or mapped to Widget.
class ModelError : public Error {
 public:
  explicit ModelError(const std::string& msg) : Error(Pos{}, msg) {}
};

namespace model {

struct Attribute {
  std::string name;
  std::string type;
};

enum class OpKind { Event, Command, Handler, Query };

struct Operation {
  std::string name;
  OpKind kind = OpKind::Handler;
  std::vector<Attribute> params;
};

struct Association {
  std::string name;
  /// One target, or several for a list-valued containment (`buttons`).
  std::vector<std::string> targets;
  bool containment = false;
  bool many = false;
  bool command = false;
  /// Widget type to use instead of the target's name (`DB[str,str]`).
  std::string type;
  /// Constructor argument expressions for the target, by attribute name.
  std::map<std::string, std::string> args;
};

/// A command binding `name:type <- command` (B4).
struct Binding {
  std::string name;
  std::string type;
  std::string command;
};

struct Class {
  std::string name;
  bool external = false;
  std::string superclass;
  /// Function generated for a widget class; defaults to the snake_case name.
  std::string function;
  std::vector<Attribute> attributes;
  /// Fixed attribute values, as Widget expressions.
  std::map<std::string, std::string> values;
  std::vector<Operation> operations;
  std::vector<Association> associations;
  std::vector<Binding> bindings;

  const Operation* handler(const std::string& name) const;
};

struct State {
  std::string name;
  /// Parameter name used when a later state refers back to this one.
  std::string ref;
};

struct Transition {
  std::string source;
  std::string event;
  std::string target;
  /// Opaque Widget condition; unguarded transitions act as the else case.
  std::string guard;
  std::vector<Binding> bindings;
};

/// `context: lhs = rhs`, where lhs is `ref.member` of another state and
/// rhs a member of the context class.
struct Invariant {
  std::string context;
  std::string lhs;
  std::string rhs;
};

}  // namespace model

struct RappModel {
  /// Widget source copied ahead of the generated code (helper types and
  /// functions that guards refer to).
  std::vector<std::string> prelude;
  std::vector<model::Class> classes;
  std::string initial;
  std::vector<model::State> states;
  std::vector<model::Transition> transitions;
  std::vector<model::Invariant> invariants;

  const model::Class* find(const std::string& name) const;
};

/// Reads and validates a model; throws ModelError listing every problem.
RappModel load_model(const nlohmann::json& j);
RappModel load_model_file(const std::string& path);

struct GeneratedSource {
  std::vector<std::string> type_defs;
  std::vector<std::string> functions;
  /// Handlers left as `do { return self }`, as `Class.handler`.
  std::vector<std::string> todos;

  std::string text() const;
};

GeneratedSource generate(const RappModel& m);

/// Replaces the bodies of the listed handlers (`Class.handler`, matched by
/// the widget's self type) with `do { return self }`.
Program normalize_holes(const Program& p, const std::vector<std::string>& todos);

}  // namespace widget

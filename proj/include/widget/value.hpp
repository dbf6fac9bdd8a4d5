#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "widget/ast.hpp"

namespace widget {

struct Value;
/// Values are immutable once built; the pointer is the value's identity.
using ValueP = std::shared_ptr<const Value>;

struct EnvNode;
/// Persistent lexical environment (innermost binding first).
using EnvP = std::shared_ptr<const EnvNode>;

struct EnvNode {
  std::string name;
  ValueP value;
  EnvP next;
};

EnvP extend(EnvP env, std::string name, ValueP value);

struct Instance;
using InstanceP = std::shared_ptr<Instance>;

/// Named slot of a widget instance. Replacing a widget copies the instances
/// on the path from the root with the affected slot rewritten.
struct Slot {
  std::string name;
  ValueP value;
};

enum class InstanceKind { User, External, Top };

/// A live widget. User widgets have a parent, components and handlers;
/// external widgets have a constructor kind and props (which may hold child
/// widgets or lists of them).
struct Instance {
  int id = -1;
  InstanceKind kind = InstanceKind::User;
  std::string self_name;
  ValueP parent;
  std::vector<Slot> components;
  std::vector<Slot> handlers;
  std::string ext;
  std::vector<TypeP> type_args;
  std::vector<Slot> props;

  const Slot* handler(const std::string& name, size_t arity) const;
};

namespace val {

struct Str {
  std::string value;
};
struct Int {
  std::int64_t value;
};
struct Bool {
  bool value;
};
/// The value `*` yielded by raise.
struct Unit {};
struct List {
  std::vector<ValueP> elems;
};
struct Record {
  std::vector<Slot> fields;
};
struct Closure {
  std::vector<std::string> params;
  ExprP body;
  EnvP env;
};
/// A do-block or widget expression closed over its environment.
struct DoCmd {
  ExprP expr;
  EnvP env;
};
struct WidgetCmd {
  ExprP expr;
  EnvP env;
};
struct RaiseCmd {
  std::string name;
  std::vector<ValueP> args;
};
struct TopCmd {};
/// Builtin operator, possibly instantiated with type arguments.
struct Builtin {
  std::string name;
  std::vector<TypeP> type_args;
};
/// Saturated builtin command (loc/get/set and external constructors).
struct BuiltinCmd {
  std::string name;
  std::vector<TypeP> type_args;
  std::vector<ValueP> args;
};
/// Command exported by an external widget (`db.update`, `n.connect`).
struct ExtMethod {
  InstanceP instance;
  std::string name;
};
struct ExtCmd {
  InstanceP instance;
  std::string name;
  std::vector<ValueP> args;
};
/// Field of the widget a command yields (`s.name` with `s:<AddScreen>`).
struct FieldCmd {
  ValueP base;
  std::string name;
};
struct WidgetRef {
  InstanceP instance;
};
struct LocRef {
  int id;
};
/// Placeholder filled after construction (fix points and `self`).
struct Cell {
  std::shared_ptr<ValueP> slot;
};

}  // namespace val

struct Value {
  using Node = std::variant<val::Str, val::Int, val::Bool, val::Unit, val::List, val::Record,
                            val::Closure, val::DoCmd, val::WidgetCmd, val::RaiseCmd, val::TopCmd,
                            val::Builtin, val::BuiltinCmd, val::ExtMethod, val::ExtCmd,
                            val::FieldCmd, val::WidgetRef, val::LocRef, val::Cell>;
  Node node;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
};

template <class T>
ValueP make_value(T node) {
  return std::make_shared<const Value>(Value{std::move(node)});
}

ValueP v_str(std::string s);
ValueP v_int(std::int64_t i);
ValueP v_bool(bool b);
ValueP v_unit();
ValueP v_widget(InstanceP inst);

/// True for values that can be performed.
bool is_command(const Value& v);
bool is_function(const Value& v);

/// `=` on values: structural for data, identity for everything else.
bool values_equal(const ValueP& a, const ValueP& b);

/// Debug rendering of a value (widgets as `widget(id)`).
std::string describe(const ValueP& v);

}  // namespace widget

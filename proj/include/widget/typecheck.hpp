#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "widget/ast.hpp"
#include "widget/error.hpp"

namespace widget {

/// Variable typing context. Later insertions shadow earlier ones.
using TypeEnv = std::map<std::string, TypeP>;

/// Type checker for one program. Construction desugars the program and
/// computes the types of all top-level definitions; errors in individual
/// definitions are recorded as diagnostics rather than thrown.
class TypeChecker {
 public:
  explicit TypeChecker(const Program& program);
  TypeChecker();
  ~TypeChecker();
  TypeChecker(TypeChecker&&) noexcept;
  TypeChecker& operator=(TypeChecker&&) noexcept;

  /// Infers the type of a core expression. Globals and builtins of the
  /// program are in scope beneath `env`. Throws TypeError.
  TypeP infer(const TypeEnv& env, const ExprP& e);
  TypeP infer(const ExprP& e) { return infer({}, e); }

  bool equivalent(const TypeP& a, const TypeP& b);
  /// True when a value of type `actual` may be used where `expected` is
  /// required.
  bool compatible(const TypeP& expected, const TypeP& actual);
  /// The branch combination of conditionals.
  TypeP combine(const TypeP& a, const TypeP& b);
  /// Events a value of the given type may raise once instantiated.
  EffectSet raises_of(const TypeP& t);
  /// Head-normal form: named types, recursive types and type members are
  /// unfolded until a constructor is visible.
  TypeP expand(const TypeP& t);

  const std::vector<Diagnostic>& diagnostics() const;
  /// Type of a top-level value, or null when unknown.
  TypeP global(const std::string& name) const;
  const std::map<std::string, TypeP>& globals() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct CheckResult {
  std::map<std::string, TypeP> globals;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

/// Type checks every definition of `p` (sugared or core).
CheckResult check_program(const Program& p);

/// Diagnostics preventing `p` from running: type errors, handler leaks and
/// an entry whose type is not a command yielding a widget with no
/// unhandled events. Empty when the program is runnable.
std::vector<Diagnostic> check_runnable(const Program& p);

/// Context-free versions for types that do not mention named types.
TypeP combine(const TypeP& a, const TypeP& b);
bool type_compatible(const TypeP& expected, const TypeP& actual);

/// Names of builtin operators whose application constructs an external
/// widget.
bool is_widget_constructor(const std::string& name);

/// External widget type names (`Button`, `Phone`, ...).
bool is_external_type(const std::string& name);

}  // namespace widget

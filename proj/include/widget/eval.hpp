#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "widget/ast.hpp"
#include "widget/value.hpp"

namespace widget {

/// Reduction of expressions to values. Reduction never touches runtime
/// state: commands reduce to command values that the runtime performs.
class Evaluator {
 public:
  /// `program` may be sugared; it is desugared once here.
  explicit Evaluator(const Program& program, std::int64_t port = 0);

  ValueP reduce(const EnvP& env, const ExprP& e);
  ValueP reduce(const ExprP& e) { return reduce(nullptr, e); }
  ValueP apply(const ValueP& f, const std::vector<ValueP>& args);

  /// Value of a top-level definition (memoized).
  ValueP global(const std::string& name);
  /// The entry's value; a nullary function entry is applied.
  ValueP entry();

  /// Field access on records, widgets and commands.
  ValueP field(const ValueP& base, const std::string& name, Pos pos = {});

  const Program& program() const { return core_; }

 private:
  ValueP lookup(const EnvP& env, const std::string& name, Pos pos);

  Program core_;
  std::int64_t port_;
  std::map<std::string, const TopDef*> defs_;
  std::map<std::string, ValueP> cache_;
  std::set<std::string> in_progress_;
};

/// Reads through fix/self cells. Throws RuntimeFault on an unfilled cell.
ValueP force(const ValueP& v, Pos pos = {});

}  // namespace widget

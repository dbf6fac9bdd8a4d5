#pragma once

#include <string>
#include <string_view>

#include "widget/ast.hpp"

namespace widget {

/// Parses a whole `.wdg` source. Throws SyntaxError with the position and
/// the set of tokens that would have been accepted.
Program parse_program(std::string_view source);

/// Parses a single expression (the whole input must be consumed).
ExprP parse_expr(std::string_view source);

/// Parses a single type. `declaration` selects type-declaration context,
/// where a command type without `raises` has an empty effect set; otherwise
/// it is an open annotation.
TypeP parse_type(std::string_view source, bool declaration = true);

/// Canonical text for a type / expression / program. parse of the output
/// yields a structurally equal AST.
std::string pretty_print(const Type& t);
std::string pretty_print(const EventSig& z);
std::string pretty_print(const Expr& e);
std::string pretty_print(const Program& p);

/// Removes sugar: value bindings and handler definitions become performed
/// bindings, `letrec` becomes `fix` over a record, `fun` definitions become
/// `val` definitions of lambdas.
Program desugar(const Program& p);
ExprP desugar(const ExprP& e);

/// True when no sugar node remains.
bool is_core(const Program& p);
bool is_core(const Expr& e);

/// Replaces free occurrences of variable `name` with `replacement`.
ExprP substitute_var(const ExprP& e, const std::string& name, const ExprP& replacement);

}  // namespace widget

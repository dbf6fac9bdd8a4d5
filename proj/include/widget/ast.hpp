#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace widget {

/// Source position. Positions never take part in structural equality.
struct Pos {
  int line = 0;
  int col = 0;
  friend bool operator==(const Pos&, const Pos&) { return true; }
};

/// Immutable shared node with deep (structural) equality.
template <class T>
class Box {
 public:
  Box() = default;
  Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}  // NOLINT
  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  const T* get() const { return ptr_.get(); }
  explicit operator bool() const { return ptr_ != nullptr; }

  friend bool operator==(const Box& a, const Box& b) {
    if (a.ptr_ == b.ptr_) return true;
    if (!a.ptr_ || !b.ptr_) return false;
    return *a.ptr_ == *b.ptr_;
  }

 private:
  std::shared_ptr<const T> ptr_;
};

struct Type;
using TypeP = Box<Type>;

/// Event signature `name(t,...)`.
struct EventSig {
  std::string name;
  std::vector<TypeP> args;
  bool operator==(const EventSig&) const = default;
};

using EffectSet = std::vector<EventSig>;

struct TypeField {
  std::string name;
  TypeP type;
  bool operator==(const TypeField&) const = default;
};

enum class PrimKind { Str, Int, Bool, Unit, Top };

namespace ty {

struct Prim {
  PrimKind kind;
  bool operator==(const Prim&) const = default;
};
struct List {
  TypeP elem;
  bool operator==(const List&) const = default;
};
struct Record {
  std::vector<TypeField> fields;
  bool operator==(const Record&) const = default;
};
/// `<t> raises X`. `open` marks an annotation written without a raises
/// clause outside a type declaration: its effects are taken from the
/// annotated expression.
struct Command {
  TypeP yield;
  EffectSet effects;
  bool open = false;
  friend bool operator==(const Command& a, const Command& b) {
    return a.yield == b.yield && a.effects == b.effects;
  }
};
struct Union {
  std::vector<TypeP> alts;
  bool operator==(const Union&) const = default;
};
struct Widget {
  TypeP parent;
  EffectSet effects;
  std::vector<TypeField> fields;
  bool operator==(const Widget&) const = default;
};
struct Func {
  std::vector<TypeP> params;
  TypeP ret;
  bool operator==(const Func&) const = default;
};
/// Type-operator application `x[t,...]`; also the canonical form of
/// external widget types (`Button` is `App{"Button", {}}` once resolved).
struct App {
  std::string name;
  std::vector<TypeP> args;
  bool operator==(const App&) const = default;
};
struct Rec {
  std::string var;
  TypeP body;
  bool operator==(const Rec&) const = default;
};
struct Var {
  std::string name;
  bool operator==(const Var&) const = default;
};
struct TypeRecord {
  std::vector<TypeField> entries;
  bool operator==(const TypeRecord&) const = default;
};
struct Member {
  TypeP base;
  std::string name;
  bool operator==(const Member&) const = default;
};
struct Forall {
  std::vector<std::string> vars;
  TypeP body;
  bool operator==(const Forall&) const = default;
};
struct Loc {
  TypeP elem;
  bool operator==(const Loc&) const = default;
};

}  // namespace ty

struct Type {
  using Node = std::variant<ty::Prim, ty::List, ty::Record, ty::Command, ty::Union, ty::Widget,
                            ty::Func, ty::App, ty::Rec, ty::Var, ty::TypeRecord, ty::Member,
                            ty::Forall, ty::Loc>;
  Node node;
  bool operator==(const Type&) const = default;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
};

// Type constructors.
TypeP t_str();
TypeP t_int();
TypeP t_bool();
TypeP t_unit();
TypeP t_top();
TypeP t_list(TypeP elem);
TypeP t_cmd(TypeP yield, EffectSet effects = {}, bool open = false);
TypeP t_func(std::vector<TypeP> params, TypeP ret);
TypeP t_var(std::string name);
TypeP t_app(std::string name, std::vector<TypeP> args = {});
TypeP t_loc(TypeP elem);
TypeP t_record(std::vector<TypeField> fields);
/// Builds a union, flattening nested unions. A single alternative is
/// returned unchanged.
TypeP t_union(std::vector<TypeP> alts);

struct Expr;
using ExprP = Box<Expr>;

struct Param {
  std::string name;
  TypeP type;
  bool operator==(const Param&) const = default;
};

enum class BindKind {
  Perform,  // x:t <- e
  Value,    // x:t = e
  Handler,  // x(params):t = e
};

/// A binding inside a do-block, widget body or letrec. For handler sugar
/// `type` holds the declared return type and `params` the parameters.
struct Binding {
  Pos pos;
  std::string name;
  TypeP type;
  ExprP expr;
  BindKind kind = BindKind::Perform;
  std::vector<Param> params;
  bool operator==(const Binding&) const = default;
};

namespace ex {

struct Var {
  std::string name;
  bool operator==(const Var&) const = default;
};
struct Str {
  std::string value;
  bool operator==(const Str&) const = default;
};
struct Int {
  std::int64_t value;
  bool operator==(const Int&) const = default;
};
struct Bool {
  bool value;
  bool operator==(const Bool&) const = default;
};
struct List {
  std::vector<ExprP> elems;
  bool operator==(const List&) const = default;
};
/// `[][t]`
struct EmptyList {
  TypeP elem;
  bool operator==(const EmptyList&) const = default;
};
struct FieldInit {
  std::string name;
  ExprP value;
  bool operator==(const FieldInit&) const = default;
};
struct Record {
  std::vector<FieldInit> fields;
  bool operator==(const Record&) const = default;
};
struct FieldRef {
  ExprP base;
  std::string name;
  bool operator==(const FieldRef&) const = default;
};
struct Lambda {
  std::vector<Param> params;
  TypeP ret;
  ExprP body;
  bool operator==(const Lambda&) const = default;
};
struct Apply {
  ExprP fn;
  std::vector<ExprP> args;
  bool operator==(const Apply&) const = default;
};
struct If {
  ExprP cond;
  ExprP then_branch;
  ExprP else_branch;
  bool operator==(const If&) const = default;
};
struct Fix {
  ExprP fn;
  bool operator==(const Fix&) const = default;
};
struct Raise {
  std::string name;
  std::vector<ExprP> args;
  bool operator==(const Raise&) const = default;
};
struct Do {
  std::vector<Binding> bindings;
  ExprP result;
  bool operator==(const Do&) const = default;
};
struct Widget {
  std::string self_name;
  std::optional<TypeP> self_type;
  ExprP parent;
  std::vector<Binding> body;
  bool operator==(const Widget&) const = default;
};
struct Top {
  bool operator==(const Top&) const = default;
};
struct TypeAbs {
  std::vector<std::string> vars;
  ExprP body;
  bool operator==(const TypeAbs&) const = default;
};
struct TypeApp {
  ExprP expr;
  std::vector<TypeP> types;
  bool operator==(const TypeApp&) const = default;
};
/// Infix primitive: + - * < <= > >= = <>
struct BinOp {
  std::string op;
  ExprP lhs;
  ExprP rhs;
  bool operator==(const BinOp&) const = default;
};
struct Let {
  std::string name;
  TypeP type;
  ExprP value;
  ExprP body;
  bool operator==(const Let&) const = default;
};
struct Letrec {
  std::vector<Binding> bindings;
  ExprP body;
  bool operator==(const Letrec&) const = default;
};

}  // namespace ex

struct Expr {
  using Node = std::variant<ex::Var, ex::Str, ex::Int, ex::Bool, ex::List, ex::EmptyList,
                            ex::Record, ex::FieldRef, ex::Lambda, ex::Apply, ex::If, ex::Fix,
                            ex::Raise, ex::Do, ex::Widget, ex::Top, ex::TypeAbs, ex::TypeApp,
                            ex::BinOp, ex::Let, ex::Letrec>;
  Pos pos;
  Node node;
  bool operator==(const Expr&) const = default;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
};

ExprP mk(Pos pos, Expr::Node node);

enum class DefKind { Fun, Val, Type };

/// Top-level item. For `Fun`, `type` is the declared return type; for
/// `Val` it is the optional annotation; for `Type` it is the definition.
struct TopDef {
  Pos pos;
  DefKind kind = DefKind::Val;
  std::string name;
  std::vector<Param> params;
  std::optional<TypeP> type;
  std::optional<ExprP> body;
  bool rec = false;
  bool operator==(const TopDef&) const = default;
};

struct Program {
  std::vector<TopDef> defs;
  std::string entry = "main";
  bool operator==(const Program&) const = default;

  const TopDef* find(const std::string& name) const;
};

/// True exactly for the value productions: variables, constants, lists and
/// records of values, functions, raise with value arguments, do-blocks,
/// widgets and top.
bool is_value(const Expr& e);

}  // namespace widget

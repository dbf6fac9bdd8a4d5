#include "widget/ast.hpp"

#include "widget/error.hpp"

namespace widget {

namespace {
TypeP prim(PrimKind k) { return TypeP(Type{ty::Prim{k}}); }
}  // namespace

TypeP t_str() { return prim(PrimKind::Str); }
TypeP t_int() { return prim(PrimKind::Int); }
TypeP t_bool() { return prim(PrimKind::Bool); }
TypeP t_unit() { return prim(PrimKind::Unit); }
TypeP t_top() { return prim(PrimKind::Top); }
TypeP t_list(TypeP elem) { return TypeP(Type{ty::List{std::move(elem)}}); }
TypeP t_cmd(TypeP yield, EffectSet effects, bool open) {
  return TypeP(Type{ty::Command{std::move(yield), std::move(effects), open}});
}
TypeP t_func(std::vector<TypeP> params, TypeP ret) {
  return TypeP(Type{ty::Func{std::move(params), std::move(ret)}});
}
TypeP t_var(std::string name) { return TypeP(Type{ty::Var{std::move(name)}}); }
TypeP t_app(std::string name, std::vector<TypeP> args) {
  return TypeP(Type{ty::App{std::move(name), std::move(args)}});
}
TypeP t_loc(TypeP elem) { return TypeP(Type{ty::Loc{std::move(elem)}}); }
TypeP t_record(std::vector<TypeField> fields) {
  return TypeP(Type{ty::Record{std::move(fields)}});
}

TypeP t_union(std::vector<TypeP> alts) {
  std::vector<TypeP> flat;
  for (auto& a : alts) {
    if (auto u = a->as<ty::Union>()) {
      flat.insert(flat.end(), u->alts.begin(), u->alts.end());
    } else {
      flat.push_back(a);
    }
  }
  if (flat.size() == 1) return flat.front();
  return TypeP(Type{ty::Union{std::move(flat)}});
}

ExprP mk(Pos pos, Expr::Node node) { return ExprP(Expr{pos, std::move(node)}); }

const TopDef* Program::find(const std::string& name) const {
  for (auto& d : defs) {
    if (d.name == name && d.kind != DefKind::Type) return &d;
  }
  return nullptr;
}

bool is_value(const Expr& e) {
  return std::visit(
      [](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ex::Var> || std::is_same_v<N, ex::Str> ||
                      std::is_same_v<N, ex::Int> || std::is_same_v<N, ex::Bool> ||
                      std::is_same_v<N, ex::EmptyList> || std::is_same_v<N, ex::Lambda> ||
                      std::is_same_v<N, ex::Do> || std::is_same_v<N, ex::Widget> ||
                      std::is_same_v<N, ex::Top>) {
          return true;
        } else if constexpr (std::is_same_v<N, ex::List>) {
          for (auto& x : n.elems)
            if (!is_value(*x)) return false;
          return true;
        } else if constexpr (std::is_same_v<N, ex::Record>) {
          for (auto& f : n.fields)
            if (!is_value(*f.value)) return false;
          return true;
        } else if constexpr (std::is_same_v<N, ex::Raise>) {
          for (auto& x : n.args)
            if (!is_value(*x)) return false;
          return true;
        } else {
          return false;
        }
      },
      e.node);
}

std::string format_diagnostic(const std::string& file, const Diagnostic& d) {
  return file + ":" + std::to_string(d.pos.line) + ":" + std::to_string(d.pos.col) + ": " +
         d.message;
}

}  // namespace widget

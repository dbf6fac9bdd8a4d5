// Sugar removal and capture-aware variable substitution.

#include <algorithm>

#include "widget/syntax.hpp"

namespace widget {

namespace {

template <class F>
std::vector<ExprP> map_exprs(const std::vector<ExprP>& xs, F&& f) {
  std::vector<ExprP> out;
  out.reserve(xs.size());
  for (auto& x : xs) out.push_back(f(x));
  return out;
}

bool is_handler_binding(const Binding& b) {
  return b.kind == BindKind::Handler || b.type->as<ty::Func>() != nullptr;
}

class Substituter {
 public:
  Substituter(const std::string& name, const ExprP& repl) : name_(name), repl_(repl) {}

  ExprP run(const ExprP& e) {
    return std::visit([&](const auto& n) { return go(e, n); }, e->node);
  }

 private:
  ExprP rebuild(const ExprP& e, Expr::Node n) { return mk(e->pos, std::move(n)); }

  ExprP go(const ExprP& e, const ex::Var& n) { return n.name == name_ ? repl_ : e; }
  ExprP go(const ExprP& e, const ex::Str&) { return e; }
  ExprP go(const ExprP& e, const ex::Int&) { return e; }
  ExprP go(const ExprP& e, const ex::Bool&) { return e; }
  ExprP go(const ExprP& e, const ex::EmptyList&) { return e; }
  ExprP go(const ExprP& e, const ex::Top&) { return e; }
  ExprP go(const ExprP& e, const ex::List& n) {
    return rebuild(e, ex::List{map_exprs(n.elems, [&](auto& x) { return run(x); })});
  }
  ExprP go(const ExprP& e, const ex::Record& n) {
    ex::Record r;
    for (auto& f : n.fields) r.fields.push_back({f.name, run(f.value)});
    return rebuild(e, r);
  }
  ExprP go(const ExprP& e, const ex::FieldRef& n) {
    return rebuild(e, ex::FieldRef{run(n.base), n.name});
  }
  ExprP go(const ExprP& e, const ex::Lambda& n) {
    for (auto& p : n.params)
      if (p.name == name_) return e;
    return rebuild(e, ex::Lambda{n.params, n.ret, run(n.body)});
  }
  ExprP go(const ExprP& e, const ex::Apply& n) {
    return rebuild(e, ex::Apply{run(n.fn), map_exprs(n.args, [&](auto& x) { return run(x); })});
  }
  ExprP go(const ExprP& e, const ex::If& n) {
    return rebuild(e, ex::If{run(n.cond), run(n.then_branch), run(n.else_branch)});
  }
  ExprP go(const ExprP& e, const ex::Fix& n) { return rebuild(e, ex::Fix{run(n.fn)}); }
  ExprP go(const ExprP& e, const ex::Raise& n) {
    return rebuild(e, ex::Raise{n.name, map_exprs(n.args, [&](auto& x) { return run(x); })});
  }
  ExprP go(const ExprP& e, const ex::Do& n) {
    ex::Do d;
    bool shadowed = false;
    for (auto& b : n.bindings) {
      Binding nb = b;
      if (!shadowed) nb.expr = run(b.expr);
      if (b.name == name_) shadowed = true;
      d.bindings.push_back(std::move(nb));
    }
    d.result = shadowed ? n.result : run(n.result);
    return rebuild(e, d);
  }
  ExprP go(const ExprP& e, const ex::Widget& n) {
    if (n.self_name == name_) return e;
    bool bound_anywhere = false;
    bool bound_component = false;
    for (auto& b : n.body) {
      if (b.name == name_) {
        bound_anywhere = true;
        if (!is_handler_binding(b)) bound_component = true;
      }
    }
    ex::Widget w = n;
    if (!bound_component) w.parent = run(n.parent);
    bool earlier = false;
    for (auto& b : w.body) {
      bool sub = is_handler_binding(b) ? !bound_anywhere : !earlier;
      bool params_shadow = std::any_of(b.params.begin(), b.params.end(),
                                       [&](const Param& p) { return p.name == name_; });
      if (sub && !params_shadow) b.expr = run(b.expr);
      if (b.name == name_) earlier = true;
    }
    return rebuild(e, std::move(w));
  }
  ExprP go(const ExprP& e, const ex::TypeAbs& n) {
    return rebuild(e, ex::TypeAbs{n.vars, run(n.body)});
  }
  ExprP go(const ExprP& e, const ex::TypeApp& n) {
    return rebuild(e, ex::TypeApp{run(n.expr), n.types});
  }
  ExprP go(const ExprP& e, const ex::BinOp& n) {
    return rebuild(e, ex::BinOp{n.op, run(n.lhs), run(n.rhs)});
  }
  ExprP go(const ExprP& e, const ex::Let& n) {
    auto v = run(n.value);
    auto body = n.name == name_ ? n.body : run(n.body);
    return rebuild(e, ex::Let{n.name, n.type, v, body});
  }
  ExprP go(const ExprP& e, const ex::Letrec& n) {
    for (auto& b : n.bindings)
      if (b.name == name_) return e;
    ex::Letrec l = n;
    for (auto& b : l.bindings) b.expr = run(b.expr);
    l.body = run(n.body);
    return rebuild(e, std::move(l));
  }

  const std::string& name_;
  const ExprP& repl_;
};

class Desugarer {
 public:
  ExprP run(const ExprP& e) {
    return std::visit([&](const auto& n) { return go(e, n); }, e->node);
  }

  Binding binding(const Binding& b) {
    Binding out;
    out.pos = b.pos;
    out.name = b.name;
    out.kind = BindKind::Perform;
    switch (b.kind) {
      case BindKind::Perform:
        out.type = b.type;
        out.expr = run(b.expr);
        break;
      case BindKind::Value:
        out.type = b.type;
        out.expr = mk(b.pos, ex::Do{{}, run(b.expr)});
        break;
      case BindKind::Handler: {
        std::vector<TypeP> ps;
        for (auto& p : b.params) ps.push_back(p.type);
        out.type = t_func(std::move(ps), b.type);
        auto fn = mk(b.pos, ex::Lambda{b.params, b.type, run(b.expr)});
        out.expr = mk(b.pos, ex::Do{{}, fn});
        break;
      }
    }
    return out;
  }

 private:
  ExprP rebuild(const ExprP& e, Expr::Node n) { return mk(e->pos, std::move(n)); }

  template <class N>
  ExprP go(const ExprP& e, const N&) {
    return e;
  }
  ExprP go(const ExprP& e, const ex::List& n) {
    return rebuild(e, ex::List{map_exprs(n.elems, [&](auto& x) { return run(x); })});
  }
  ExprP go(const ExprP& e, const ex::Record& n) {
    ex::Record r;
    for (auto& f : n.fields) r.fields.push_back({f.name, run(f.value)});
    return rebuild(e, r);
  }
  ExprP go(const ExprP& e, const ex::FieldRef& n) {
    return rebuild(e, ex::FieldRef{run(n.base), n.name});
  }
  ExprP go(const ExprP& e, const ex::Lambda& n) {
    return rebuild(e, ex::Lambda{n.params, n.ret, run(n.body)});
  }
  ExprP go(const ExprP& e, const ex::Apply& n) {
    return rebuild(e, ex::Apply{run(n.fn), map_exprs(n.args, [&](auto& x) { return run(x); })});
  }
  ExprP go(const ExprP& e, const ex::If& n) {
    return rebuild(e, ex::If{run(n.cond), run(n.then_branch), run(n.else_branch)});
  }
  ExprP go(const ExprP& e, const ex::Fix& n) { return rebuild(e, ex::Fix{run(n.fn)}); }
  ExprP go(const ExprP& e, const ex::Raise& n) {
    return rebuild(e, ex::Raise{n.name, map_exprs(n.args, [&](auto& x) { return run(x); })});
  }
  ExprP go(const ExprP& e, const ex::Do& n) {
    ex::Do d;
    for (auto& b : n.bindings) d.bindings.push_back(binding(b));
    d.result = run(n.result);
    return rebuild(e, std::move(d));
  }
  ExprP go(const ExprP& e, const ex::Widget& n) {
    ex::Widget w;
    w.self_name = n.self_name;
    w.self_type = n.self_type;
    w.parent = run(n.parent);
    for (auto& b : n.body) w.body.push_back(binding(b));
    return rebuild(e, std::move(w));
  }
  ExprP go(const ExprP& e, const ex::TypeAbs& n) {
    return rebuild(e, ex::TypeAbs{n.vars, run(n.body)});
  }
  ExprP go(const ExprP& e, const ex::TypeApp& n) {
    return rebuild(e, ex::TypeApp{run(n.expr), n.types});
  }
  ExprP go(const ExprP& e, const ex::BinOp& n) {
    return rebuild(e, ex::BinOp{n.op, run(n.lhs), run(n.rhs)});
  }
  ExprP go(const ExprP& e, const ex::Let& n) {
    return rebuild(e, ex::Let{n.name, n.type, run(n.value), run(n.body)});
  }

  // letrec x1:t1 = e1; ... in body
  //   => let r:R = fix(fun(r:R):R {x1=e1'; ...}) in body'
  // where R = {x1:t1; ...} and primes replace each xi by r.xi.
  ExprP go(const ExprP& e, const ex::Letrec& n) {
    std::string r = "letrec_" + std::to_string(e->pos.line) + "_" + std::to_string(e->pos.col);
    std::vector<TypeField> fields;
    for (auto& b : n.bindings) fields.push_back({b.name, b.type});
    TypeP rec_type = t_record(fields);
    auto rvar = mk(e->pos, ex::Var{r});
    auto close = [&](ExprP x) {
      for (auto& b : n.bindings) {
        x = substitute_var(x, b.name, mk(x->pos, ex::FieldRef{rvar, b.name}));
      }
      return x;
    };
    ex::Record rec;
    for (auto& b : n.bindings) rec.fields.push_back({b.name, close(run(b.expr))});
    auto fn = mk(e->pos, ex::Lambda{{Param{r, rec_type}}, rec_type, mk(e->pos, std::move(rec))});
    auto fixed = mk(e->pos, ex::Fix{fn});
    return rebuild(e, ex::Let{r, rec_type, fixed, close(run(n.body))});
  }
};

bool core_binding(const Binding& b) { return b.kind == BindKind::Perform && is_core(*b.expr); }

}  // namespace

ExprP substitute_var(const ExprP& e, const std::string& name, const ExprP& replacement) {
  return Substituter(name, replacement).run(e);
}

ExprP desugar(const ExprP& e) { return Desugarer().run(e); }

Program desugar(const Program& p) {
  Program out;
  out.entry = p.entry;
  Desugarer d;
  for (auto& def : p.defs) {
    TopDef nd = def;
    if (def.kind == DefKind::Fun) {
      std::vector<TypeP> ps;
      for (auto& prm : def.params) ps.push_back(prm.type);
      nd.kind = DefKind::Val;
      nd.params.clear();
      nd.rec = false;
      nd.type = t_func(std::move(ps), *def.type);
      nd.body = mk(def.pos, ex::Lambda{def.params, *def.type, d.run(*def.body)});
    } else if (def.body) {
      nd.body = d.run(*def.body);
    }
    out.defs.push_back(std::move(nd));
  }
  return out;
}

bool is_core(const Expr& e) {
  return std::visit(
      [](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ex::Letrec>) {
          return false;
        } else if constexpr (std::is_same_v<N, ex::List>) {
          return std::all_of(n.elems.begin(), n.elems.end(), [](auto& x) { return is_core(*x); });
        } else if constexpr (std::is_same_v<N, ex::Record>) {
          return std::all_of(n.fields.begin(), n.fields.end(),
                             [](auto& f) { return is_core(*f.value); });
        } else if constexpr (std::is_same_v<N, ex::FieldRef>) {
          return is_core(*n.base);
        } else if constexpr (std::is_same_v<N, ex::Lambda> || std::is_same_v<N, ex::TypeAbs>) {
          return is_core(*n.body);
        } else if constexpr (std::is_same_v<N, ex::Apply>) {
          return is_core(*n.fn) &&
                 std::all_of(n.args.begin(), n.args.end(), [](auto& x) { return is_core(*x); });
        } else if constexpr (std::is_same_v<N, ex::If>) {
          return is_core(*n.cond) && is_core(*n.then_branch) && is_core(*n.else_branch);
        } else if constexpr (std::is_same_v<N, ex::Fix>) {
          return is_core(*n.fn);
        } else if constexpr (std::is_same_v<N, ex::Raise>) {
          return std::all_of(n.args.begin(), n.args.end(), [](auto& x) { return is_core(*x); });
        } else if constexpr (std::is_same_v<N, ex::Do>) {
          return std::all_of(n.bindings.begin(), n.bindings.end(), core_binding) &&
                 is_core(*n.result);
        } else if constexpr (std::is_same_v<N, ex::Widget>) {
          return is_core(*n.parent) &&
                 std::all_of(n.body.begin(), n.body.end(), core_binding);
        } else if constexpr (std::is_same_v<N, ex::TypeApp>) {
          return is_core(*n.expr);
        } else if constexpr (std::is_same_v<N, ex::BinOp>) {
          return is_core(*n.lhs) && is_core(*n.rhs);
        } else if constexpr (std::is_same_v<N, ex::Let>) {
          return is_core(*n.value) && is_core(*n.body);
        } else {
          return true;
        }
      },
      e.node);
}

bool is_core(const Program& p) {
  for (auto& d : p.defs) {
    if (d.kind == DefKind::Fun) return false;
    if (d.body && !is_core(**d.body)) return false;
  }
  return true;
}

}  // namespace widget

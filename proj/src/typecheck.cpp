// Static semantics: type assignment with event effects.

#include "widget/typecheck.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "widget/syntax.hpp"

namespace widget {

namespace {

struct ExternalInfo {
  std::string name;
  size_t arity;
};

const std::vector<ExternalInfo>& external_types() {
  static const std::vector<ExternalInfo> xs = {
      {"Button", 0}, {"Label", 0},  {"Clock", 0},    {"Screen", 1},    {"Window", 1},
      {"Phone", 2},  {"DB", 2},     {"Notifier", 0}, {"AddScreen", 0},
  };
  return xs;
}

const ExternalInfo* find_external(const std::string& name) {
  for (auto& x : external_types())
    if (x.name == name) return &x;
  return nullptr;
}

// Builtin operators and their types, written in the surface syntax.
// Command-typed parameters are open so argument effects never clash.
const std::map<std::string, std::string>& builtin_sources() {
  static const std::map<std::string, std::string> m = {
      {"loc", "Forall(t)(t)-><!t>"},
      {"get", "Forall(t)(!t)-><t>"},
      {"set", "Forall(t)(!t,t)-><t>"},
      {"head", "Forall(t)([t])->t"},
      {"tail", "Forall(t)([t])->[t]"},
      {"cons", "Forall(t)(t,[t])->[t]"},
      {"length", "Forall(t)([t])->int"},
      {"PORT", "int"},
      {"button", "(str)-><Button>"},
      {"label", "(str)-><Label>"},
      {"clock", "(int,int)-><Clock>"},
      {"screen", "Forall(W)(int,int,int,int,<W>)-><Screen[W]>"},
      {"window", "Forall(W)(str,<W>)-><Window[W]>"},
      {"phone", "Forall(D,B)(str,<D>,[<B>])-><Phone[D,B]>"},
      {"db", "Forall(K,V)(str)-><DB[K,V]>"},
      {"notifier", "(int)-><Notifier>"},
      {"addscreen", "([{key:str;val:str}])-><AddScreen>"},
  };
  return m;
}

const std::map<std::string, TypeP>& builtin_types() {
  static const std::map<std::string, TypeP> m = [] {
    std::map<std::string, TypeP> out;
    for (auto& [name, src] : builtin_sources()) out[name] = parse_type(src, false);
    return out;
  }();
  return m;
}

std::string pp(const TypeP& t) { return pretty_print(*t); }

std::string sig_text(const EventSig& z) { return pretty_print(z); }

[[noreturn]] void fail(Pos pos, const std::string& msg) { throw TypeError(pos, msg); }

TypeP subst(const TypeP& t, const std::map<std::string, TypeP>& m);

std::vector<TypeField> subst_fields(const std::vector<TypeField>& fs,
                                    const std::map<std::string, TypeP>& m) {
  std::vector<TypeField> out;
  for (auto& f : fs) out.push_back({f.name, subst(f.type, m)});
  return out;
}

EffectSet subst_effects(const EffectSet& xs, const std::map<std::string, TypeP>& m) {
  EffectSet out;
  for (auto& z : xs) {
    EventSig nz{z.name, {}};
    for (auto& a : z.args) nz.args.push_back(subst(a, m));
    out.push_back(std::move(nz));
  }
  return out;
}

std::vector<TypeP> subst_all(const std::vector<TypeP>& ts, const std::map<std::string, TypeP>& m) {
  std::vector<TypeP> out;
  for (auto& t : ts) out.push_back(subst(t, m));
  return out;
}

// Capture is not a concern: substituted types never contain binders that
// reuse the substituted names (fresh names are used when comparing).
TypeP subst(const TypeP& t, const std::map<std::string, TypeP>& m) {
  if (m.empty()) return t;
  return std::visit(
      [&](const auto& n) -> TypeP {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ty::Var>) {
          auto it = m.find(n.name);
          return it == m.end() ? t : it->second;
        } else if constexpr (std::is_same_v<N, ty::Prim>) {
          return t;
        } else if constexpr (std::is_same_v<N, ty::List>) {
          return t_list(subst(n.elem, m));
        } else if constexpr (std::is_same_v<N, ty::Record>) {
          return t_record(subst_fields(n.fields, m));
        } else if constexpr (std::is_same_v<N, ty::Command>) {
          return t_cmd(subst(n.yield, m), subst_effects(n.effects, m), n.open);
        } else if constexpr (std::is_same_v<N, ty::Union>) {
          return t_union(subst_all(n.alts, m));
        } else if constexpr (std::is_same_v<N, ty::Widget>) {
          return TypeP(Type{ty::Widget{subst(n.parent, m), subst_effects(n.effects, m),
                                       subst_fields(n.fields, m)}});
        } else if constexpr (std::is_same_v<N, ty::Func>) {
          return t_func(subst_all(n.params, m), subst(n.ret, m));
        } else if constexpr (std::is_same_v<N, ty::App>) {
          return t_app(n.name, subst_all(n.args, m));
        } else if constexpr (std::is_same_v<N, ty::Rec>) {
          auto inner = m;
          inner.erase(n.var);
          return TypeP(Type{ty::Rec{n.var, subst(n.body, inner)}});
        } else if constexpr (std::is_same_v<N, ty::TypeRecord>) {
          return TypeP(Type{ty::TypeRecord{subst_fields(n.entries, m)}});
        } else if constexpr (std::is_same_v<N, ty::Member>) {
          return TypeP(Type{ty::Member{subst(n.base, m), n.name}});
        } else if constexpr (std::is_same_v<N, ty::Forall>) {
          auto inner = m;
          for (auto& v : n.vars) inner.erase(v);
          return TypeP(Type{ty::Forall{n.vars, subst(n.body, inner)}});
        } else {
          return t_loc(subst(n.elem, m));
        }
      },
      t->node);
}

bool is_unit(const TypeP& t) {
  auto p = t->as<ty::Prim>();
  return p && p->kind == PrimKind::Unit;
}

}  // namespace

bool is_widget_constructor(const std::string& name) {
  static const std::set<std::string> s = {"button", "label",    "clock",    "screen",   "window",
                                          "phone",  "db",       "notifier", "addscreen"};
  return s.count(name) > 0;
}

bool is_external_type(const std::string& name) { return find_external(name) != nullptr; }

struct TypeChecker::Impl {
  std::map<std::string, TypeP> typedefs;
  std::map<std::string, TypeP> globals;
  std::map<std::string, const TopDef*> global_defs;
  std::set<std::string> in_progress;
  std::set<std::string> failed;
  std::vector<Diagnostic> diags;
  std::set<std::string> bound;  // type variables in scope
  Program core;
  int fresh = 0;

  // ---- type algebra ----------------------------------------------------

  bool is_bound(const std::string& v) const { return bound.count(v) > 0; }

  // One unfolding step, or null when `t` already shows a constructor.
  TypeP unfold(const TypeP& t) {
    if (auto v = t->as<ty::Var>()) {
      if (is_bound(v->name)) return {};
      auto it = typedefs.find(v->name);
      if (it != typedefs.end()) return it->second;
      if (find_external(v->name)) return t_app(v->name);
      return {};
    }
    if (auto a = t->as<ty::App>()) {
      if (find_external(a->name)) return {};
      auto it = typedefs.find(a->name);
      if (it == typedefs.end()) return {};
      auto body = expand(it->second);
      auto f = body->as<ty::Forall>();
      if (!f || f->vars.size() != a->args.size()) return {};
      std::map<std::string, TypeP> m;
      for (size_t i = 0; i < f->vars.size(); ++i) m[f->vars[i]] = a->args[i];
      return subst(f->body, m);
    }
    if (auto r = t->as<ty::Rec>()) return subst(r->body, {{r->var, t}});
    if (auto mem = t->as<ty::Member>()) {
      auto base = expand(mem->base);
      if (auto tr = base->as<ty::TypeRecord>()) {
        for (auto& e : tr->entries)
          if (e.name == mem->name) return e.type;
      }
      return {};
    }
    return {};
  }

  TypeP expand(TypeP t) {
    for (int i = 0; i < 64; ++i) {
      auto next = unfold(t);
      if (!next) return t;
      t = next;
    }
    return t;
  }

  bool is_named(const TypeP& t) {
    return t->as<ty::Var>() || t->as<ty::App>() || t->as<ty::Rec>() || t->as<ty::Member>();
  }

  std::vector<TypeP> alternatives(const TypeP& t) {
    auto e = expand(t);
    if (auto u = e->as<ty::Union>()) {
      std::vector<TypeP> out;
      for (auto& a : u->alts) {
        auto sub = alternatives(a);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    return {t};
  }

  using Assumptions = std::set<std::string>;

  bool effects_equal(const EffectSet& a, const EffectSet& b, Assumptions& as) {
    return effects_subset(a, b, as) && effects_subset(b, a, as);
  }

  bool effects_subset(const EffectSet& a, const EffectSet& b, Assumptions& as) {
    for (auto& z : a) {
      bool found = false;
      for (auto& y : b) {
        if (y.name == z.name && y.args.size() == z.args.size()) {
          found = true;
          for (size_t i = 0; i < z.args.size(); ++i)
            if (!eq(z.args[i], y.args[i], as)) found = false;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  }

  bool fields_equal(const std::vector<TypeField>& a, const std::vector<TypeField>& b,
                    Assumptions& as) {
    if (a.size() != b.size()) return false;
    for (auto& f : a) {
      auto it = std::find_if(b.begin(), b.end(), [&](auto& g) { return g.name == f.name; });
      if (it == b.end() || !eq(f.type, it->type, as)) return false;
    }
    return true;
  }

  bool all_eq(const std::vector<TypeP>& a, const std::vector<TypeP>& b, Assumptions& as) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (!eq(a[i], b[i], as)) return false;
    return true;
  }

  // Coinductive equivalence: a pair already under comparison is assumed
  // equal, which makes recursive named types terminate.
  bool eq(const TypeP& a, const TypeP& b, Assumptions& as) {
    if (a == b) return true;
    if (is_named(a) || is_named(b)) {
      auto key = pp(a) + " == " + pp(b);
      if (as.count(key)) return true;
      as.insert(key);
    }
    auto x = expand(a);
    auto y = expand(b);
    if (x->as<ty::Union>() || y->as<ty::Union>()) {
      auto xs = alternatives(x);
      auto ys = alternatives(y);
      auto covered = [&](const std::vector<TypeP>& from, const std::vector<TypeP>& to) {
        for (auto& f : from) {
          bool any = false;
          for (auto& t : to)
            if (eq(f, t, as)) {
              any = true;
              break;
            }
          if (!any) return false;
        }
        return true;
      };
      return covered(xs, ys) && covered(ys, xs);
    }
    if (x->node.index() != y->node.index()) return false;
    if (auto p = x->as<ty::Prim>()) return p->kind == y->as<ty::Prim>()->kind;
    if (auto l = x->as<ty::List>()) return eq(l->elem, y->as<ty::List>()->elem, as);
    if (auto r = x->as<ty::Record>()) return fields_equal(r->fields, y->as<ty::Record>()->fields, as);
    if (auto c = x->as<ty::Command>()) {
      auto d = y->as<ty::Command>();
      return eq(c->yield, d->yield, as) && effects_equal(c->effects, d->effects, as);
    }
    if (auto w = x->as<ty::Widget>()) {
      auto v = y->as<ty::Widget>();
      return eq(w->parent, v->parent, as) && effects_equal(w->effects, v->effects, as) &&
             fields_equal(w->fields, v->fields, as);
    }
    if (auto f = x->as<ty::Func>()) {
      auto g = y->as<ty::Func>();
      return all_eq(f->params, g->params, as) && eq(f->ret, g->ret, as);
    }
    if (auto p = x->as<ty::App>()) {
      auto q = y->as<ty::App>();
      return p->name == q->name && all_eq(p->args, q->args, as);
    }
    if (auto v = x->as<ty::Var>()) return v->name == y->as<ty::Var>()->name;
    if (auto tr = x->as<ty::TypeRecord>())
      return fields_equal(tr->entries, y->as<ty::TypeRecord>()->entries, as);
    if (auto f = x->as<ty::Forall>()) {
      auto g = y->as<ty::Forall>();
      if (f->vars.size() != g->vars.size()) return false;
      std::map<std::string, TypeP> mf, mg;
      for (size_t i = 0; i < f->vars.size(); ++i) {
        auto v = t_var("%" + std::to_string(fresh++));
        mf[f->vars[i]] = v;
        mg[g->vars[i]] = v;
      }
      return eq(subst(f->body, mf), subst(g->body, mg), as);
    }
    if (auto l = x->as<ty::Loc>()) return eq(l->elem, y->as<ty::Loc>()->elem, as);
    return false;
  }

  bool equivalent(const TypeP& a, const TypeP& b) {
    Assumptions as;
    return eq(a, b, as);
  }

  bool compat(const TypeP& expected, const TypeP& actual, Assumptions& as) {
    if (eq_quiet(expected, actual, as)) return true;
    auto key = "compat " + pp(expected) + " <- " + pp(actual);
    if (as.count(key)) return true;
    as.insert(key);
    auto e = expand(expected);
    auto a = expand(actual);
    // Top raises nothing, so only widgets that raise nothing may be erased to it.
    if (auto p = e->as<ty::Prim>(); p && p->kind == PrimKind::Top) return raises_of(actual).empty();
    if (a->as<ty::Union>()) {
      for (auto& alt : alternatives(a))
        if (!compat(expected, alt, as)) return false;
      return true;
    }
    if (e->as<ty::Union>()) {
      for (auto& alt : alternatives(e))
        if (compat(alt, actual, as)) return true;
      return false;
    }
    if (auto c = e->as<ty::Command>()) {
      auto d = a->as<ty::Command>();
      if (!d) return false;
      return compat(c->yield, d->yield, as) && (c->open || effects_subset(d->effects, c->effects, as));
    }
    if (auto l = e->as<ty::List>()) {
      auto m = a->as<ty::List>();
      return m && compat(l->elem, m->elem, as);
    }
    if (auto r = e->as<ty::Record>()) {
      auto s = a->as<ty::Record>();
      if (!s || s->fields.size() != r->fields.size()) return false;
      for (auto& f : r->fields) {
        auto it = std::find_if(s->fields.begin(), s->fields.end(),
                               [&](auto& g) { return g.name == f.name; });
        if (it == s->fields.end() || !compat(f.type, it->type, as)) return false;
      }
      return true;
    }
    if (auto f = e->as<ty::Func>()) {
      auto g = a->as<ty::Func>();
      if (!g || g->params.size() != f->params.size()) return false;
      for (size_t i = 0; i < f->params.size(); ++i)
        if (!compat(g->params[i], f->params[i], as)) return false;
      return compat(f->ret, g->ret, as);
    }
    if (auto p = e->as<ty::App>(); p && a->as<ty::App>()) {
      auto q = a->as<ty::App>();
      if (p->name == q->name && p->args.size() == q->args.size()) {
        bool ok = true;
        for (size_t i = 0; i < p->args.size() && ok; ++i) ok = compat(p->args[i], q->args[i], as);
        if (ok) return true;
      }
    }
    if (auto w = a->as<ty::Widget>()) {
      if (auto v = e->as<ty::Widget>()) {
        bool ok = compat(v->parent, w->parent, as) && effects_subset(w->effects, v->effects, as);
        for (auto& f : v->fields) {
          if (!ok) break;
          auto it = std::find_if(w->fields.begin(), w->fields.end(),
                                 [&](auto& g) { return g.name == f.name; });
          ok = it != w->fields.end() && compat(f.type, it->type, as);
        }
        if (ok) return true;
      }
      // A user widget may stand in for any type on its parent chain.
      return compat(expected, w->parent, as);
    }
    return false;
  }

  // Equivalence that does not leave assumptions behind on failure.
  bool eq_quiet(const TypeP& a, const TypeP& b, const Assumptions& as) {
    Assumptions copy = as;
    return eq(a, b, copy);
  }

  bool compatible(const TypeP& expected, const TypeP& actual) {
    Assumptions as;
    return compat(expected, actual, as);
  }

  TypeP make_union(const std::vector<TypeP>& alts) {
    std::vector<TypeP> out;
    for (auto& a : alts) {
      std::vector<TypeP> flat;
      if (auto u = a->as<ty::Union>())
        flat = u->alts;
      else
        flat = {a};
      for (auto& f : flat) {
        bool dup = std::any_of(out.begin(), out.end(), [&](auto& o) { return equivalent(o, f); });
        if (!dup) out.push_back(f);
      }
    }
    return t_union(out);
  }

  TypeP combine(const TypeP& a, const TypeP& b) {
    auto x = expand(a);
    auto y = expand(b);
    auto c = x->as<ty::Command>();
    auto d = y->as<ty::Command>();
    if (c && d) {
      EffectSet eff = c->effects;
      for (auto& z : d->effects) add_effect(eff, z, Pos{});
      return t_cmd(make_union({c->yield, d->yield}), std::move(eff));
    }
    return make_union({a, b});
  }

  void add_effect(EffectSet& xs, const EventSig& z, Pos pos) {
    for (auto& y : xs) {
      if (y.name == z.name && y.args.size() == z.args.size()) {
        bool same = true;
        for (size_t i = 0; i < z.args.size(); ++i)
          if (!equivalent(y.args[i], z.args[i])) same = false;
        if (!same)
          fail(pos, "event " + z.name + " is raised with distinct signatures " + sig_text(y) +
                        " and " + sig_text(z));
        return;
      }
    }
    xs.push_back(z);
  }

  void add_effects(EffectSet& xs, const EffectSet& more, Pos pos) {
    for (auto& z : more) add_effect(xs, z, pos);
  }

  EffectSet raises_of(const TypeP& t) {
    std::set<std::string> seen;
    return raises_of(t, seen);
  }

  EffectSet raises_of(const TypeP& t, std::set<std::string>& seen) {
    auto key = pp(t);
    if (!seen.insert(key).second) return {};
    auto e = expand(t);
    EffectSet out;
    if (auto w = e->as<ty::Widget>()) return w->effects;
    if (auto u = e->as<ty::Union>()) {
      for (auto& a : u->alts) add_effects(out, raises_of(a, seen), Pos{});
      return out;
    }
    if (auto l = e->as<ty::List>()) return raises_of(l->elem, seen);
    if (auto a = e->as<ty::App>()) {
      if (a->name == "Button") return {EventSig{"push", {t_int()}}};
      if (a->name == "Notifier") return {EventSig{"notify", {t_str()}}};
      if (a->name == "Screen" || a->name == "Window" || a->name == "Phone") {
        out.push_back(EventSig{"move", {t_int(), t_int()}});
        for (auto& arg : a->args) add_effects(out, raises_of(arg, seen), Pos{});
      }
    }
    return out;
  }

  std::optional<TypeP> external_field(const ty::App& a, const std::string& name) {
    auto arg = [&](size_t i) { return i < a.args.size() ? a.args[i] : t_top(); };
    if (a.name == "DB") {
      if (name == "records")
        return t_cmd(t_list(t_record({{"key", arg(0)}, {"val", arg(1)}})));
      if (name == "update") return t_func({arg(0), arg(1)}, t_cmd(arg(1)));
      if (name == "remove") return t_func({arg(0)}, t_cmd(t_bool()));
    } else if (a.name == "Notifier") {
      if (name == "connect") return t_cmd(t_bool());
      if (name == "register") return t_func({t_str()}, t_cmd(t_bool()));
      if (name == "move") return t_func({t_int(), t_int()}, t_cmd(t_bool()));
    } else if (a.name == "AddScreen") {
      if (name == "name" || name == "address") return t_cmd(t_str());
    } else if (a.name == "Phone" || a.name == "Window") {
      if (name == "title") return t_str();
    } else if (a.name == "Button") {
      if (name == "label") return t_str();
    } else if (a.name == "Label") {
      if (name == "text") return t_str();
    }
    return std::nullopt;
  }

  // Field lookup on records, widgets (components and handlers, then the
  // parent chain), external widgets, and through command types.
  std::optional<TypeP> field_type(const TypeP& t, const std::string& name, int depth = 0) {
    if (depth > 32) return std::nullopt;
    auto e = expand(t);
    if (auto c = e->as<ty::Command>()) return field_type(c->yield, name, depth + 1);
    if (auto r = e->as<ty::Record>()) {
      for (auto& f : r->fields)
        if (f.name == name) return f.type;
      return std::nullopt;
    }
    if (auto w = e->as<ty::Widget>()) {
      for (auto& f : w->fields)
        if (f.name == name) return f.type;
      return field_type(w->parent, name, depth + 1);
    }
    if (auto a = e->as<ty::App>()) return external_field(*a, name);
    return std::nullopt;
  }

  bool widget_like(const TypeP& t) {
    auto e = expand(t);
    if (e->as<ty::Widget>()) return true;
    if (auto a = e->as<ty::App>()) return find_external(a->name) != nullptr;
    if (auto p = e->as<ty::Prim>()) return p->kind == PrimKind::Top;
    if (e->as<ty::Union>()) {
      for (auto& a : alternatives(e))
        if (!widget_like(a)) return false;
      return true;
    }
    return false;
  }

  // Replaces the effects of open command annotations with those found by
  // inference.
  TypeP refine(const TypeP& declared, const TypeP& actual) {
    if (auto c = declared->as<ty::Command>()) {
      auto a = expand(actual)->as<ty::Command>();
      if (!a) return declared;
      return t_cmd(refine(c->yield, a->yield), c->open ? a->effects : c->effects);
    }
    if (auto f = declared->as<ty::Func>()) {
      auto g = expand(actual)->as<ty::Func>();
      if (!g) return declared;
      return t_func(f->params, refine(f->ret, g->ret));
    }
    if (auto r = declared->as<ty::Record>()) {
      auto s = expand(actual)->as<ty::Record>();
      if (!s) return declared;
      std::vector<TypeField> fs;
      for (auto& f : r->fields) {
        auto it = std::find_if(s->fields.begin(), s->fields.end(),
                               [&](auto& g) { return g.name == f.name; });
        fs.push_back({f.name, it == s->fields.end() ? f.type : refine(f.type, it->type)});
      }
      return t_record(std::move(fs));
    }
    return declared;
  }

  // Every type name must be a declared type, an external widget type or a
  // type variable in scope.
  void validate(const TypeP& t, Pos pos) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, ty::Var>) {
            if (!is_bound(n.name) && !typedefs.count(n.name) && !find_external(n.name))
              fail(pos, "unknown type " + n.name);
          } else if constexpr (std::is_same_v<N, ty::App>) {
            if (auto x = find_external(n.name)) {
              if (x->arity != n.args.size())
                fail(pos, n.name + " expects " + std::to_string(x->arity) + " type arguments");
            } else if (!typedefs.count(n.name)) {
              fail(pos, "unknown type operator " + n.name);
            }
            for (auto& a : n.args) validate(a, pos);
          } else if constexpr (std::is_same_v<N, ty::List>) {
            validate(n.elem, pos);
          } else if constexpr (std::is_same_v<N, ty::Loc>) {
            validate(n.elem, pos);
          } else if constexpr (std::is_same_v<N, ty::Record>) {
            for (auto& f : n.fields) validate(f.type, pos);
          } else if constexpr (std::is_same_v<N, ty::TypeRecord>) {
            for (auto& f : n.entries) validate(f.type, pos);
          } else if constexpr (std::is_same_v<N, ty::Command>) {
            validate(n.yield, pos);
            for (auto& z : n.effects)
              for (auto& a : z.args) validate(a, pos);
          } else if constexpr (std::is_same_v<N, ty::Union>) {
            for (auto& a : n.alts) validate(a, pos);
          } else if constexpr (std::is_same_v<N, ty::Widget>) {
            validate(n.parent, pos);
            for (auto& z : n.effects)
              for (auto& a : z.args) validate(a, pos);
            for (auto& f : n.fields) validate(f.type, pos);
          } else if constexpr (std::is_same_v<N, ty::Func>) {
            for (auto& p : n.params) validate(p, pos);
            validate(n.ret, pos);
          } else if constexpr (std::is_same_v<N, ty::Rec>) {
            bool had = bound.count(n.var);
            bound.insert(n.var);
            validate(n.body, pos);
            if (!had) bound.erase(n.var);
          } else if constexpr (std::is_same_v<N, ty::Forall>) {
            auto saved = bound;
            bound.insert(n.vars.begin(), n.vars.end());
            validate(n.body, pos);
            bound = saved;
          } else if constexpr (std::is_same_v<N, ty::Member>) {
            validate(n.base, pos);
            if (!unfold(t)) fail(pos, "type " + pp(n.base) + " has no member " + n.name);
          }
        },
        t->node);
  }

  // ---- expressions -----------------------------------------------------

  TypeP lookup(const TypeEnv& env, const std::string& name, Pos pos) {
    auto it = env.find(name);
    if (it != env.end()) return it->second;
    if (auto g = global_defs.find(name); g != global_defs.end()) return global_type(name, pos);
    auto b = builtin_types().find(name);
    if (b != builtin_types().end()) return b->second;
    fail(pos, "unbound variable " + name);
  }

  // Name of the builtin an application head refers to, if any.
  std::string builtin_head(const TypeEnv& env, const Expr& fn) {
    const Expr* e = &fn;
    if (auto ta = e->as<ex::TypeApp>()) e = ta->expr.get();
    auto v = e->as<ex::Var>();
    if (!v || env.count(v->name) || global_defs.count(v->name)) return "";
    return builtin_types().count(v->name) ? v->name : "";
  }

  TypeP global_type(const std::string& name, Pos pos) {
    auto it = globals.find(name);
    if (it != globals.end()) return it->second;
    if (in_progress.count(name))
      fail(pos, "recursive use of " + name + " requires a type annotation");
    check_global(*global_defs.at(name));
    it = globals.find(name);
    if (it == globals.end()) fail(pos, "type of " + name + " could not be determined");
    return it->second;
  }

  void check_global(const TopDef& d) {
    in_progress.insert(d.name);
    try {
      TypeP t;
      if (d.type) {
        validate(*d.type, d.pos);
        t = refine(*d.type, check({}, *d.body, *d.type));
      } else {
        t = infer({}, *d.body);
      }
      globals[d.name] = t;
    } catch (const TypeError& e) {
      diags.push_back({e.pos(), e.what()});
      failed.insert(d.name);
      if (d.type) globals[d.name] = *d.type;
    }
    in_progress.erase(d.name);
  }

  [[noreturn]] void mismatch(Pos pos, const TypeP& expected, const TypeP& actual,
                             const std::string& what) {
    fail(pos, what + ": expected " + pp(expected) + " but found " + pp(actual));
  }

  // Bidirectional entry point: checks `e` against `expected` and returns
  // the actual type found.
  TypeP check(const TypeEnv& env, const ExprP& e, const TypeP& expected) {
    auto x = expand(expected);
    TypeP actual;
    if (auto l = e->as<ex::List>(); l && x->as<ty::List>()) {
      auto elem = x->as<ty::List>()->elem;
      std::vector<TypeP> found;
      for (auto& el : l->elems) found.push_back(check(env, el, elem));
      actual = found.empty() ? expected : t_list(make_union(found));
      if (!found.empty() && !compatible(expected, actual)) actual = expected;
    } else if (auto i = e->as<ex::If>()) {
      expect_bool(env, i->cond);
      actual = combine(check(env, i->then_branch, expected), check(env, i->else_branch, expected));
    } else if (auto d = e->as<ex::Do>(); d && x->as<ty::Command>()) {
      actual = infer_do(env, *d, x->as<ty::Command>()->yield);
    } else if (auto lt = e->as<ex::Let>()) {
      actual = check(bind_let(env, *lt, e->pos), lt->body, expected);
    } else if (auto r = e->as<ex::Record>(); r && x->as<ty::Record>()) {
      std::vector<TypeField> fs;
      for (auto& f : r->fields) {
        auto want = field_type(x, f.name);
        fs.push_back({f.name, want ? check(env, f.value, *want) : infer(env, f.value)});
      }
      actual = t_record(std::move(fs));
    } else {
      actual = infer(env, e);
    }
    if (!compatible(expected, actual)) mismatch(e->pos, expected, actual, "type mismatch");
    return actual;
  }

  void expect_bool(const TypeEnv& env, const ExprP& c) {
    auto t = infer(env, c);
    if (!equivalent(t, t_bool())) mismatch(c->pos, t_bool(), t, "condition");
  }

  TypeEnv bind_let(const TypeEnv& env, const ex::Let& l, Pos pos) {
    validate(l.type, pos);
    auto t = check(env, l.value, l.type);
    TypeEnv inner = env;
    inner[l.name] = refine(l.type, t);
    return inner;
  }

  TypeP infer(const TypeEnv& env, const ExprP& e) {
    return std::visit([&](const auto& n) { return go(env, e, n); }, e->node);
  }

  TypeP go(const TypeEnv& env, const ExprP& e, const ex::Var& n) {
    return lookup(env, n.name, e->pos);
  }
  TypeP go(const TypeEnv&, const ExprP&, const ex::Str&) { return t_str(); }
  TypeP go(const TypeEnv&, const ExprP&, const ex::Int&) { return t_int(); }
  TypeP go(const TypeEnv&, const ExprP&, const ex::Bool&) { return t_bool(); }
  TypeP go(const TypeEnv&, const ExprP& e, const ex::EmptyList& n) {
    validate(n.elem, e->pos);
    return t_list(n.elem);
  }
  TypeP go(const TypeEnv&, const ExprP&, const ex::Top&) { return t_cmd(t_top()); }

  TypeP go(const TypeEnv& env, const ExprP& e, const ex::List& n) {
    auto first = infer(env, n.elems.front());
    for (size_t i = 1; i < n.elems.size(); ++i) {
      auto t = infer(env, n.elems[i]);
      if (!equivalent(first, t))
        fail(n.elems[i]->pos, "list elements have different types " + pp(first) + " and " + pp(t));
    }
    (void)e;
    return t_list(first);
  }

  TypeP go(const TypeEnv& env, const ExprP&, const ex::Record& n) {
    std::vector<TypeField> fs;
    for (auto& f : n.fields) fs.push_back({f.name, infer(env, f.value)});
    return t_record(std::move(fs));
  }

  TypeP go(const TypeEnv& env, const ExprP& e, const ex::FieldRef& n) {
    auto base = infer(env, n.base);
    auto f = field_type(base, n.name);
    if (!f) fail(e->pos, "type " + pp(base) + " has no field " + n.name);
    return *f;
  }

  TypeP go(const TypeEnv& env, const ExprP& e, const ex::Lambda& n) {
    TypeEnv inner = env;
    std::set<std::string> names;
    std::vector<TypeP> ps;
    for (auto& p : n.params) {
      if (!names.insert(p.name).second) fail(e->pos, "duplicate parameter " + p.name);
      validate(p.type, e->pos);
      inner[p.name] = p.type;
      ps.push_back(p.type);
    }
    validate(n.ret, e->pos);
    auto body = check(inner, n.body, n.ret);
    return t_func(std::move(ps), refine(n.ret, body));
  }

  // Binds the Forall variables of `f` by matching parameter types against
  // argument types.
  void match(const TypeP& param, const TypeP& arg, const std::set<std::string>& vars,
             std::map<std::string, TypeP>& out, int depth = 0) {
    if (depth > 16) return;
    if (auto v = param->as<ty::Var>(); v && vars.count(v->name)) {
      if (!out.count(v->name)) out[v->name] = arg;
      return;
    }
    auto a = arg;
    if (is_named(a)) a = expand(a);
    if (auto c = param->as<ty::Command>()) {
      if (auto d = a->as<ty::Command>())
        match(c->yield, d->yield, vars, out, depth + 1);
      else
        match(c->yield, arg, vars, out, depth + 1);
    } else if (auto l = param->as<ty::List>()) {
      if (auto m = a->as<ty::List>()) match(l->elem, m->elem, vars, out, depth + 1);
    } else if (auto l = param->as<ty::Loc>()) {
      if (auto m = a->as<ty::Loc>()) match(l->elem, m->elem, vars, out, depth + 1);
    } else if (auto f = param->as<ty::Func>()) {
      if (auto g = a->as<ty::Func>(); g && g->params.size() == f->params.size()) {
        for (size_t i = 0; i < f->params.size(); ++i)
          match(f->params[i], g->params[i], vars, out, depth + 1);
        match(f->ret, g->ret, vars, out, depth + 1);
      }
    } else if (auto p = param->as<ty::App>()) {
      if (auto q = a->as<ty::App>(); q && q->name == p->name && q->args.size() == p->args.size())
        for (size_t i = 0; i < p->args.size(); ++i)
          match(p->args[i], q->args[i], vars, out, depth + 1);
    } else if (auto r = param->as<ty::Record>()) {
      if (auto s = a->as<ty::Record>())
        for (auto& f : r->fields)
          for (auto& g : s->fields)
            if (f.name == g.name) match(f.type, g.type, vars, out, depth + 1);
    }
  }

  TypeP instantiate(const ty::Forall& f, const std::vector<TypeP>& args) {
    std::map<std::string, TypeP> m;
    for (size_t i = 0; i < f.vars.size(); ++i) m[f.vars[i]] = args[i];
    return subst(f.body, m);
  }

  TypeP go(const TypeEnv& env, const ExprP& e, const ex::Apply& n) {
    auto ft = expand(infer(env, n.fn));
    if (auto fa = ft->as<ty::Forall>()) {
      // Implicit instantiation.
      auto fn = expand(fa->body)->as<ty::Func>();
      if (!fn || fn->params.size() != n.args.size())
        fail(e->pos, "cannot apply value of type " + pp(ft) + " to " +
                         std::to_string(n.args.size()) + " arguments");
      std::set<std::string> vars(fa->vars.begin(), fa->vars.end());
      std::map<std::string, TypeP> m;
      for (size_t i = 0; i < n.args.size(); ++i) match(fn->params[i], infer(env, n.args[i]), vars, m);
      std::vector<TypeP> targs;
      for (auto& v : fa->vars) {
        if (!m.count(v)) fail(e->pos, "cannot infer type argument " + v + " of " + pp(ft));
        targs.push_back(m[v]);
      }
      ft = expand(instantiate(*fa, targs));
    }
    auto f = ft->as<ty::Func>();
    if (!f) fail(e->pos, "cannot apply value of type " + pp(ft));
    if (f->params.size() != n.args.size())
      fail(e->pos, "function of type " + pp(ft) + " expects " + std::to_string(f->params.size()) +
                       " arguments but got " + std::to_string(n.args.size()));
    bool ctor = !builtin_head(env, *n.fn).empty();
    EffectSet extra;
    for (size_t i = 0; i < n.args.size(); ++i) {
      auto param = f->params[i];
      if (ctor) {
        // Constructor arguments may be commands or already built widgets;
        // performing the constructor performs its command arguments.
        auto pc = expand(param)->as<ty::Command>();
        auto at = pc ? infer(env, n.args[i]) : check(env, n.args[i], param);
        if (pc) {
          auto ac = expand(at)->as<ty::Command>();
          auto yield = ac ? ac->yield : at;
          if (!compatible(pc->yield, yield)) mismatch(n.args[i]->pos, param, at, "argument");
          if (ac) add_effects(extra, ac->effects, n.args[i]->pos);
        }
      } else {
        check(env, n.args[i], param);
      }
    }
    if (ctor && !extra.empty()) {
      if (auto rc = expand(f->ret)->as<ty::Command>()) {
        EffectSet eff = rc->effects;
        add_effects(eff, extra, e->pos);
        return t_cmd(rc->yield, eff);
      }
    }
    return f->ret;
  }

  TypeP go(const TypeEnv& env, const ExprP&, const ex::If& n) {
    expect_bool(env, n.cond);
    return combine(infer(env, n.then_branch), infer(env, n.else_branch));
  }

  TypeP go(const TypeEnv& env, const ExprP& e, const ex::Fix& n) {
    auto ft = expand(infer(env, n.fn));
    auto f = ft->as<ty::Func>();
    if (!f || f->params.size() != 1) fail(e->pos, "fix expects a function (t)->t, found " + pp(ft));
    if (!compatible(f->params[0], f->ret)) mismatch(e->pos, f->params[0], f->ret, "fix");
    return f->ret;
  }

  TypeP go(const TypeEnv& env, const ExprP& e, const ex::Raise& n) {
    EventSig z{n.name, {}};
    for (auto& a : n.args) z.args.push_back(infer(env, a));
    (void)e;
    return t_cmd(t_unit(), {z});
  }

  TypeP go(const TypeEnv& env, const ExprP&, const ex::Do& n) { return infer_do(env, n, {}); }

  TypeP infer_do(const TypeEnv& env, const ex::Do& n, const TypeP& expected_yield) {
    TypeEnv inner = env;
    EffectSet eff;
    for (auto& b : n.bindings) {
      validate(b.type, b.pos);
      auto t = infer(inner, b.expr);
      auto c = expand(t)->as<ty::Command>();
      if (!c) fail(b.pos, "binding " + b.name + " needs a command but found " + pp(t));
      if (!compatible(b.type, c->yield)) mismatch(b.pos, b.type, c->yield, "binding " + b.name);
      add_effects(eff, c->effects, b.pos);
      inner[b.name] = refine(b.type, c->yield);
    }
    auto r = expected_yield ? check(inner, n.result, expected_yield) : infer(inner, n.result);
    return t_cmd(r, eff);
  }

  TypeP go(const TypeEnv& env, const ExprP& e, const ex::TypeAbs& n) {
    auto saved = bound;
    bound.insert(n.vars.begin(), n.vars.end());
    TypeP body;
    try {
      body = infer(env, n.body);
    } catch (...) {
      bound = saved;
      throw;
    }
    bound = saved;
    (void)e;
    return TypeP(Type{ty::Forall{n.vars, body}});
  }

  TypeP go(const TypeEnv& env, const ExprP& e, const ex::TypeApp& n) {
    for (auto& t : n.types) validate(t, e->pos);
    auto ft = expand(infer(env, n.expr));
    auto f = ft->as<ty::Forall>();
    if (!f) fail(e->pos, "type application of non-polymorphic value of type " + pp(ft));
    if (f->vars.size() != n.types.size())
      fail(e->pos, "expected " + std::to_string(f->vars.size()) + " type arguments");
    return instantiate(*f, n.types);
  }

  TypeP go(const TypeEnv& env, const ExprP& e, const ex::BinOp& n) {
    auto l = infer(env, n.lhs);
    auto r = infer(env, n.rhs);
    auto is = [&](const TypeP& t, PrimKind k) {
      auto p = expand(t)->as<ty::Prim>();
      return p && p->kind == k;
    };
    if (n.op == "+") {
      if (is(l, PrimKind::Int) && is(r, PrimKind::Int)) return t_int();
      if (is(l, PrimKind::Str) && is(r, PrimKind::Str)) return t_str();
      fail(e->pos, "operator + needs two ints or two strs, found " + pp(l) + " and " + pp(r));
    }
    if (n.op == "=" || n.op == "<>") {
      if (!equivalent(l, r) && !compatible(l, r) && !compatible(r, l))
        fail(e->pos, "cannot compare " + pp(l) + " with " + pp(r));
      return t_bool();
    }
    if (!is(l, PrimKind::Int) || !is(r, PrimKind::Int))
      fail(e->pos, "operator " + n.op + " needs ints, found " + pp(l) + " and " + pp(r));
    if (n.op == "-" || n.op == "*") return t_int();
    return t_bool();
  }

  TypeP go(const TypeEnv& env, const ExprP& e, const ex::Let& n) {
    return infer(bind_let(env, n, e->pos), n.body);
  }

  TypeP go(const TypeEnv&, const ExprP& e, const ex::Letrec&) {
    fail(e->pos, "letrec must be desugared before type checking");
  }

  // ---- widgets -----------------------------------------------------------

  static bool is_handler(const Binding& b) { return b.type->as<ty::Func>() != nullptr; }

  std::string widget_name(const ex::Widget& w, Pos pos) {
    if (w.self_type) return pp(*w.self_type);
    return "at " + std::to_string(pos.line) + ":" + std::to_string(pos.col);
  }

  TypeP go(const TypeEnv& env, const ExprP& e, const ex::Widget& n) {
    std::set<std::string> names;
    for (auto& b : n.body)
      if (!names.insert(b.name).second) fail(b.pos, "duplicate widget definition " + b.name);

    TypeP declared;
    const ty::Widget* dw = nullptr;
    if (n.self_type) {
      validate(*n.self_type, e->pos);
      declared = *n.self_type;
      dw = expand(declared)->as<ty::Widget>();
      if (!dw) fail(e->pos, "self type " + pp(declared) + " is not a widget type");
    }

    auto self_env = env;
    self_env[n.self_name] = declared ? declared : TypeP(Type{ty::Widget{t_top(), {}, {}}});

    EffectSet cmd_effects;
    std::vector<TypeField> fields;
    EffectSet raised;

    // Components, each seeing the earlier ones.
    auto comp_env = self_env;
    for (auto& b : n.body) {
      if (is_handler(b)) continue;
      validate(b.type, b.pos);
      auto t = infer(comp_env, b.expr);
      auto c = expand(t)->as<ty::Command>();
      if (!c) fail(b.pos, "component " + b.name + " needs a command but found " + pp(t));
      if (!compatible(b.type, c->yield)) mismatch(b.pos, b.type, c->yield, "component " + b.name);
      add_effects(cmd_effects, c->effects, b.pos);
      auto ft = refine(b.type, c->yield);
      comp_env[b.name] = ft;
      fields.push_back({b.name, ft});
      add_effects(raised, raises_of(ft), b.pos);
    }

    // Parent.
    auto pt = infer(comp_env, n.parent);
    auto pc = expand(pt)->as<ty::Command>();
    if (!pc || !widget_like(pc->yield))
      fail(n.parent->pos, "widget parent must be a command yielding a widget, found " + pp(pt));
    add_effects(cmd_effects, pc->effects, n.parent->pos);
    TypeP parent = pc->yield;
    add_effects(raised, raises_of(parent), n.parent->pos);

    // Without a declared self type the handlers see a provisional type
    // built from the declarations.
    if (!declared) {
      auto provisional = fields;
      for (auto& b : n.body)
        if (is_handler(b)) provisional.push_back({b.name, b.type});
      comp_env[n.self_name] = TypeP(Type{ty::Widget{parent, {}, provisional}});
    }
    auto handler_env = comp_env;
    for (auto& b : n.body)
      if (is_handler(b)) {
        validate(b.type, b.pos);
        handler_env[b.name] = b.type;
      }

    std::vector<std::pair<std::string, size_t>> handled;
    EffectSet replacement_raises;
    for (auto& b : n.body) {
      if (!is_handler(b)) continue;
      auto decl = b.type->as<ty::Func>();
      auto t = infer(handler_env, b.expr);
      auto c = expand(t)->as<ty::Command>();
      if (!c) fail(b.pos, "handler " + b.name + " needs a command but found " + pp(t));
      auto f = expand(c->yield)->as<ty::Func>();
      if (!f) fail(b.pos, "handler " + b.name + " must be a function, found " + pp(c->yield));
      if (!compatible(b.type, c->yield)) mismatch(b.pos, b.type, c->yield, "handler " + b.name);
      auto hr = expand(f->ret)->as<ty::Command>();
      if (!hr || !(widget_like(hr->yield) || is_unit(expand(hr->yield))))
        fail(b.pos, "handler " + b.name + " must return a command yielding a widget, found " +
                        pp(f->ret));
      add_effects(cmd_effects, c->effects, b.pos);
      add_effects(raised, hr->effects, b.pos);
      // The replacement takes the owner's place, so its events reach the
      // owner's container without passing the owner's handlers.
      add_effects(replacement_raises, raises_of(hr->yield), b.pos);
      fields.push_back({b.name, refine(b.type, c->yield)});
      handled.emplace_back(b.name, decl->params.size());
    }

    EffectSet remaining;
    for (auto& z : raised) {
      bool h = std::any_of(handled.begin(), handled.end(), [&](auto& p) {
        return p.first == z.name && p.second == z.args.size();
      });
      if (!h) remaining.push_back(z);
    }
    add_effects(remaining, replacement_raises, e->pos);

    if (!dw) {
      return t_cmd(TypeP(Type{ty::Widget{parent, remaining, fields}}), cmd_effects);
    }

    // Declared self type: report leaks first, then structural mismatches.
    auto name = widget_name(n, e->pos);
    for (auto& z : remaining) {
      bool declared_raise = std::any_of(dw->effects.begin(), dw->effects.end(), [&](auto& y) {
        return y.name == z.name && y.args.size() == z.args.size();
      });
      if (!declared_raise)
        diags.push_back({e->pos, "unhandled event " + sig_text(z) + " escapes widget " + name});
    }
    if (!compatible(dw->parent, parent)) mismatch(n.parent->pos, dw->parent, parent, "parent of " + name);
    for (auto& f : dw->fields) {
      auto it = std::find_if(fields.begin(), fields.end(), [&](auto& g) { return g.name == f.name; });
      if (it == fields.end()) fail(e->pos, "widget " + name + " does not define " + f.name);
      if (!compatible(f.type, it->type)) mismatch(e->pos, f.type, it->type, "definition " + f.name);
    }
    for (auto& f : fields) {
      bool known = std::any_of(dw->fields.begin(), dw->fields.end(),
                               [&](auto& g) { return g.name == f.name; });
      if (!known) fail(e->pos, "widget " + name + " defines " + f.name + " not declared by its type");
    }
    return t_cmd(declared, cmd_effects);
  }

  // ---- program -----------------------------------------------------------

  void load(const Program& program) {
    core = desugar(program);
    for (auto& d : core.defs) {
      if (d.kind == DefKind::Type) {
        if (typedefs.count(d.name) || find_external(d.name))
          diags.push_back({d.pos, "duplicate type " + d.name});
        typedefs[d.name] = *d.type;
      } else {
        if (global_defs.count(d.name)) diags.push_back({d.pos, "duplicate definition " + d.name});
        global_defs[d.name] = &d;
      }
    }
    for (auto& d : core.defs) {
      if (d.kind != DefKind::Type) continue;
      try {
        validate(*d.type, d.pos);
      } catch (const TypeError& e) {
        diags.push_back({e.pos(), e.what()});
      }
    }
    auto base = diags;
    // Open annotations grow monotonically, so iterate to a fixpoint.
    std::map<std::string, std::string> last;
    for (int pass = 0; pass < 16; ++pass) {
      diags = base;
      failed.clear();
      auto previous = globals;
      globals.clear();
      for (auto& [name, t] : previous)
        if (global_defs.at(name)->type) globals[name] = t;
      for (auto& d : core.defs) {
        if (d.kind == DefKind::Type) continue;
        auto saved = globals.count(d.name) ? globals[d.name] : TypeP();
        globals.erase(d.name);
        if (saved && d.type) {
          // Keep the refined type visible while re-checking the body.
          globals[d.name] = saved;
          in_progress.insert(d.name);
          TypeP t;
          try {
            validate(*d.type, d.pos);
            t = refine(*d.type, check({}, *d.body, *d.type));
          } catch (const TypeError& e) {
            diags.push_back({e.pos(), e.what()});
            failed.insert(d.name);
            t = *d.type;
          }
          in_progress.erase(d.name);
          globals[d.name] = t;
        } else if (!globals.count(d.name)) {
          check_global(d);
        }
      }
      std::map<std::string, std::string> now;
      for (auto& [name, t] : globals) now[name] = pp(t);
      if (now == last) break;
      last = std::move(now);
    }
    dedupe();
  }

  void dedupe() {
    std::vector<Diagnostic> out;
    std::set<std::string> seen;
    for (auto& d : diags) {
      auto key = std::to_string(d.pos.line) + ":" + std::to_string(d.pos.col) + ":" + d.message;
      if (seen.insert(key).second) out.push_back(d);
    }
    std::stable_sort(out.begin(), out.end(), [](auto& a, auto& b) {
      return std::tie(a.pos.line, a.pos.col) < std::tie(b.pos.line, b.pos.col);
    });
    diags = std::move(out);
  }
};

TypeChecker::TypeChecker() : impl_(std::make_unique<Impl>()) {}

TypeChecker::TypeChecker(const Program& program) : impl_(std::make_unique<Impl>()) {
  impl_->load(program);
}

TypeChecker::~TypeChecker() = default;
TypeChecker::TypeChecker(TypeChecker&&) noexcept = default;
TypeChecker& TypeChecker::operator=(TypeChecker&&) noexcept = default;

TypeP TypeChecker::infer(const TypeEnv& env, const ExprP& e) {
  return impl_->infer(env, desugar(e));
}

bool TypeChecker::equivalent(const TypeP& a, const TypeP& b) { return impl_->equivalent(a, b); }

bool TypeChecker::compatible(const TypeP& expected, const TypeP& actual) {
  return impl_->compatible(expected, actual);
}

TypeP TypeChecker::combine(const TypeP& a, const TypeP& b) { return impl_->combine(a, b); }

EffectSet TypeChecker::raises_of(const TypeP& t) { return impl_->raises_of(t); }

TypeP TypeChecker::expand(const TypeP& t) { return impl_->expand(t); }

const std::vector<Diagnostic>& TypeChecker::diagnostics() const { return impl_->diags; }

TypeP TypeChecker::global(const std::string& name) const {
  auto it = impl_->globals.find(name);
  return it == impl_->globals.end() ? TypeP() : it->second;
}

const std::map<std::string, TypeP>& TypeChecker::globals() const { return impl_->globals; }

CheckResult check_program(const Program& p) {
  TypeChecker tc(p);
  return {tc.globals(), tc.diagnostics()};
}

std::vector<Diagnostic> check_runnable(const Program& p) {
  TypeChecker tc(p);
  auto diags = tc.diagnostics();
  const TopDef* entry = p.find(p.entry);
  if (!entry) {
    diags.push_back({Pos{}, "entry " + p.entry + " is not defined"});
    return diags;
  }
  auto t = tc.global(p.entry);
  if (!t) return diags;
  auto x = tc.expand(t);
  if (auto f = x->as<ty::Func>(); f && f->params.empty()) x = tc.expand(f->ret);
  auto c = x->as<ty::Command>();
  auto widget_yield = [&] {
    if (!c) return false;
    auto y = tc.expand(c->yield);
    auto prim = y->as<ty::Prim>();
    return y->as<ty::Widget>() || y->as<ty::App>() || y->as<ty::Union>() ||
           (prim && prim->kind == PrimKind::Top);
  };
  if (!widget_yield()) {
    diags.push_back({entry->pos, "entry " + p.entry + " is not a command yielding a widget: " +
                                     pretty_print(*t)});
    return diags;
  }
  for (auto& z : c->effects)
    diags.push_back({entry->pos, "entry " + p.entry + " performs unhandled event " +
                                     pretty_print(z)});
  for (auto& z : tc.raises_of(c->yield))
    diags.push_back({entry->pos, "unhandled event " + pretty_print(z) + " reaches entry " +
                                     p.entry});
  return diags;
}

TypeP combine(const TypeP& a, const TypeP& b) { return TypeChecker().combine(a, b); }

bool type_compatible(const TypeP& expected, const TypeP& actual) {
  return TypeChecker().compatible(expected, actual);
}

}  // namespace widget

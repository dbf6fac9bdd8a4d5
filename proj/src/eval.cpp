// Reduction: the side-effect-free stage of the execution cycle.

#include "widget/eval.hpp"

#include "widget/error.hpp"
#include "widget/syntax.hpp"
#include "widget/typecheck.hpp"

namespace widget {

namespace {

[[noreturn]] void fault(Pos pos, const std::string& msg) { throw RuntimeFault(pos, msg); }

bool is_builtin_name(const std::string& n) {
  static const std::set<std::string> names = {"loc",  "get",    "set",  "head",
                                              "tail", "cons",   "length", "PORT"};
  return names.count(n) || is_widget_constructor(n);
}

std::int64_t as_int(const ValueP& v, Pos pos) {
  auto i = v->as<val::Int>();
  if (!i) fault(pos, "expected an int, found " + describe(v));
  return i->value;
}

const val::List& as_list(const ValueP& v, Pos pos) {
  auto l = v->as<val::List>();
  if (!l) fault(pos, "expected a list, found " + describe(v));
  return *l;
}

const Slot* find_slot(const std::vector<Slot>& slots, const std::string& name) {
  for (auto& s : slots)
    if (s.name == name) return &s;
  return nullptr;
}

// Commands and props exported by external widgets.
ValueP external_field(const InstanceP& inst, const std::string& name, Pos pos) {
  const auto& k = inst->ext;
  auto method = [&] { return make_value(val::ExtMethod{inst, name}); };
  auto command = [&] { return make_value(val::ExtCmd{inst, name, {}}); };
  if (k == "db") {
    if (name == "records") return command();
    if (name == "update" || name == "remove") return method();
  } else if (k == "notifier") {
    if (name == "connect") return command();
    if (name == "register" || name == "move") return method();
  } else if (k == "addscreen") {
    if (name == "name" || name == "address") return command();
  }
  if (auto s = find_slot(inst->props, name)) return s->value;
  fault(pos, "external widget " + k + " has no field " + name);
}

}  // namespace

ValueP force(const ValueP& v, Pos pos) {
  if (auto c = v->as<val::Cell>()) {
    if (!*c->slot) fault(pos, "value used before it was constructed");
    return force(*c->slot, pos);
  }
  return v;
}

Evaluator::Evaluator(const Program& program, std::int64_t port)
    : core_(desugar(program)), port_(port) {
  for (auto& d : core_.defs)
    if (d.kind != DefKind::Type) defs_[d.name] = &d;
}

ValueP Evaluator::global(const std::string& name) {
  if (auto it = cache_.find(name); it != cache_.end()) return it->second;
  auto d = defs_.find(name);
  if (d == defs_.end()) fault({}, "undefined " + name);
  if (in_progress_.count(name)) fault(d->second->pos, "definition of " + name + " depends on itself");
  in_progress_.insert(name);
  ValueP v;
  try {
    v = reduce(nullptr, *d->second->body);
  } catch (...) {
    in_progress_.erase(name);
    throw;
  }
  in_progress_.erase(name);
  cache_[name] = v;
  return v;
}

ValueP Evaluator::entry() {
  auto v = global(core_.entry);
  if (auto c = v->as<val::Closure>(); c && c->params.empty()) return apply(v, {});
  return v;
}

ValueP Evaluator::lookup(const EnvP& env, const std::string& name, Pos pos) {
  for (auto n = env.get(); n; n = n->next.get())
    if (n->name == name) return force(n->value, pos);
  if (defs_.count(name)) return global(name);
  if (name == "PORT") return v_int(port_);
  if (is_builtin_name(name)) return make_value(val::Builtin{name, {}});
  fault(pos, "unbound variable " + name);
}

ValueP Evaluator::field(const ValueP& base_in, const std::string& name, Pos pos) {
  auto base = force(base_in, pos);
  if (auto r = base->as<val::Record>()) {
    if (auto s = find_slot(r->fields, name)) return s->value;
    fault(pos, "record has no field " + name);
  }
  if (auto w = base->as<val::WidgetRef>()) {
    auto inst = w->instance;
    for (int depth = 0; inst && depth < 1000; ++depth) {
      if (inst->kind == InstanceKind::External) return external_field(inst, name, pos);
      if (inst->kind == InstanceKind::Top) break;
      if (auto s = find_slot(inst->components, name)) return s->value;
      if (auto s = find_slot(inst->handlers, name)) return s->value;
      auto p = inst->parent ? inst->parent->as<val::WidgetRef>() : nullptr;
      inst = p ? p->instance : nullptr;
    }
    fault(pos, "widget has no field " + name);
  }
  if (is_command(*base)) return make_value(val::FieldCmd{base, name});
  fault(pos, "cannot select " + name + " from " + describe(base));
}

ValueP Evaluator::apply(const ValueP& fv, const std::vector<ValueP>& args) {
  auto f = force(fv);
  if (auto c = f->as<val::Closure>()) {
    if (c->params.size() != args.size()) fault(c->body->pos, "arity mismatch");
    EnvP env = c->env;
    for (size_t i = 0; i < args.size(); ++i) env = extend(env, c->params[i], args[i]);
    return reduce(env, c->body);
  }
  if (auto m = f->as<val::ExtMethod>()) return make_value(val::ExtCmd{m->instance, m->name, args});
  if (auto b = f->as<val::Builtin>()) {
    const auto& n = b->name;
    if (n == "head" || n == "tail") {
      auto& l = as_list(args.at(0), {});
      if (l.elems.empty()) fault({}, n + " of the empty list");
      if (n == "head") return l.elems.front();
      return make_value(val::List{{l.elems.begin() + 1, l.elems.end()}});
    }
    if (n == "cons") {
      std::vector<ValueP> xs{args.at(0)};
      auto& l = as_list(args.at(1), {});
      xs.insert(xs.end(), l.elems.begin(), l.elems.end());
      return make_value(val::List{std::move(xs)});
    }
    if (n == "length") return v_int(static_cast<std::int64_t>(as_list(args.at(0), {}).elems.size()));
    return make_value(val::BuiltinCmd{n, b->type_args, args});
  }
  fault({}, "cannot apply " + describe(f));
}

ValueP Evaluator::reduce(const EnvP& env, const ExprP& e) {
  const Pos pos = e->pos;
  return std::visit(
      [&](const auto& n) -> ValueP {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ex::Var>) {
          return lookup(env, n.name, pos);
        } else if constexpr (std::is_same_v<N, ex::Str>) {
          return v_str(n.value);
        } else if constexpr (std::is_same_v<N, ex::Int>) {
          return v_int(n.value);
        } else if constexpr (std::is_same_v<N, ex::Bool>) {
          return v_bool(n.value);
        } else if constexpr (std::is_same_v<N, ex::EmptyList>) {
          return make_value(val::List{});
        } else if constexpr (std::is_same_v<N, ex::List>) {
          val::List l;
          for (auto& x : n.elems) l.elems.push_back(reduce(env, x));
          return make_value(std::move(l));
        } else if constexpr (std::is_same_v<N, ex::Record>) {
          val::Record r;
          for (auto& f : n.fields) r.fields.push_back({f.name, reduce(env, f.value)});
          return make_value(std::move(r));
        } else if constexpr (std::is_same_v<N, ex::FieldRef>) {
          return field(reduce(env, n.base), n.name, pos);
        } else if constexpr (std::is_same_v<N, ex::Lambda>) {
          val::Closure c;
          for (auto& p : n.params) c.params.push_back(p.name);
          c.body = n.body;
          c.env = env;
          return make_value(std::move(c));
        } else if constexpr (std::is_same_v<N, ex::Apply>) {
          auto f = reduce(env, n.fn);
          std::vector<ValueP> args;
          for (auto& a : n.args) args.push_back(reduce(env, a));
          return apply(f, args);
        } else if constexpr (std::is_same_v<N, ex::If>) {
          auto c = force(reduce(env, n.cond), pos);
          auto b = c->template as<val::Bool>();
          if (!b) fault(pos, "condition is not a bool");
          return reduce(env, b->value ? n.then_branch : n.else_branch);
        } else if constexpr (std::is_same_v<N, ex::Fix>) {
          // fix(f) = f(fix(f)): the argument is a cell filled with the result,
          // so recursive references resolve once they are used.
          auto f = reduce(env, n.fn);
          auto cell = make_value(val::Cell{std::make_shared<ValueP>()});
          auto result = apply(f, {cell});
          *cell->template as<val::Cell>()->slot = result;
          return result;
        } else if constexpr (std::is_same_v<N, ex::Raise>) {
          val::RaiseCmd r{n.name, {}};
          for (auto& a : n.args) r.args.push_back(force(reduce(env, a), pos));
          return make_value(std::move(r));
        } else if constexpr (std::is_same_v<N, ex::Do>) {
          return make_value(val::DoCmd{e, env});
        } else if constexpr (std::is_same_v<N, ex::Widget>) {
          return make_value(val::WidgetCmd{e, env});
        } else if constexpr (std::is_same_v<N, ex::Top>) {
          return make_value(val::TopCmd{});
        } else if constexpr (std::is_same_v<N, ex::TypeAbs>) {
          return reduce(env, n.body);
        } else if constexpr (std::is_same_v<N, ex::TypeApp>) {
          auto v = reduce(env, n.expr);
          if (auto b = v->template as<val::Builtin>()) return make_value(val::Builtin{b->name, n.types});
          return v;
        } else if constexpr (std::is_same_v<N, ex::BinOp>) {
          auto l = force(reduce(env, n.lhs), pos);
          auto r = force(reduce(env, n.rhs), pos);
          if (n.op == "=") return v_bool(values_equal(l, r));
          if (n.op == "<>") return v_bool(!values_equal(l, r));
          if (n.op == "+") {
            if (auto a = l->template as<val::Str>()) {
              auto b = r->template as<val::Str>();
              if (!b) fault(pos, "cannot add str and " + describe(r));
              return v_str(a->value + b->value);
            }
          }
          auto a = as_int(l, pos);
          auto b = as_int(r, pos);
          if (n.op == "+") return v_int(a + b);
          if (n.op == "-") return v_int(a - b);
          if (n.op == "*") return v_int(a * b);
          if (n.op == "<") return v_bool(a < b);
          if (n.op == "<=") return v_bool(a <= b);
          if (n.op == ">") return v_bool(a > b);
          if (n.op == ">=") return v_bool(a >= b);
          fault(pos, "unknown operator " + n.op);
        } else if constexpr (std::is_same_v<N, ex::Let>) {
          return reduce(extend(env, n.name, reduce(env, n.value)), n.body);
        } else {
          static_assert(std::is_same_v<N, ex::Letrec>);
          return reduce(env, desugar(e));
        }
      },
      e->node);
}

}  // namespace widget

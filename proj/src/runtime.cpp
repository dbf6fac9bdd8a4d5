// Performing commands: locations, widget instantiation and external
// widget commands.

#include "widget/runtime.hpp"

#include "widget/error.hpp"
#include "widget/typecheck.hpp"

namespace widget {

namespace {

[[noreturn]] void fault(Pos pos, const std::string& msg) { throw RuntimeFault(pos, msg); }

bool is_handler_binding(const Binding& b) { return b.type && b.type->as<ty::Func>(); }

}  // namespace

std::optional<InstanceP> Runtime::memo(const ValueP& cmd) const {
  auto it = st_.widget_memo.find(cmd.get());
  if (it == st_.widget_memo.end()) return std::nullopt;
  return it->second.second;
}

void Runtime::remember(const ValueP& cmd, const InstanceP& inst) {
  st_.widget_memo[cmd.get()] = {cmd, inst};
}

Outcome Runtime::perform(const ValueP& cmd_in) {
  auto cmd = force(cmd_in);
  if (auto d = cmd->as<val::DoCmd>()) {
    auto& block = *d->expr->as<ex::Do>();
    EnvP env = d->env;
    for (auto& b : block.bindings) {
      auto o = perform(ev_.reduce(env, b.expr));
      if (o.raised) return o;
      env = extend(env, b.name, o.value);
    }
    return {ev_.reduce(env, block.result), std::nullopt};
  }
  if (cmd->as<val::WidgetCmd>()) return instantiate_widget(cmd);
  if (auto r = cmd->as<val::RaiseCmd>()) return {v_unit(), RaisedEvent{r->name, r->args}};
  if (cmd->as<val::TopCmd>()) {
    if (auto m = memo(cmd)) return {v_widget(*m), std::nullopt};
    auto inst = std::make_shared<Instance>();
    inst->kind = InstanceKind::Top;
    inst->id = st_.next_widget_id++;
    remember(cmd, inst);
    return {v_widget(inst), std::nullopt};
  }
  if (auto b = cmd->as<val::BuiltinCmd>()) return perform_builtin(cmd, *b);
  if (auto x = cmd->as<val::ExtCmd>())
    return {external_command(st_, x->instance, x->name, x->args), std::nullopt};
  if (auto f = cmd->as<val::FieldCmd>()) {
    auto o = perform(f->base);
    if (o.raised) return o;
    auto v = ev_.field(o.value, f->name);
    if (is_command(*v)) return perform(v);
    return {v, std::nullopt};
  }
  // An already built widget performs to itself.
  if (cmd->as<val::WidgetRef>()) return {cmd, std::nullopt};
  fault({}, "cannot perform " + describe(cmd));
}

Outcome Runtime::realize(const ValueP& arg_in) {
  auto arg = force(arg_in);
  if (is_command(*arg)) return perform(arg);
  if (auto l = arg->as<val::List>()) {
    val::List out;
    bool changed = false;
    for (auto& x : l->elems) {
      auto o = realize(x);
      if (o.raised) return o;
      changed = changed || o.value != x;
      out.elems.push_back(o.value);
    }
    return {changed ? make_value(std::move(out)) : arg, std::nullopt};
  }
  return {arg, std::nullopt};
}

Outcome Runtime::perform_builtin(const ValueP& cmd, const val::BuiltinCmd& b) {
  if (b.name == "loc" || b.name == "get" || b.name == "set")
    return {loc_get_set(b.name, b.args), std::nullopt};
  if (!is_widget_constructor(b.name)) fault({}, "unknown builtin command " + b.name);
  if (auto m = memo(cmd)) return {v_widget(*m), std::nullopt};
  std::vector<ValueP> args;
  for (auto& a : b.args) {
    auto o = realize(a);
    if (o.raised) return o;
    args.push_back(o.value);
  }
  auto inst = construct_external(st_, b.name, b.type_args, args);
  remember(cmd, inst);
  return {v_widget(inst), std::nullopt};
}

ValueP Runtime::loc_get_set(const std::string& which, const std::vector<ValueP>& args) {
  if (which == "loc") {
    int id = st_.next_location++;
    st_.locations[id] = args.at(0);
    return make_value(val::LocRef{id});
  }
  auto l = force(args.at(0))->as<val::LocRef>();
  if (!l) fault({}, which + " needs a location");
  auto it = st_.locations.find(l->id);
  if (it == st_.locations.end()) fault({}, "dangling location " + std::to_string(l->id));
  if (which == "get") return it->second;
  it->second = args.at(1);
  return args.at(1);
}

Outcome Runtime::instantiate_widget(const ValueP& cmd) {
  if (auto m = memo(cmd)) return {v_widget(*m), std::nullopt};
  auto wc = cmd->as<val::WidgetCmd>();
  auto& w = *wc->expr->as<ex::Widget>();

  auto self_cell = std::make_shared<ValueP>();
  EnvP env = extend(wc->env, w.self_name, make_value(val::Cell{self_cell}));
  auto inst = std::make_shared<Instance>();
  inst->kind = InstanceKind::User;
  inst->self_name = w.self_name;

  // Components first, each scoped over the later ones and the parent.
  for (auto& b : w.body) {
    if (is_handler_binding(b)) continue;
    auto o = perform(ev_.reduce(env, b.expr));
    if (o.raised) return o;
    env = extend(env, b.name, o.value);
    inst->components.push_back({b.name, o.value});
  }

  auto parent = perform(ev_.reduce(env, w.parent));
  if (parent.raised) return parent;
  auto pref = force(parent.value)->as<val::WidgetRef>();
  if (!pref) fault(w.parent->pos, "widget parent did not yield a widget");

  if (w.body.empty()) {
    // widget (p) {} is p itself.
    *self_cell = parent.value;
    remember(cmd, pref->instance);
    return {parent.value, std::nullopt};
  }
  inst->parent = parent.value;

  // Handlers see each other through cells filled once all are built.
  std::vector<std::pair<const Binding*, std::shared_ptr<ValueP>>> cells;
  for (auto& b : w.body) {
    if (!is_handler_binding(b)) continue;
    auto cell = std::make_shared<ValueP>();
    env = extend(env, b.name, make_value(val::Cell{cell}));
    cells.emplace_back(&b, cell);
  }
  for (auto& [b, cell] : cells) {
    auto o = perform(ev_.reduce(env, b->expr));
    if (o.raised) return o;
    *cell = force(o.value);
    inst->handlers.push_back({b->name, *cell});
  }

  inst->id = st_.next_widget_id++;
  auto ref = v_widget(inst);
  *self_cell = ref;
  remember(cmd, inst);
  return {ref, std::nullopt};
}

}  // namespace widget

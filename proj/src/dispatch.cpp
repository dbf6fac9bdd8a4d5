// Displaying and processing: projection, handler search and splicing.

#include "widget/dispatch.hpp"

#include <set>

namespace widget {

namespace {

InstanceP instance_of(const ValueP& v) {
  if (!v) return nullptr;
  auto w = force(v)->as<val::WidgetRef>();
  return w ? w->instance : nullptr;
}

bool is_scalar(const Value& v) { return v.as<val::Str>() || v.as<val::Int>() || v.as<val::Bool>(); }

std::string records_text(const val::List& records) {
  std::string out;
  for (auto& r : records.elems) {
    auto rec = force(r)->as<val::Record>();
    if (!rec) continue;
    std::string line;
    for (auto& f : rec->fields) {
      if (!line.empty()) line += ": ";
      auto v = force(f.value);
      auto s = v->as<val::Str>();
      line += s ? s->value : describe(v);
    }
    if (!out.empty()) out += "\n";
    out += line;
  }
  return out;
}

void project_into(const ValueP& v, const RuntimeState& st, std::vector<DisplayNode>& out);

std::optional<DisplayNode> project_instance(const InstanceP& inst, const RuntimeState& st) {
  switch (inst->kind) {
    case InstanceKind::Top: return std::nullopt;
    case InstanceKind::User:
      if (!inst->parent) return std::nullopt;
      return project(inst->parent, st);
    case InstanceKind::External: break;
  }
  if (is_invisible_external(inst->ext)) return std::nullopt;
  DisplayNode node;
  node.id = inst->id;
  node.kind = inst->ext;
  for (auto& p : inst->props) {
    auto v = force(p.value);
    if (is_scalar(*v)) {
      node.props.emplace_back(p.name, v);
    } else if (auto l = v->as<val::List>(); l && inst->ext == "addscreen") {
      node.props.emplace_back(p.name, v_str(records_text(*l)));
    } else {
      project_into(v, st, node.children);
    }
  }
  if (inst->ext == "addscreen") {
    auto it = st.external_states.find(inst->id);
    if (it != st.external_states.end())
      if (auto s = std::get_if<AddScreenState>(&it->second)) {
        node.props.emplace_back("name", v_str(s->name));
        node.props.emplace_back("address", v_str(s->address));
      }
  }
  return node;
}

void project_into(const ValueP& v, const RuntimeState& st, std::vector<DisplayNode>& out) {
  if (auto l = v->as<val::List>()) {
    for (auto& x : l->elems) project_into(force(x), st, out);
    return;
  }
  if (auto inst = instance_of(v))
    if (auto n = project_instance(inst, st)) out.push_back(std::move(*n));
}

// Widget-valued edges out of an instance, in search order.
std::vector<InstanceP> children_of(const InstanceP& inst) {
  std::vector<InstanceP> out;
  auto add = [&](const ValueP& v, auto&& self) -> void {
    if (!v) return;
    auto f = force(v);
    if (auto l = f->as<val::List>()) {
      for (auto& x : l->elems) self(x, self);
    } else if (auto i = instance_of(f)) {
      out.push_back(i);
    }
  };
  if (inst->kind == InstanceKind::User) {
    add(inst->parent, add);
    for (auto& c : inst->components) add(c.value, add);
  } else {
    for (auto& p : inst->props) add(p.value, add);
  }
  return out;
}

bool search(const InstanceP& inst, int target, std::vector<InstanceP>& path,
            std::set<const Instance*>& seen) {
  if (!seen.insert(inst.get()).second) return false;
  path.push_back(inst);
  if (inst->id == target) return true;
  for (auto& c : children_of(inst))
    if (search(c, target, path, seen)) return true;
  path.pop_back();
  return false;
}

// Rewrites every reference to `from` held by `v` (directly or in a list).
ValueP replace_ref(const ValueP& v, const Instance* from, const ValueP& to) {
  if (!v) return v;
  auto f = force(v);
  if (auto w = f->as<val::WidgetRef>()) return w->instance.get() == from ? to : v;
  if (auto l = f->as<val::List>()) {
    val::List out;
    bool changed = false;
    for (auto& x : l->elems) {
      auto y = replace_ref(x, from, to);
      changed = changed || y != x;
      out.elems.push_back(y);
    }
    return changed ? make_value(std::move(out)) : v;
  }
  return v;
}

// Rebuilds the path above `depth` with path[depth] replaced.
ValueP splice(const std::vector<InstanceP>& path, size_t depth, ValueP replacement) {
  for (size_t i = depth; i-- > 0;) {
    auto copy = std::make_shared<Instance>(*path[i]);
    const Instance* old = path[i + 1].get();
    copy->parent = replace_ref(copy->parent, old, replacement);
    for (auto& c : copy->components) c.value = replace_ref(c.value, old, replacement);
    for (auto& p : copy->props) p.value = replace_ref(p.value, old, replacement);
    replacement = v_widget(copy);
  }
  return replacement;
}

std::string signature(const std::string& name, size_t arity) {
  return name + "/" + std::to_string(arity);
}

}  // namespace

const ValueP* DisplayNode::prop(const std::string& name) const {
  for (auto& [k, v] : props)
    if (k == name) return &v;
  return nullptr;
}

bool operator==(const DisplayNode& a, const DisplayNode& b) {
  if (a.id != b.id || a.kind != b.kind || a.props.size() != b.props.size() ||
      a.children != b.children)
    return false;
  for (size_t i = 0; i < a.props.size(); ++i)
    if (a.props[i].first != b.props[i].first || !values_equal(a.props[i].second, b.props[i].second))
      return false;
  return true;
}

std::optional<DisplayNode> project(const ValueP& root, const RuntimeState& state) {
  auto inst = instance_of(root);
  if (!inst) return std::nullopt;
  return project_instance(inst, state);
}

std::vector<InstanceP> path_to(const ValueP& root, int target) {
  std::vector<InstanceP> path;
  std::set<const Instance*> seen;
  if (auto inst = instance_of(root)) search(inst, target, path, seen);
  return path;
}

std::optional<HandlerMatch> find_handler(const std::vector<InstanceP>& path, const std::string& name,
                                         size_t arity, size_t below) {
  for (size_t i = std::min(below, path.size()); i-- > 0;) {
    auto& inst = path[i];
    if (inst->kind != InstanceKind::User) continue;
    if (auto h = inst->handler(name, arity)) return HandlerMatch{inst, h->value, i};
  }
  return std::nullopt;
}

ValueP process_event(Runtime& rt, const ValueP& root, const Event& ev) {
  auto path = path_to(root, ev.target);
  if (path.empty())
    throw NoHandler({}, "event " + signature(ev.name, ev.args.size()) + " targets unknown widget " +
                            std::to_string(ev.target));
  std::string name = ev.name;
  std::vector<ValueP> args = ev.args;
  size_t below = path.size();
  // The owner's own handlers are searched first for an event its handler
  // raises, matching the typing rule that erases every handled event.
  constexpr int kMaxRaises = 10000;
  for (int raises = 0;; ++raises) {
    if (raises > kMaxRaises)
      throw RuntimeFault({}, "event " + signature(ev.name, ev.args.size()) + " raised too many events");
    auto m = find_handler(path, name, args.size(), below);
    if (!m) throw NoHandler({}, "no handler found for " + signature(name, args.size()));
    auto o = rt.perform(rt.evaluator().apply(m->handler, args));
    if (o.raised) {
      name = o.raised->name;
      args = o.raised->args;
      below = m->depth + 1;
      continue;
    }
    if (!instance_of(o.value))
      throw RuntimeFault({}, "handler for " + signature(ev.name, ev.args.size()) +
                                 " yielded " + describe(o.value) + ", not a widget");
    return splice(path, m->depth, force(o.value));
  }
}

std::optional<int> context_target(const ValueP& root, const RuntimeState& state) {
  if (auto d = project(root, state)) return d->id;
  return std::nullopt;
}

ValueP process_context_event(Runtime& rt, const ValueP& root, const ContextEvent& ev) {
  auto target = context_target(root, rt.state());
  if (!target) throw NoHandler({}, "no handler found for " + signature(ev.name, ev.args.size()));
  return process_event(rt, root, Event{*target, ev.name, ev.args});
}

ValueP drain_pending(Runtime& rt, ValueP root, Backend& backend) {
  auto& pending = rt.state().pending;
  while (!pending.empty()) {
    auto ev = pending.front();
    pending.pop_front();
    root = process_context_event(rt, root, ev);
    backend.show(project(root, rt.state()));
  }
  return root;
}

ValueP run_loop(Runtime& rt, Backend& backend) {
  auto o = rt.perform(rt.evaluator().entry());
  if (o.raised) throw NoHandler({}, "entry raised " + signature(o.raised->name, o.raised->args.size()));
  ValueP root = force(o.value);
  backend.show(project(root, rt.state()));
  root = drain_pending(rt, root, backend);
  while (auto ev = backend.next_event(rt, root)) {
    root = process_event(rt, root, *ev);
    backend.show(project(root, rt.state()));
    root = drain_pending(rt, root, backend);
  }
  return root;
}

}  // namespace widget

// Model to Widget mapping: type definitions and function skeletons for the
// widget classes of a reactive application model.

#include "widget/modelgen.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "widget/syntax.hpp"

namespace widget {

using nlohmann::json;

const model::Operation* model::Class::handler(const std::string& n) const {
  for (auto& op : operations)
    if (op.kind == OpKind::Handler && op.name == n) return &op;
  return nullptr;
}

const model::Class* RappModel::find(const std::string& name) const {
  for (auto& c : classes)
    if (c.name == name) return &c;
  return nullptr;
}

std::string GeneratedSource::text() const {
  std::string out;
  for (auto& t : type_defs) out += t + "\n";
  for (auto& f : functions) out += "\n" + f + "\n";
  return out;
}

namespace {

std::string snake_case(const std::string& s) {
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (std::isupper(static_cast<unsigned char>(c))) {
      if (i > 0) out += '_';
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      out += c;
    }
  }
  return out;
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

// ---- loading ----

std::string str_or(const json& j, const char* key, const std::string& dflt = "") {
  return j.contains(key) ? j.at(key).get<std::string>() : dflt;
}

std::vector<model::Attribute> attributes(const json& j, const char* key) {
  std::vector<model::Attribute> out;
  if (!j.contains(key)) return out;
  for (auto& a : j.at(key)) out.push_back({a.at("name").get<std::string>(), a.at("type").get<std::string>()});
  return out;
}

std::vector<model::Binding> bindings(const json& j) {
  std::vector<model::Binding> out;
  if (!j.contains("bindings")) return out;
  for (auto& b : j.at("bindings"))
    out.push_back({b.at("name").get<std::string>(), b.at("type").get<std::string>(),
                   b.at("command").get<std::string>()});
  return out;
}

model::OpKind op_kind(const std::string& s) {
  if (s == "event") return model::OpKind::Event;
  if (s == "command") return model::OpKind::Command;
  if (s == "handler") return model::OpKind::Handler;
  if (s == "query") return model::OpKind::Query;
  throw ModelError("unknown operation kind " + s);
}

model::Class load_class(const json& j) {
  model::Class c;
  c.name = j.at("name").get<std::string>();
  auto stereo = str_or(j, "stereotype", "widget");
  if (stereo != "external" && stereo != "widget")
    throw ModelError("class " + c.name + " has unknown stereotype " + stereo);
  c.external = stereo == "external";
  c.superclass = str_or(j, "superclass");
  c.function = str_or(j, "function", snake_case(c.name));
  c.attributes = attributes(j, "attributes");
  if (j.contains("values"))
    for (auto& [k, v] : j.at("values").items()) c.values[k] = v.get<std::string>();
  if (j.contains("operations"))
    for (auto& o : j.at("operations"))
      c.operations.push_back({o.at("name").get<std::string>(), op_kind(str_or(o, "kind", "handler")),
                              attributes(o, "params")});
  if (j.contains("associations"))
    for (auto& a : j.at("associations")) {
      model::Association as;
      as.name = a.at("name").get<std::string>();
      if (a.contains("targets"))
        as.targets = a.at("targets").get<std::vector<std::string>>();
      else
        as.targets = {a.at("target").get<std::string>()};
      as.containment = a.value("containment", false);
      as.many = a.value("many", as.targets.size() > 1);
      as.command = a.value("command", false);
      as.type = str_or(a, "type");
      if (a.contains("args"))
        for (auto& [k, v] : a.at("args").items()) as.args[k] = v.get<std::string>();
      c.associations.push_back(std::move(as));
    }
  c.bindings = bindings(j);
  return c;
}

const model::Class* superclass_of(const RappModel& m, const model::Class& c) {
  return c.superclass.empty() ? nullptr : m.find(c.superclass);
}

bool extends(const RappModel& m, const model::Class& c, const std::string& base) {
  std::set<std::string> seen;
  for (auto k = &c; k && seen.insert(k->name).second; k = superclass_of(m, *k))
    if (k->name == base) return true;
  return false;
}

void validate(const RappModel& m) {
  std::vector<std::string> errs;
  if (m.states.empty() || m.initial.empty()) errs.push_back("no initial state");
  for (auto& c : m.classes) {
    if (!c.superclass.empty() && !m.find(c.superclass))
      errs.push_back("class " + c.name + " extends unknown class " + c.superclass);
    for (auto& a : c.associations)
      for (auto& t : a.targets)
        if (t != "Widget" && !m.find(t))
          errs.push_back("association " + c.name + "." + a.name + " targets unknown class " + t);
    if (c.external)
      for (auto& op : c.operations)
        if (op.kind == model::OpKind::Handler)
          errs.push_back("external class " + c.name + " declares handler " + op.name);
  }
  std::set<std::string> states;
  for (auto& s : m.states) {
    states.insert(s.name);
    auto c = m.find(s.name);
    if (!c)
      errs.push_back("state " + s.name + " names no class");
    else if (c->external)
      errs.push_back("state " + s.name + " is an external class");
    else if (!extends(m, *c, "Window"))
      errs.push_back("state " + s.name + " does not extend Window");
  }
  if (!m.initial.empty() && !states.count(m.initial))
    errs.push_back("initial state " + m.initial + " is not a state");
  for (auto& t : m.transitions) {
    if (!states.count(t.source)) errs.push_back("transition source " + t.source + " is not a state");
    if (!states.count(t.target)) errs.push_back("transition target " + t.target + " is not a state");
    auto c = m.find(t.source);
    if (c && !c->handler(t.event))
      errs.push_back("transition " + t.source + " --" + t.event + "--> " + t.target + " has no " +
                     t.event + " handler on " + t.source);
  }
  for (auto& inv : m.invariants) {
    if (!m.find(inv.context)) errs.push_back("invariant context " + inv.context + " is not a class");
    if (inv.lhs.find('.') == std::string::npos)
      errs.push_back("invariant " + inv.context + ": " + inv.lhs + " is not a path");
  }
  if (!errs.empty()) throw ModelError(join(errs, "\n"));
}

// ---- generation ----

/// Constructor parameters of the external widgets the generator can build.
struct ExternalCtor {
  std::string ctor;
  struct P {
    std::string name;
    enum Kind { Attr, Child, Children } kind;
    int type_slot;
  };
  std::vector<P> params;
  int type_params;
};

const ExternalCtor* external_ctor(const std::string& cls) {
  using P = ExternalCtor::P;
  static const std::map<std::string, ExternalCtor> reg = {
      {"Window", {"window", {{"title", P::Attr, -1}, {"child", P::Child, 0}}, 1}},
      {"Screen",
       {"screen",
        {{"x", P::Attr, -1}, {"y", P::Attr, -1}, {"w", P::Attr, -1}, {"h", P::Attr, -1}, {"child", P::Child, 0}},
        1}},
      {"Phone",
       {"phone", {{"title", P::Attr, -1}, {"display", P::Child, 0}, {"buttons", P::Children, 1}}, 2}},
      {"Button", {"button", {{"label", P::Attr, -1}}, 0}},
      {"Label", {"label", {{"text", P::Attr, -1}}, 0}},
      {"Clock", {"clock", {{"x", P::Attr, -1}, {"y", P::Attr, -1}}, 0}},
      {"Notifier", {"notifier", {{"port", P::Attr, -1}}, 0}},
      {"AddScreen", {"addscreen", {{"records", P::Attr, -1}}, 0}},
  };
  auto it = reg.find(cls);
  return it == reg.end() ? nullptr : &it->second;
}

enum Group { A1 = 1, A2, A3, A4 };

struct GenParam {
  std::string name;
  std::string type;
  Group group;
  /// For A4: the state this parameter refers back to.
  std::string state;
};

struct Component {
  std::string name;
  std::string type;
  std::string line;
};

struct Shape {
  std::vector<GenParam> params;
  std::string parent_expr;
  std::string parent_type;
  std::vector<Component> components;
};

class Generator {
 public:
  explicit Generator(const RappModel& m) : m_(m) {
    for (auto& s : m.states) refs_[s.name] = s.ref.empty() ? snake_case(s.name).substr(0, 1) : s.ref;
    build_tree();
  }

  GeneratedSource run() {
    GeneratedSource out;
    std::vector<const model::Class*> widgets;
    for (auto& c : m_.classes)
      if (!c.external) widgets.push_back(&c);
    for (auto c : widgets) shape(*c);
    for (auto c : widgets) emit(*c, out);
    std::vector<std::string> prelude = m_.prelude;
    out.type_defs.insert(out.type_defs.begin(), prelude.begin(), prelude.end());
    return out;
  }

 private:
  const RappModel& m_;
  std::map<std::string, std::string> refs_;
  std::map<std::string, std::string> tree_parent_;
  std::map<std::string, Shape> shapes_;
  std::set<std::string> in_progress_;

  [[noreturn]] static void fail(const std::string& msg) { throw ModelError(msg); }

  const model::Class& cls(const std::string& name) const {
    auto c = m_.find(name);
    if (!c) fail("unknown class " + name);
    return *c;
  }

  void build_tree() {
    std::vector<std::string> queue{m_.initial};
    std::set<std::string> seen{m_.initial};
    for (size_t i = 0; i < queue.size(); ++i)
      for (auto& t : m_.transitions)
        if (t.source == queue[i] && seen.insert(t.target).second) {
          tree_parent_[t.target] = queue[i];
          queue.push_back(t.target);
        }
  }

  bool is_state(const std::string& n) const { return refs_.count(n) > 0; }

  bool is_ancestor(const std::string& anc, const std::string& s) const {
    for (auto it = tree_parent_.find(s); it != tree_parent_.end(); it = tree_parent_.find(it->second))
      if (it->second == anc) return true;
    return false;
  }

  const model::Invariant* sharing(const std::string& context, const std::string& member) const {
    const model::Invariant* found = nullptr;
    for (auto& inv : m_.invariants)
      if (inv.context == context && inv.rhs == member) {
        if (found && found->lhs != inv.lhs)
          fail("ambiguous sharing: " + context + "." + member + " is both " + found->lhs + " and " + inv.lhs);
        found = &inv;
      }
    return found;
  }

  static GenParam* find_param(Shape& s, const std::string& name) {
    for (auto& p : s.params)
      if (p.name == name) return &p;
    return nullptr;
  }

  std::string attr_type(const model::Class& c, const std::string& name) const {
    std::set<std::string> seen;
    for (auto k = &c; k && seen.insert(k->name).second; k = superclass_of(m_, *k))
      for (auto& a : k->attributes)
        if (a.name == name) return a.type;
    fail("class " + c.name + " has no attribute " + name);
  }

  std::string type_name(const model::Class& c) const { return c.name; }

  // Value for an attribute needed while building `w`: a fixed value, a
  // shared path, or a parameter of w's function.
  std::string attr_value(const model::Class& w, Shape& s, const std::string& name, const std::string& type) {
    if (auto v = w.values.find(name); v != w.values.end()) return v->second;
    if (auto inv = sharing(w.name, name)) return inv->lhs;
    if (!find_param(s, name)) s.params.push_back({name, type, A1, ""});
    return name;
  }

  // Expression building an instance of `target` inside `w`.
  std::string construct(const model::Class& w, Shape& s, const std::string& target,
                        const std::map<std::string, std::string>& args) {
    auto& t = cls(target);
    if (t.external) {
      auto ext = external_ctor(t.name);
      if (!ext) fail("external class " + t.name + " has no constructor the generator can call");
      std::vector<std::string> out;
      for (auto& p : ext->params) {
        if (auto a = args.find(p.name); a != args.end()) {
          out.push_back(a->second);
        } else if (p.kind == ExternalCtor::P::Attr) {
          out.push_back(attr_value(w, s, p.name, attr_type(t, p.name)));
        } else {
          fail("argument " + p.name + " of " + ext->ctor + " inside " + w.name + " is not given");
        }
      }
      return ext->ctor + "(" + join(out, ",") + ")";
    }
    auto& callee = shape(t);
    std::vector<std::string> out;
    for (auto& p : callee.params) {
      if (auto a = args.find(p.name); a != args.end()) {
        out.push_back(a->second);
      } else if (p.group == A1) {
        out.push_back(attr_value(w, s, p.name, p.type));
      } else {
        if (!find_param(s, p.name)) s.params.push_back(p);
        out.push_back(p.name);
      }
    }
    return t.function + "(" + join(out, ",") + ")";
  }

  const Shape& shape(const model::Class& w) {
    if (auto it = shapes_.find(w.name); it != shapes_.end()) return it->second;
    if (!in_progress_.insert(w.name).second) fail("class " + w.name + " contains itself");
    Shape s;
    for (auto& a : w.attributes) attr_value(w, s, a.name, a.type);

    auto super = superclass_of(m_, w);
    if (!super) fail("widget class " + w.name + " has no superclass");
    std::set<std::string> used_assocs;
    if (super->external) {
      auto ext = external_ctor(super->name);
      if (!ext) fail("external class " + super->name + " has no constructor the generator can call");
      std::vector<std::string> args;
      std::vector<std::string> targs(static_cast<size_t>(ext->type_params));
      for (auto& p : ext->params) {
        if (p.kind == ExternalCtor::P::Attr) {
          args.push_back(attr_value(w, s, p.name, attr_type(*super, p.name)));
          continue;
        }
        auto assoc = std::find_if(w.associations.begin(), w.associations.end(),
                                  [&](auto& a) { return a.name == p.name; });
        if (assoc == w.associations.end())
          fail("class " + w.name + " does not specialize " + super->name + "." + p.name);
        used_assocs.insert(assoc->name);
        std::vector<std::string> built;
        std::vector<std::string> types;
        for (auto& t : assoc->targets) {
          built.push_back(construct(w, s, t, assoc->args));
          types.push_back(type_name(cls(t)));
        }
        if (p.type_slot >= 0) targs[static_cast<size_t>(p.type_slot)] = join(types, "+");
        args.push_back(p.kind == ExternalCtor::P::Children ? "[" + join(built, ",") + "]" : built.front());
      }
      std::string ta = targs.empty() ? "" : "[" + join(targs, ",") + "]";
      s.parent_expr = ext->ctor + ta + "(" + join(args, ",") + ")";
      s.parent_type = super->name + ta;
    } else {
      s.parent_expr = construct(w, s, super->name, {});
      s.parent_type = super->name;
    }

    for (auto& b : w.bindings) s.components.push_back({b.name, b.type, b.name + ":" + b.type + " <- " + b.command});
    for (auto& a : w.associations) {
      if (used_assocs.count(a.name) || !a.containment) continue;
      if (a.many || a.targets.size() != 1) fail("component " + w.name + "." + a.name + " must have one target");
      auto& t = cls(a.targets.front());
      std::string type = a.type.empty() ? type_name(t) : a.type;
      if (sharing(w.name, a.name)) {
        s.params.push_back({a.name, type, A3, ""});
        s.components.push_back({a.name, type, a.name + ":" + type + " = " + a.name});
      } else {
        s.components.push_back({a.name, type, a.name + ":" + type + " <- " + construct(w, s, t.name, a.args)});
      }
    }
    for (auto& a : w.associations) {
      if (a.containment) continue;
      if (a.targets.size() != 1) fail("reference " + w.name + "." + a.name + " must have one target");
      s.params.push_back({a.name, a.type.empty() ? a.targets.front() : a.type, A2, ""});
    }
    if (is_state(w.name))
      for (auto& t : m_.transitions)
        if (t.source == w.name && t.target != w.name && is_ancestor(t.target, w.name)) {
          auto& ref = refs_.at(t.target);
          if (!find_param(s, ref)) s.params.push_back({ref, t.target, A4, t.target});
        }
    std::stable_sort(s.params.begin(), s.params.end(),
                     [](const GenParam& a, const GenParam& b) { return a.group < b.group; });
    in_progress_.erase(w.name);
    return shapes_[w.name] = std::move(s);
  }

  // Names visible in a handler of `w`.
  bool in_scope(const model::Class& w, const model::Operation& op,
                const std::vector<model::Binding>& local, const std::string& name) {
    auto& s = shapes_.at(w.name);
    if (find_param(s, name)) return true;
    for (auto& c : s.components)
      if (c.name == name) return true;
    for (auto& p : op.params)
      if (p.name == name) return true;
    for (auto& b : local)
      if (b.name == name) return true;
    return false;
  }

  // Member `member` of state `u` as seen from a handler of `w`.
  std::string member_path(const model::Class& w, const std::string& lhs) {
    auto dot = lhs.find('.');
    auto head = lhs.substr(0, dot);
    auto member = lhs.substr(dot + 1);
    std::string state;
    for (auto& [st, ref] : refs_)
      if (ref == head) state = st;
    if (state.empty()) fail("invariant path " + lhs + " does not start at a state reference");
    auto& target = shapes_.at(state);
    bool known = find_param(target, member) != nullptr;
    for (auto& c : target.components) known = known || c.name == member;
    auto& tc = cls(state);
    for (auto& a : tc.attributes) known = known || a.name == member;
    if (!known) fail("invariant path " + lhs + ": " + state + " has no member " + member);
    if (state == w.name) return member;
    if (find_param(shapes_.at(w.name), head)) return lhs;
    fail("invariant path " + lhs + " cannot be followed from " + w.name);
  }

  // Command performing the transition to `target` from a handler of `w`.
  std::string transition_command(const model::Class& w, const model::Operation& op,
                                 const std::vector<model::Binding>& local, const std::string& target) {
    if (target == w.name) return "do { return self }";
    auto& ws = shapes_.at(w.name);
    if (auto p = find_param(ws, refs_.at(target)); p && p->group == A4) return "do { return " + p->name + " }";
    auto& t = cls(target);
    auto& ts = shapes_.at(target);
    std::vector<std::string> args;
    for (auto& p : ts.params) {
      if (p.group == A4) {
        if (p.state == w.name)
          args.push_back("self");
        else if (find_param(ws, p.name))
          args.push_back(p.name);
        else
          fail("transition " + w.name + " --" + op.name + "--> " + target + " cannot supply " + p.name);
      } else if (auto inv = sharing(target, p.name)) {
        args.push_back(member_path(w, inv->lhs));
      } else if (in_scope(w, op, local, p.name)) {
        args.push_back(p.name);
      } else {
        fail("transition " + w.name + " --" + op.name + "--> " + target + " cannot supply " + p.name);
      }
    }
    return t.function + "(" + join(args, ",") + ")";
  }

  void emit(const model::Class& w, GeneratedSource& out) {
    auto& s = shapes_.at(w.name);
    std::vector<std::string> fields;
    for (auto& c : s.components) fields.push_back(c.name + ":" + c.type);
    std::vector<std::string> body;
    for (auto& c : s.components) body.push_back(c.line);

    for (auto& op : w.operations) {
      if (op.kind != model::OpKind::Handler) continue;
      std::vector<std::string> ptexts, ptypes;
      for (auto& p : op.params) {
        ptexts.push_back(p.name + ":" + p.type);
        ptypes.push_back(p.type);
      }
      std::vector<const model::Transition*> ts;
      for (auto& t : m_.transitions)
        if (t.source == w.name && t.event == op.name) ts.push_back(&t);
      std::string head = op.name + "(" + join(ptexts, ",") + ")";
      if (ts.empty()) {
        out.todos.push_back(w.name + "." + op.name);
        fields.push_back(op.name + ":(" + join(ptypes, ",") + ")-><" + w.name + ">");
        body.push_back("// TODO: " + op.name + " handler\n    " + head + ":<" + w.name + "> = do { return self }");
        continue;
      }
      std::vector<model::Binding> local;
      for (auto t : ts)
        for (auto& b : t->bindings)
          if (std::none_of(local.begin(), local.end(), [&](auto& x) { return x.name == b.name; }))
            local.push_back(b);
      std::vector<std::string> targets;
      auto add_target = [&](const std::string& t) {
        if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
      };
      std::vector<std::pair<std::string, std::string>> guarded;
      std::optional<std::string> fallback;
      for (auto t : ts) {
        auto cmd = transition_command(w, op, local, t->target);
        add_target(t->target);
        if (!t->guard.empty()) {
          guarded.emplace_back(t->guard, cmd);
        } else {
          if (fallback) fail("handler " + w.name + "." + op.name + " has two unguarded transitions");
          fallback = cmd;
        }
      }
      if (!guarded.empty() && !fallback) {
        fallback = "do { return self }";
        add_target(w.name);
      }
      std::string choice = *fallback;
      for (auto it = guarded.rbegin(); it != guarded.rend(); ++it)
        choice = "if " + it->first + " then " + it->second + " else " + choice;
      std::string ret = join(targets, "+");
      std::string expr;
      if (local.empty()) {
        expr = choice;
      } else {
        std::vector<std::string> lines;
        for (auto& b : local) lines.push_back("      " + b.name + ":" + b.type + " <- " + b.command);
        // A transition that stays put or goes back returns the widget directly.
        const std::string trivial = "do { return ";
        std::string result = "next";
        if (guarded.empty() && choice.rfind(trivial, 0) == 0)
          result = choice.substr(trivial.size(), choice.size() - trivial.size() - 2);
        else
          lines.push_back("      next:" + ret + " <- " + choice);
        expr = "do {\n" + join(lines, ";\n") + "\n      return " + result + "\n    }";
      }
      fields.push_back(op.name + ":(" + join(ptypes, ",") + ")-><" + ret + ">");
      body.push_back(head + ":<" + ret + "> = " + expr);
    }

    std::vector<std::string> raises;
    for (auto& op : w.operations)
      if (op.kind == model::OpKind::Event) {
        std::vector<std::string> ts;
        for (auto& p : op.params) ts.push_back(p.type);
        raises.push_back(op.name + "(" + join(ts, ",") + ")");
      }
    std::string type = "type " + w.name + " = Widget(" + s.parent_type + ")";
    if (!raises.empty()) type += " raises " + join(raises, ",");
    if (fields.empty())
      type += " {}";
    else
      type += " {\n  " + join(fields, ";\n  ") + "\n}";
    out.type_defs.push_back(type);

    std::vector<std::string> params;
    for (auto& p : s.params) params.push_back(p.name + ":" + p.type);
    std::string fn = "fun " + w.function + "(" + join(params, ",") + "):<" + w.name + "> =\n  widget self:" +
                     w.name + " (" + s.parent_expr + ") {";
    if (body.empty())
      fn += "}";
    else
      fn += "\n    " + join(body, ";\n    ") + "\n  }";
    out.functions.push_back(fn);
  }
};

ExprP rewrite(const ExprP& e, const std::set<std::string>& todos);

std::vector<Binding> rewrite_bindings(const std::vector<Binding>& bs, const std::set<std::string>& todos) {
  std::vector<Binding> out;
  for (auto b : bs) {
    b.expr = rewrite(b.expr, todos);
    out.push_back(std::move(b));
  }
  return out;
}

ExprP rewrite(const ExprP& e, const std::set<std::string>& todos) {
  if (!e) return e;
  return std::visit(
      [&](const auto& n) -> ExprP {
        using N = std::decay_t<decltype(n)>;
        N c = n;
        if constexpr (std::is_same_v<N, ex::Widget>) {
          std::string tname;
          if (c.self_type)
            if (auto v = (*c.self_type)->template as<ty::Var>()) tname = v->name;
          c.parent = rewrite(c.parent, todos);
          for (auto& b : c.body) {
            if (b.kind == BindKind::Handler && todos.count(tname + "." + b.name)) {
              b.expr = mk(b.expr->pos, ex::Do{{}, mk(b.expr->pos, ex::Var{c.self_name})});
              b.type = parse_type("<" + tname + ">", false);
            } else {
              b.expr = rewrite(b.expr, todos);
            }
          }
        } else if constexpr (std::is_same_v<N, ex::Do>) {
          c.bindings = rewrite_bindings(c.bindings, todos);
          c.result = rewrite(c.result, todos);
        } else if constexpr (std::is_same_v<N, ex::Letrec>) {
          c.bindings = rewrite_bindings(c.bindings, todos);
          c.body = rewrite(c.body, todos);
        } else if constexpr (std::is_same_v<N, ex::Let>) {
          c.value = rewrite(c.value, todos);
          c.body = rewrite(c.body, todos);
        } else if constexpr (std::is_same_v<N, ex::If>) {
          c.cond = rewrite(c.cond, todos);
          c.then_branch = rewrite(c.then_branch, todos);
          c.else_branch = rewrite(c.else_branch, todos);
        } else if constexpr (std::is_same_v<N, ex::Lambda>) {
          c.body = rewrite(c.body, todos);
        } else if constexpr (std::is_same_v<N, ex::Apply>) {
          c.fn = rewrite(c.fn, todos);
          for (auto& a : c.args) a = rewrite(a, todos);
        } else if constexpr (std::is_same_v<N, ex::List>) {
          for (auto& a : c.elems) a = rewrite(a, todos);
        } else if constexpr (std::is_same_v<N, ex::TypeAbs>) {
          c.body = rewrite(c.body, todos);
        }
        return mk(e->pos, std::move(c));
      },
      e->node);
}

}  // namespace

RappModel load_model(const json& j) {
  RappModel m;
  try {
    if (!j.is_object()) throw ModelError("model must be a JSON object");
    if (j.contains("prelude")) m.prelude = j.at("prelude").get<std::vector<std::string>>();
    if (j.contains("classes"))
      for (auto& c : j.at("classes")) m.classes.push_back(load_class(c));
    if (j.contains("statemachine")) {
      auto& sm = j.at("statemachine");
      m.initial = str_or(sm, "initial");
      if (sm.contains("states"))
        for (auto& s : sm.at("states")) {
          if (s.is_string())
            m.states.push_back({s.get<std::string>(), ""});
          else
            m.states.push_back({s.at("name").get<std::string>(), str_or(s, "ref")});
        }
      if (sm.contains("transitions"))
        for (auto& t : sm.at("transitions"))
          m.transitions.push_back({t.at("source").get<std::string>(), t.at("event").get<std::string>(),
                                   t.at("target").get<std::string>(), str_or(t, "guard"), bindings(t)});
    }
    if (j.contains("invariants"))
      for (auto& i : j.at("invariants"))
        m.invariants.push_back({i.at("context").get<std::string>(), i.at("lhs").get<std::string>(),
                                i.at("rhs").get<std::string>()});
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed model: ") + e.what());
  }
  validate(m);
  return m;
}

RappModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot read " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ModelError(path + ": " + e.what());
  }
  return load_model(j);
}

GeneratedSource generate(const RappModel& m) { return Generator(m).run(); }

Program normalize_holes(const Program& p, const std::vector<std::string>& todos) {
  std::set<std::string> set(todos.begin(), todos.end());
  Program out = p;
  for (auto& d : out.defs)
    if (d.body) d.body = rewrite(*d.body, set);
  return out;
}

}  // namespace widget

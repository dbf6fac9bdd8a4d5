#include "widget/value.hpp"

#include <sstream>

namespace widget {

EnvP extend(EnvP env, std::string name, ValueP value) {
  return std::make_shared<const EnvNode>(EnvNode{std::move(name), std::move(value), std::move(env)});
}

const Slot* Instance::handler(const std::string& name, size_t arity) const {
  for (auto& h : handlers) {
    if (h.name != name) continue;
    auto c = h.value->as<val::Closure>();
    if (c && c->params.size() == arity) return &h;
  }
  return nullptr;
}

ValueP v_str(std::string s) { return make_value(val::Str{std::move(s)}); }
ValueP v_int(std::int64_t i) { return make_value(val::Int{i}); }
ValueP v_bool(bool b) { return make_value(val::Bool{b}); }
ValueP v_unit() {
  static const ValueP unit = make_value(val::Unit{});
  return unit;
}
ValueP v_widget(InstanceP inst) { return make_value(val::WidgetRef{std::move(inst)}); }

bool is_command(const Value& v) {
  return v.as<val::DoCmd>() || v.as<val::WidgetCmd>() || v.as<val::RaiseCmd>() ||
         v.as<val::TopCmd>() || v.as<val::BuiltinCmd>() || v.as<val::ExtCmd>() ||
         v.as<val::FieldCmd>();
}

bool is_function(const Value& v) {
  return v.as<val::Closure>() || v.as<val::Builtin>() || v.as<val::ExtMethod>();
}

bool values_equal(const ValueP& a, const ValueP& b) {
  if (a == b) return true;
  if (auto x = a->as<val::Str>()) {
    auto y = b->as<val::Str>();
    return y && x->value == y->value;
  }
  if (auto x = a->as<val::Int>()) {
    auto y = b->as<val::Int>();
    return y && x->value == y->value;
  }
  if (auto x = a->as<val::Bool>()) {
    auto y = b->as<val::Bool>();
    return y && x->value == y->value;
  }
  if (a->as<val::Unit>()) return b->as<val::Unit>() != nullptr;
  if (auto x = a->as<val::List>()) {
    auto y = b->as<val::List>();
    if (!y || x->elems.size() != y->elems.size()) return false;
    for (size_t i = 0; i < x->elems.size(); ++i)
      if (!values_equal(x->elems[i], y->elems[i])) return false;
    return true;
  }
  if (auto x = a->as<val::Record>()) {
    auto y = b->as<val::Record>();
    if (!y || x->fields.size() != y->fields.size()) return false;
    for (auto& f : x->fields) {
      bool found = false;
      for (auto& g : y->fields)
        if (g.name == f.name) {
          if (!values_equal(f.value, g.value)) return false;
          found = true;
        }
      if (!found) return false;
    }
    return true;
  }
  if (auto x = a->as<val::WidgetRef>()) {
    auto y = b->as<val::WidgetRef>();
    return y && x->instance == y->instance;
  }
  if (auto x = a->as<val::LocRef>()) {
    auto y = b->as<val::LocRef>();
    return y && x->id == y->id;
  }
  return false;
}

std::string describe(const ValueP& v) {
  std::ostringstream out;
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, val::Str>) {
          out << "'" << n.value << "'";
        } else if constexpr (std::is_same_v<N, val::Int>) {
          out << n.value;
        } else if constexpr (std::is_same_v<N, val::Bool>) {
          out << (n.value ? "true" : "false");
        } else if constexpr (std::is_same_v<N, val::Unit>) {
          out << "*";
        } else if constexpr (std::is_same_v<N, val::List>) {
          out << "[";
          for (size_t i = 0; i < n.elems.size(); ++i) out << (i ? "," : "") << describe(n.elems[i]);
          out << "]";
        } else if constexpr (std::is_same_v<N, val::Record>) {
          out << "{";
          for (size_t i = 0; i < n.fields.size(); ++i)
            out << (i ? ";" : "") << n.fields[i].name << "=" << describe(n.fields[i].value);
          out << "}";
        } else if constexpr (std::is_same_v<N, val::WidgetRef>) {
          out << "widget(" << n.instance->id << ")";
        } else if constexpr (std::is_same_v<N, val::LocRef>) {
          out << "loc(" << n.id << ")";
        } else if constexpr (std::is_same_v<N, val::Closure>) {
          out << "<function>";
        } else if constexpr (std::is_same_v<N, val::Builtin>) {
          out << n.name;
        } else if constexpr (std::is_same_v<N, val::Cell>) {
          out << (*n.slot ? describe(*n.slot) : std::string("<unfilled>"));
        } else {
          out << "<command>";
        }
      },
      v->node);
  return out.str();
}

}  // namespace widget

// Canonical pretty-printer. Output re-parses to a structurally equal AST.

#include <sstream>

#include "widget/syntax.hpp"

namespace widget {

namespace {

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    switch (c) {
      case '\'': out += "\\'"; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "'";
}

bool extends_right(const Type& t) {
  return t.as<ty::Func>() || t.as<ty::Rec>() || t.as<ty::Forall>() || t.as<ty::Union>();
}

std::string type_str(const Type& t);

std::string single(const Type& t) {
  auto s = type_str(t);
  return extends_right(t) ? "(" + s + ")" : s;
}

std::string sigs(const EffectSet& zs) {
  std::string out;
  for (size_t i = 0; i < zs.size(); ++i) {
    if (i) out += ", ";
    out += pretty_print(zs[i]);
  }
  return out;
}

std::string fields(const std::vector<TypeField>& fs, const char* sep) {
  std::string out;
  for (size_t i = 0; i < fs.size(); ++i) {
    if (i) out += "; ";
    out += fs[i].name + sep + type_str(*fs[i].type);
  }
  return out;
}

std::string list(const std::vector<TypeP>& ts) {
  std::string out;
  for (size_t i = 0; i < ts.size(); ++i) {
    if (i) out += ",";
    out += type_str(*ts[i]);
  }
  return out;
}

std::string type_str(const Type& t) {
  return std::visit(
      [](const auto& n) -> std::string {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, ty::Prim>) {
          switch (n.kind) {
            case PrimKind::Str: return "str";
            case PrimKind::Int: return "int";
            case PrimKind::Bool: return "bool";
            case PrimKind::Unit: return "*";
            case PrimKind::Top: return "Top";
          }
          return "?";
        } else if constexpr (std::is_same_v<N, ty::List>) {
          return "[" + type_str(*n.elem) + "]";
        } else if constexpr (std::is_same_v<N, ty::Record>) {
          return "{" + fields(n.fields, ":") + "}";
        } else if constexpr (std::is_same_v<N, ty::Command>) {
          std::string s = "<" + type_str(*n.yield) + ">";
          if (!n.effects.empty()) s += " raises " + sigs(n.effects);
          return s;
        } else if constexpr (std::is_same_v<N, ty::Union>) {
          std::string s;
          for (size_t i = 0; i < n.alts.size(); ++i) {
            if (i) s += "+";
            s += single(*n.alts[i]);
          }
          return s;
        } else if constexpr (std::is_same_v<N, ty::Widget>) {
          std::string s = "Widget(" + type_str(*n.parent) + ")";
          if (!n.effects.empty()) s += " raises " + sigs(n.effects);
          return s + " {" + fields(n.fields, ":") + "}";
        } else if constexpr (std::is_same_v<N, ty::Func>) {
          return "(" + list(n.params) + ")->" + type_str(*n.ret);
        } else if constexpr (std::is_same_v<N, ty::App>) {
          if (n.args.empty()) return n.name;
          return n.name + "[" + list(n.args) + "]";
        } else if constexpr (std::is_same_v<N, ty::Rec>) {
          return "rec " + n.var + "." + type_str(*n.body);
        } else if constexpr (std::is_same_v<N, ty::Var>) {
          return n.name;
        } else if constexpr (std::is_same_v<N, ty::TypeRecord>) {
          return "{{" + fields(n.entries, "=") + "}}";
        } else if constexpr (std::is_same_v<N, ty::Member>) {
          return single(*n.base) + "." + n.name;
        } else if constexpr (std::is_same_v<N, ty::Forall>) {
          std::string s = "Forall(";
          for (size_t i = 0; i < n.vars.size(); ++i) s += (i ? "," : "") + n.vars[i];
          return s + ")" + type_str(*n.body);
        } else {
          static_assert(std::is_same_v<N, ty::Loc>);
          return "!" + single(*n.elem);
        }
      },
      t.node);
}

int binop_prec(const std::string& op) {
  if (op == "=" || op == "<>") return 1;
  if (op == "<" || op == "<=" || op == ">" || op == ">=") return 2;
  if (op == "+" || op == "-") return 3;
  return 4;
}

bool open_ended(const Expr& e) {
  return e.as<ex::If>() || e.as<ex::Let>() || e.as<ex::Letrec>() || e.as<ex::Lambda>() ||
         e.as<ex::TypeAbs>();
}

class ExprPrinter {
 public:
  std::string run(const Expr& e) {
    print(e, 0, 0);
    return out_.str();
  }

  // min_prec 0 accepts any expression; higher values require tighter forms.
  void print(const Expr& e, int min_prec, int indent) {
    if (auto b = e.as<ex::BinOp>()) {
      int p = binop_prec(b->op);
      bool paren = p <= min_prec;
      if (paren) out_ << "(";
      print(*b->lhs, p - 1, indent);
      out_ << " " << b->op << " ";
      print(*b->rhs, p, indent);
      if (paren) out_ << ")";
      return;
    }
    if (min_prec > 0 && open_ended(e)) {
      out_ << "(";
      print(e, 0, indent);
      out_ << ")";
      return;
    }
    std::visit([&](const auto& n) { node(n, indent); }, e.node);
  }

 private:
  void nl(int indent) { out_ << "\n" << std::string(indent, ' '); }

  void args(const std::vector<ExprP>& xs, int indent) {
    for (size_t i = 0; i < xs.size(); ++i) {
      if (i) out_ << ", ";
      print(*xs[i], 0, indent);
    }
  }

  void params(const std::vector<Param>& ps) {
    for (size_t i = 0; i < ps.size(); ++i) {
      if (i) out_ << ", ";
      out_ << ps[i].name << ":" << type_str(*ps[i].type);
    }
  }

  void binding(const Binding& b, int indent) {
    out_ << b.name;
    switch (b.kind) {
      case BindKind::Perform: out_ << ":" << type_str(*b.type) << " <- "; break;
      case BindKind::Value: out_ << ":" << type_str(*b.type) << " = "; break;
      case BindKind::Handler:
        out_ << "(";
        params(b.params);
        out_ << "):" << type_str(*b.type) << " = ";
        break;
    }
    print(*b.expr, 0, indent);
  }

  void node(const ex::Var& n, int) { out_ << n.name; }
  void node(const ex::Str& n, int) { out_ << quote(n.value); }
  void node(const ex::Int& n, int) {
    if (n.value < 0)
      out_ << "(" << n.value << ")";
    else
      out_ << n.value;
  }
  void node(const ex::Bool& n, int) { out_ << (n.value ? "true" : "false"); }
  void node(const ex::List& n, int indent) {
    out_ << "[";
    args(n.elems, indent);
    out_ << "]";
  }
  void node(const ex::EmptyList& n, int) { out_ << "[][" << type_str(*n.elem) << "]"; }
  void node(const ex::Record& n, int indent) {
    out_ << "{";
    for (size_t i = 0; i < n.fields.size(); ++i) {
      if (i) out_ << ";";
      out_ << n.fields[i].name << "=";
      print(*n.fields[i].value, 0, indent);
    }
    out_ << "}";
  }
  void node(const ex::FieldRef& n, int indent) {
    print(*n.base, 100, indent);
    out_ << "." << n.name;
  }
  void node(const ex::Lambda& n, int indent) {
    out_ << "fun(";
    params(n.params);
    out_ << "):" << type_str(*n.ret) << " ";
    print(*n.body, 0, indent);
  }
  void node(const ex::Apply& n, int indent) {
    print(*n.fn, 100, indent);
    out_ << "(";
    args(n.args, indent);
    out_ << ")";
  }
  void node(const ex::If& n, int indent) {
    out_ << "if ";
    print(*n.cond, 0, indent);
    out_ << " then ";
    print(*n.then_branch, 0, indent);
    out_ << " else ";
    print(*n.else_branch, 0, indent);
  }
  void node(const ex::Fix& n, int indent) {
    out_ << "fix(";
    print(*n.fn, 0, indent);
    out_ << ")";
  }
  void node(const ex::Raise& n, int indent) {
    out_ << "raise " << n.name << "(";
    args(n.args, indent);
    out_ << ")";
  }
  void node(const ex::Do& n, int indent) {
    if (n.bindings.empty()) {
      out_ << "do { return ";
      print(*n.result, 0, indent);
      out_ << " }";
      return;
    }
    out_ << "do {";
    for (auto& b : n.bindings) {
      nl(indent + 2);
      binding(b, indent + 2);
      out_ << ";";
    }
    nl(indent + 2);
    out_ << "return ";
    print(*n.result, 0, indent + 2);
    nl(indent);
    out_ << "}";
  }
  void node(const ex::Widget& n, int indent) {
    out_ << "widget " << n.self_name;
    if (n.self_type) out_ << ":" << type_str(**n.self_type);
    out_ << " (";
    print(*n.parent, 0, indent);
    out_ << ") {";
    if (n.body.empty()) {
      out_ << "}";
      return;
    }
    for (size_t i = 0; i < n.body.size(); ++i) {
      nl(indent + 2);
      binding(n.body[i], indent + 2);
      if (i + 1 < n.body.size()) out_ << ";";
    }
    nl(indent);
    out_ << "}";
  }
  void node(const ex::Top&, int) { out_ << "top"; }
  void node(const ex::TypeAbs& n, int indent) {
    out_ << "Fun[";
    for (size_t i = 0; i < n.vars.size(); ++i) out_ << (i ? "," : "") << n.vars[i];
    out_ << "] ";
    print(*n.body, 0, indent);
  }
  void node(const ex::TypeApp& n, int indent) {
    print(*n.expr, 100, indent);
    out_ << "[" << list(n.types) << "]";
  }
  void node(const ex::BinOp&, int) {}
  void node(const ex::Let& n, int indent) {
    out_ << "let " << n.name << ":" << type_str(*n.type) << " = ";
    print(*n.value, 0, indent);
    nl(indent);
    out_ << "in ";
    print(*n.body, 0, indent);
  }
  void node(const ex::Letrec& n, int indent) {
    out_ << "letrec";
    for (size_t i = 0; i < n.bindings.size(); ++i) {
      nl(indent + 2);
      auto& b = n.bindings[i];
      out_ << b.name << ":" << type_str(*b.type) << " = ";
      print(*b.expr, 0, indent + 2);
      if (i + 1 < n.bindings.size()) out_ << ";";
    }
    nl(indent);
    out_ << "in ";
    print(*n.body, 0, indent);
  }

  std::ostringstream out_;
};

}  // namespace

std::string pretty_print(const Type& t) { return type_str(t); }

std::string pretty_print(const EventSig& z) { return z.name + "(" + list(z.args) + ")"; }

std::string pretty_print(const Expr& e) { return ExprPrinter().run(e); }

std::string pretty_print(const Program& p) {
  std::string out;
  for (auto& d : p.defs) {
    switch (d.kind) {
      case DefKind::Type:
        out += "type " + d.name + " = " + type_str(**d.type);
        break;
      case DefKind::Fun: {
        out += d.rec ? "rec fun " : "fun ";
        out += d.name + "(";
        for (size_t i = 0; i < d.params.size(); ++i) {
          if (i) out += ", ";
          out += d.params[i].name + ":" + type_str(*d.params[i].type);
        }
        out += "):" + type_str(**d.type) + " =\n  " + pretty_print(**d.body);
        break;
      }
      case DefKind::Val:
        out += "val " + d.name;
        if (d.type) out += ":" + type_str(**d.type);
        out += " =\n  " + pretty_print(**d.body);
        break;
    }
    out += "\n\n";
  }
  return out;
}

}  // namespace widget

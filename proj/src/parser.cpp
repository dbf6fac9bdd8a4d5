// Lexer and recursive-descent parser for Widget source text.

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "widget/error.hpp"
#include "widget/syntax.hpp"

namespace widget {

namespace {

enum class Tok { Ident, Keyword, Int, Str, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  Pos pos;
  std::int64_t number = 0;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "fun",  "val",  "type",   "rec",   "letrec", "let",    "in",     "if",    "then",
      "else", "fix",  "raise",  "raises", "do",    "return", "widget", "top",   "Fun",
      "Forall", "Widget", "true", "false", "str",  "int",    "bool",   "Top"};
  return kw;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Pos p{line_, col_};
      if (i_ >= src_.size()) {
        out.push_back({Tok::End, "<end of input>", p});
        return out;
      }
      char c = src_[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        while (i_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) {
          id += advance();
        }
        out.push_back({keywords().count(id) ? Tok::Keyword : Tok::Ident, id, p});
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string digits;
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_])))
          digits += advance();
        Token t{Tok::Int, digits, p};
        try {
          t.number = std::stoll(digits);
        } catch (const std::out_of_range&) {
          throw SyntaxError(p, "integer literal out of range");
        }
        out.push_back(t);
      } else if (c == '\'') {
        advance();
        std::string s;
        for (;;) {
          if (i_ >= src_.size()) throw SyntaxError(p, "unterminated string literal");
          char d = advance();
          if (d == '\'') break;
          if (d == '\\') {
            if (i_ >= src_.size()) throw SyntaxError(p, "unterminated string literal");
            char e = advance();
            switch (e) {
              case 'n': s += '\n'; break;
              case 't': s += '\t'; break;
              case '\\': s += '\\'; break;
              case '\'': s += '\''; break;
              default: throw SyntaxError({line_, col_ - 1}, "unknown escape \\" + std::string(1, e));
            }
          } else {
            s += d;
          }
        }
        out.push_back({Tok::Str, s, p});
      } else {
        static const char* two[] = {"<-", "->", "<=", ">=", "<>"};
        std::string punct;
        for (auto t : two) {
          if (src_.substr(i_, 2) == t) {
            punct = t;
            break;
          }
        }
        if (punct.empty()) {
          static const std::string singles = "()[]{},;:.=<>+-*!";
          if (singles.find(c) == std::string::npos)
            throw SyntaxError(p, std::string("unexpected character '") + c + "'");
          punct = std::string(1, c);
        }
        for (size_t k = 0; k < punct.size(); ++k) advance();
        out.push_back({Tok::Punct, punct, p});
      }
    }
  }

 private:
  char advance() {
    char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  Program program() {
    Program p;
    while (!at_end()) {
      if (accept(";")) continue;
      p.defs.push_back(top_def());
    }
    return p;
  }

  ExprP whole_expr() {
    auto e = expr();
    expect_end();
    return e;
  }

  TypeP whole_type(bool declaration) {
    auto t = type(declaration);
    expect_end();
    return t;
  }

 private:
  // ---- token helpers -------------------------------------------------
  const Token& cur() const { return toks_[i_]; }
  const Token& peek(size_t k = 1) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  bool at_end() const { return cur().kind == Tok::End; }

  bool is(const std::string& text) const {
    return (cur().kind == Tok::Punct || cur().kind == Tok::Keyword) && cur().text == text;
  }
  bool is_at(size_t k, const std::string& text) const {
    auto& t = peek(k);
    return (t.kind == Tok::Punct || t.kind == Tok::Keyword) && t.text == text;
  }
  bool accept(const std::string& text) {
    if (is(text)) {
      ++i_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string msg = "unexpected '" + cur().text + "', expected ";
    for (size_t k = 0; k < expected.size(); ++k) {
      if (k) msg += k + 1 == expected.size() ? " or " : ", ";
      msg += expected[k];
    }
    throw SyntaxError(cur().pos, msg, std::move(expected));
  }
  Pos expect(const std::string& text) {
    // `>=` closes a command type immediately followed by `=`.
    if (text == ">" && is(">=")) {
      Pos p = cur().pos;
      toks_[i_].text = "=";
      toks_[i_].pos.col += 1;
      return p;
    }
    if (!is(text)) fail({"'" + text + "'"});
    return toks_[i_++].pos;
  }
  std::string ident() {
    if (cur().kind != Tok::Ident) fail({"identifier"});
    return toks_[i_++].text;
  }
  // Record labels may reuse keywords (`contact.val`).
  std::string label() {
    if (cur().kind != Tok::Ident && cur().kind != Tok::Keyword) fail({"field name"});
    return toks_[i_++].text;
  }
  void expect_end() {
    if (!at_end()) fail({"end of input"});
  }

  // ---- top level -----------------------------------------------------
  TopDef top_def() {
    TopDef d;
    d.pos = cur().pos;
    if (accept("type")) {
      d.kind = DefKind::Type;
      d.name = ident();
      expect("=");
      d.type = type(true);
      return d;
    }
    if (accept("rec")) {
      d.rec = true;
      if (!is("fun")) fail({"'fun'"});
    }
    if (accept("fun")) {
      d.kind = DefKind::Fun;
      d.name = ident();
      expect("(");
      d.params = params(")");
      expect(")");
      expect(":");
      d.type = type(false);
      expect("=");
      d.body = expr();
      return d;
    }
    if (accept("val")) {
      d.kind = DefKind::Val;
      d.name = ident();
      if (accept(":")) d.type = type(false);
      expect("=");
      d.body = expr();
      return d;
    }
    fail({"'fun'", "'val'", "'type'", "'rec'"});
  }

  std::vector<Param> params(const std::string& close) {
    std::vector<Param> ps;
    if (is(close)) return ps;
    do {
      Param p;
      p.name = ident();
      expect(":");
      p.type = type(false);
      ps.push_back(std::move(p));
    } while (accept(","));
    return ps;
  }

  // ---- types ---------------------------------------------------------
  TypeP type(bool decl) {
    std::vector<TypeP> alts{type_single(decl)};
    while (accept("+")) alts.push_back(type_single(decl));
    return t_union(std::move(alts));
  }

  EffectSet raises(bool& present) {
    EffectSet out;
    present = false;
    if (!accept("raises")) return out;
    present = true;
    for (;;) {
      EventSig z;
      z.name = ident();
      expect("(");
      if (!is(")")) {
        do {
          z.args.push_back(type(true));
        } while (accept(","));
      }
      expect(")");
      out.push_back(std::move(z));
      // A comma continues the list only when another signature follows.
      if (is(",") && peek(1).kind == Tok::Ident && is_at(2, "(")) {
        ++i_;
        continue;
      }
      return out;
    }
  }

  std::vector<TypeField> type_fields(bool decl, const std::string& sep) {
    std::vector<TypeField> fs;
    while (!is("}")) {
      TypeField f;
      f.name = label();
      expect(sep);
      f.type = type(decl);
      fs.push_back(std::move(f));
      if (!accept(";")) break;
    }
    return fs;
  }

  TypeP type_single(bool decl) {
    TypeP t = type_atom(decl);
    while (is(".") && peek().kind == Tok::Ident) {
      ++i_;
      t = TypeP(Type{ty::Member{t, ident()}});
    }
    return t;
  }

  TypeP type_atom(bool decl) {
    if (accept("str")) return t_str();
    if (accept("int")) return t_int();
    if (accept("bool")) return t_bool();
    if (accept("Top")) return t_top();
    if (accept("*")) return t_unit();
    if (accept("!")) return t_loc(type_single(decl));
    if (accept("[")) {
      auto e = type(decl);
      expect("]");
      return t_list(e);
    }
    if (is("{") && is_at(1, "{")) {
      i_ += 2;
      std::vector<TypeField> entries = type_fields(decl, "=");
      expect("}");
      expect("}");
      return TypeP(Type{ty::TypeRecord{std::move(entries)}});
    }
    if (accept("{")) {
      auto fs = type_fields(decl, ":");
      expect("}");
      return t_record(std::move(fs));
    }
    if (accept("<")) {
      auto y = type(decl);
      expect(">");
      bool present = false;
      auto eff = raises(present);
      return t_cmd(y, std::move(eff), !decl && !present);
    }
    if (accept("Widget")) {
      expect("(");
      auto parent = type(decl);
      expect(")");
      bool present = false;
      auto eff = raises(present);
      std::vector<TypeField> fs;
      if (accept("{")) {
        fs = type_fields(decl, ":");
        expect("}");
      }
      return TypeP(Type{ty::Widget{parent, std::move(eff), std::move(fs)}});
    }
    if (accept("rec")) {
      auto v = ident();
      expect(".");
      return TypeP(Type{ty::Rec{v, type(decl)}});
    }
    if (accept("Forall")) {
      bool square = accept("[");
      if (!square) expect("(");
      std::vector<std::string> vs;
      do {
        vs.push_back(ident());
      } while (accept(","));
      expect(square ? "]" : ")");
      return TypeP(Type{ty::Forall{std::move(vs), type(decl)}});
    }
    if (accept("(")) {
      std::vector<TypeP> ps;
      if (!is(")")) {
        do {
          ps.push_back(type(decl));
        } while (accept(","));
      }
      expect(")");
      if (accept("->")) return t_func(std::move(ps), type(decl));
      if (ps.size() != 1) fail({"'->'"});
      return ps.front();
    }
    if (cur().kind == Tok::Ident) {
      auto name = ident();
      if (accept("[")) {
        std::vector<TypeP> args;
        do {
          args.push_back(type(decl));
        } while (accept(","));
        expect("]");
        return t_app(name, std::move(args));
      }
      return t_var(name);
    }
    fail({"type"});
  }

  // ---- expressions ---------------------------------------------------
  ExprP expr() {
    Pos p = cur().pos;
    if (accept("if")) {
      auto c = expr();
      expect("then");
      auto t = expr();
      expect("else");
      auto e = expr();
      return mk(p, ex::If{c, t, e});
    }
    if (accept("let")) {
      auto name = ident();
      expect(":");
      auto t = type(false);
      expect("=");
      auto v = expr();
      expect("in");
      auto body = expr();
      return mk(p, ex::Let{name, t, v, body});
    }
    if (accept("letrec")) {
      std::vector<Binding> bs;
      do {
        Binding b;
        b.pos = cur().pos;
        b.name = ident();
        expect(":");
        b.type = type(false);
        expect("=");
        b.expr = expr();
        b.kind = BindKind::Value;
        bs.push_back(std::move(b));
      } while (accept(";"));
      expect("in");
      auto body = expr();
      return mk(p, ex::Letrec{std::move(bs), body});
    }
    if (is("fun")) return lambda();
    if (accept("Fun")) {
      expect("[");
      std::vector<std::string> vs;
      do {
        vs.push_back(ident());
      } while (accept(","));
      expect("]");
      return mk(p, ex::TypeAbs{std::move(vs), expr()});
    }
    return binary(0);
  }

  ExprP lambda() {
    Pos p = expect("fun");
    expect("(");
    auto ps = params(")");
    expect(")");
    expect(":");
    auto ret = type(false);
    auto body = expr();
    return mk(p, ex::Lambda{std::move(ps), ret, body});
  }

  static int precedence(const std::string& op) {
    if (op == "=" || op == "<>") return 1;
    if (op == "<" || op == "<=" || op == ">" || op == ">=") return 2;
    if (op == "+" || op == "-") return 3;
    if (op == "*") return 4;
    return 0;
  }

  ExprP binary(int min_prec) {
    auto lhs = postfix();
    for (;;) {
      if (cur().kind != Tok::Punct) return lhs;
      int prec = precedence(cur().text);
      if (prec == 0 || prec <= min_prec) return lhs;
      Pos p = cur().pos;
      std::string op = toks_[i_++].text;
      auto rhs = binary(prec);
      lhs = mk(p, ex::BinOp{op, lhs, rhs});
    }
  }

  ExprP postfix() {
    auto e = primary();
    for (;;) {
      Pos p = cur().pos;
      if (accept(".")) {
        e = mk(p, ex::FieldRef{e, label()});
      } else if (accept("(")) {
        auto args = expr_list(")");
        expect(")");
        e = mk(p, ex::Apply{e, std::move(args)});
      } else if (accept("[")) {
        std::vector<TypeP> ts;
        do {
          ts.push_back(type(true));
        } while (accept(","));
        expect("]");
        e = mk(p, ex::TypeApp{e, std::move(ts)});
      } else {
        return e;
      }
    }
  }

  std::vector<ExprP> expr_list(const std::string& close) {
    std::vector<ExprP> out;
    if (is(close)) return out;
    do {
      out.push_back(expr());
    } while (accept(","));
    return out;
  }

  ExprP primary() {
    Pos p = cur().pos;
    const Token& t = cur();
    if (t.kind == Tok::Ident) return mk(p, ex::Var{ident()});
    if (t.kind == Tok::Int) {
      ++i_;
      return mk(p, ex::Int{t.number});
    }
    if (t.kind == Tok::Str) {
      ++i_;
      return mk(p, ex::Str{t.text});
    }
    if (is("-") && peek().kind == Tok::Int) {
      ++i_;
      auto n = cur().number;
      ++i_;
      return mk(p, ex::Int{-n});
    }
    if (accept("true")) return mk(p, ex::Bool{true});
    if (accept("false")) return mk(p, ex::Bool{false});
    if (accept("top")) return mk(p, ex::Top{});
    if (accept("(")) {
      auto e = expr();
      expect(")");
      return e;
    }
    if (accept("[")) {
      if (accept("]")) {
        expect("[");
        auto elem = type(true);
        expect("]");
        return mk(p, ex::EmptyList{elem});
      }
      auto elems = expr_list("]");
      expect("]");
      return mk(p, ex::List{std::move(elems)});
    }
    if (accept("{")) {
      std::vector<ex::FieldInit> fs;
      while (!is("}")) {
        ex::FieldInit f;
        f.name = label();
        expect("=");
        f.value = expr();
        fs.push_back(std::move(f));
        if (!accept(";")) break;
      }
      expect("}");
      return mk(p, ex::Record{std::move(fs)});
    }
    if (accept("fix")) {
      expect("(");
      auto f = expr();
      expect(")");
      return mk(p, ex::Fix{f});
    }
    if (accept("raise")) {
      auto name = ident();
      expect("(");
      auto args = expr_list(")");
      expect(")");
      return mk(p, ex::Raise{name, std::move(args)});
    }
    if (accept("do")) return do_block(p);
    if (accept("widget")) return widget_expr(p);
    if (is("if") || is("let") || is("letrec") || is("fun") || is("Fun")) return expr();
    fail({"expression"});
  }

  ExprP do_block(Pos p) {
    expect("{");
    std::vector<Binding> bs;
    while (!is("return")) {
      if (accept(";")) continue;
      Binding b;
      b.pos = cur().pos;
      b.name = ident();
      expect(":");
      b.type = type(false);
      if (accept("<-")) {
        b.kind = BindKind::Perform;
      } else if (accept("=")) {
        b.kind = BindKind::Value;
      } else {
        fail({"'<-'", "'='"});
      }
      b.expr = expr();
      bs.push_back(std::move(b));
    }
    expect("return");
    auto result = expr();
    accept(";");
    expect("}");
    return mk(p, ex::Do{std::move(bs), result});
  }

  ExprP widget_expr(Pos p) {
    ex::Widget w;
    if (cur().kind == Tok::Ident) {
      w.self_name = ident();
      if (accept(":")) w.self_type = type(false);
    } else {
      w.self_name = "self_" + std::to_string(p.line) + "_" + std::to_string(p.col);
    }
    expect("(");
    w.parent = expr();
    expect(")");
    expect("{");
    while (!is("}")) {
      if (accept(";")) continue;
      Binding b;
      b.pos = cur().pos;
      b.name = ident();
      if (accept("(")) {
        b.kind = BindKind::Handler;
        b.params = params(")");
        expect(")");
        expect(":");
        b.type = type(false);
        expect("=");
      } else {
        expect(":");
        b.type = type(false);
        if (accept("<-")) {
          b.kind = BindKind::Perform;
        } else if (accept("=")) {
          b.kind = BindKind::Value;
        } else {
          fail({"'<-'", "'='"});
        }
      }
      b.expr = expr();
      w.body.push_back(std::move(b));
    }
    expect("}");
    return mk(p, std::move(w));
  }

  std::vector<Token> toks_;
  size_t i_ = 0;
};

}  // namespace

Program parse_program(std::string_view source) { return Parser(source).program(); }

ExprP parse_expr(std::string_view source) { return Parser(source).whole_expr(); }

TypeP parse_type(std::string_view source, bool declaration) {
  return Parser(source).whole_type(declaration);
}

}  // namespace widget

#include "generator.hpp"

#include <algorithm>

namespace wtest {

namespace {

constexpr int kCustomEvents = 3;

int event_index(const std::string& event) {
  if (event.size() > 1 && event[0] == 'z') return std::stoi(event.substr(1));
  return 0;
}

std::string params_of(const std::string& event) {
  if (event == "push") return "(i:int)";
  if (event == "move") return "(x:int,y:int)";
  return "()";
}

std::string event_name(const std::string& signature) { return signature.substr(0, signature.find('(')); }

std::string join_events(const Events& es) {
  std::string out;
  for (auto& e : es) out += (out.empty() ? "" : ", ") + e;
  return out;
}

void add_all(Events& into, const Events& more) { into.insert(more.begin(), more.end()); }

std::string handler_source(const GenHandler& h, const std::string& self) {
  auto head = h.event + params_of(h.event);
  switch (h.result) {
    case GenHandler::Result::Self:
      return head + ":<Top> = do { return " + self + " }";
    case GenHandler::Result::Raise:
      return head + ":<*> = raise " + h.raises[0] + "()";
    case GenHandler::Result::Branch: {
      std::string cond = h.event == "move" ? "x = 3" : "true";
      return head + ":<*> = if " + cond + " then raise " + h.raises[0] + "() else raise " + h.raises[1] + "()";
    }
    case GenHandler::Result::Replace:
      return head + ":<" + type_of(*h.replacement) + "> = " + source_of(*h.replacement);
  }
  return head;
}

}  // namespace

std::string signature_of(const std::string& event) {
  if (event == "push") return "push(int)";
  if (event == "move") return "move(int,int)";
  return event + "()";
}

std::string source_of(const GenWidget& w) {
  using K = GenWidget::Kind;
  switch (w.kind) {
    case K::Button:
      return "button('" + w.text + "')";
    case K::Label:
      return "label('" + w.text + "')";
    case K::Screen:
      return "screen(1,2,30,40," + source_of(*w.child) + ")";
    case K::Window:
      return "window('" + w.text + "'," + source_of(*w.child) + ")";
    case K::Ref:
      return w.name;
    case K::User: {
      std::string body;
      auto add = [&](const std::string& def) { body += (body.empty() ? " " : "; ") + def; };
      for (auto& c : w.components) add(c.name + ":" + type_of(*c.widget) + " <- " + source_of(*c.widget));
      for (auto& h : w.handlers) add(handler_source(h, w.name));
      return "widget " + w.name + " (" + source_of(*w.child) + ") {" + body + " }";
    }
  }
  return "";
}

std::string type_of(const GenWidget& w) {
  using K = GenWidget::Kind;
  switch (w.kind) {
    case K::Button:
      return "Button";
    case K::Label:
      return "Label";
    case K::Screen:
      return "Screen[" + type_of(*w.child) + "]";
    case K::Window:
      return "Window[" + type_of(*w.child) + "]";
    case K::Ref:
      return type_of(*w.child);
    case K::User: {
      auto raised = raises_of(w);
      auto clause = raised.empty() ? std::string() : " raises " + join_events(raised);
      return "Widget(" + type_of(*w.child) + ")" + clause + " {}";
    }
  }
  return "";
}

Events handler_effects(const GenHandler& h) {
  if (h.result != GenHandler::Result::Raise && h.result != GenHandler::Result::Branch) return {};
  Events out;
  for (auto& z : h.raises) out.insert(signature_of(z));
  return out;
}

Events raises_of(const GenWidget& w) {
  using K = GenWidget::Kind;
  switch (w.kind) {
    case K::Button:
      return {"push(int)"};
    case K::Label:
      return {};
    case K::Screen:
    case K::Window: {
      Events out{"move(int,int)"};
      add_all(out, raises_of(*w.child));
      return out;
    }
    case K::Ref:
      return raises_of(*w.child);
    case K::User: {
      Events raised = raises_of(*w.child);
      for (auto& c : w.components) add_all(raised, raises_of(*c.widget));
      for (auto& h : w.handlers) add_all(raised, handler_effects(h));
      for (auto& h : w.handlers) raised.erase(signature_of(h.event));
      for (auto& h : w.handlers)
        if (h.result == GenHandler::Result::Replace) add_all(raised, raises_of(*h.replacement));
      return raised;
    }
  }
  return {};
}

std::string Generator::fresh(const std::string& prefix) { return prefix + std::to_string(counter_++); }

bool Generator::chance(double p) { return std::bernoulli_distribution(p)(rng_); }

int Generator::pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

GenWidgetP Generator::leaf() {
  auto w = std::make_shared<GenWidget>();
  w->kind = chance(0.6) ? GenWidget::Kind::Button : GenWidget::Kind::Label;
  w->text = fresh("t");
  return w;
}

GenWidgetP Generator::widget(int depth) {
  if (depth <= 0) return leaf();
  int r = pick(20);
  if (r < 5) return leaf();
  if (r < 12) {
    auto w = std::make_shared<GenWidget>();
    w->kind = r < 9 ? GenWidget::Kind::Screen : GenWidget::Kind::Window;
    w->text = fresh("w");
    w->child = widget(depth - 1);
    return w;
  }
  std::vector<GenComponent> comps;
  for (int n = pick(3); n > 0; --n) comps.push_back({fresh("c"), widget(depth - 1)});
  GenWidgetP parent;
  if (!comps.empty() && chance(0.4)) {
    auto ref = std::make_shared<GenWidget>();
    auto& target = comps[pick(static_cast<int>(comps.size()))];
    ref->kind = GenWidget::Kind::Ref;
    ref->name = target.name;
    ref->child = target.widget;
    auto holder = std::make_shared<GenWidget>();
    holder->kind = chance(0.5) ? GenWidget::Kind::Screen : GenWidget::Kind::Window;
    holder->text = fresh("w");
    holder->child = ref;
    parent = holder;
  } else {
    parent = widget(depth - 1);
  }
  return user(parent, std::move(comps), depth);
}

GenWidgetP Generator::user(GenWidgetP parent, std::vector<GenComponent> components, int depth) {
  Events candidates = raises_of(*parent);
  for (auto& c : components) add_all(candidates, raises_of(*c.widget));
  if (chance(0.3)) candidates.insert(signature_of("z" + std::to_string(1 + pick(kCustomEvents))));
  auto w = std::make_shared<GenWidget>();
  w->kind = GenWidget::Kind::User;
  w->name = fresh("s");
  w->child = std::move(parent);
  w->components = std::move(components);
  w->handlers = handlers(candidates, depth - 1);
  return w;
}

std::vector<GenHandler> Generator::handlers(const Events& candidates, int depth) {
  std::vector<GenHandler> out;
  for (auto& sig : candidates) {
    if (!chance(0.6)) continue;
    GenHandler h;
    h.event = event_name(sig);
    // Custom events only raise higher-numbered ones, so raising terminates.
    int lowest = event_index(h.event) + 1;
    int available = kCustomEvents - lowest + 1;
    auto some_z = [&] { return "z" + std::to_string(lowest + pick(available)); };
    int r = pick(20);
    if (r < 7 || (r < 15 && available <= 0) || (r >= 15 && depth < 0)) {
      h.result = GenHandler::Result::Self;
    } else if (r < 12) {
      h.result = GenHandler::Result::Raise;
      h.raises = {some_z()};
    } else if (r < 15) {
      h.result = GenHandler::Result::Branch;
      h.raises = {some_z(), some_z()};
    } else {
      h.result = GenHandler::Result::Replace;
      h.replacement = widget(depth);
    }
    out.push_back(std::move(h));
  }
  return out;
}

GenWidgetP Generator::close(const GenWidgetP& w, double coverage) {
  auto root = std::make_shared<GenWidget>();
  root->kind = GenWidget::Kind::User;
  root->name = fresh("s");
  root->child = w;
  for (auto& sig : raises_of(*w)) {
    if (coverage < 1.0 && !chance(coverage)) continue;
    GenHandler h;
    h.event = event_name(sig);
    root->handlers.push_back(h);
  }
  return root;
}

std::pair<GenWidgetP, GenWidgetP> Generator::body_split(int depth) {
  GenComponent x{fresh("c"), widget(depth - 1)};
  GenWidgetP e;
  if (chance(0.5)) {
    auto ref = std::make_shared<GenWidget>();
    ref->kind = GenWidget::Kind::Ref;
    ref->name = x.name;
    ref->child = x.widget;
    auto holder = std::make_shared<GenWidget>();
    holder->kind = chance(0.5) ? GenWidget::Kind::Screen : GenWidget::Kind::Window;
    holder->text = fresh("w");
    holder->child = ref;
    e = holder;
  } else {
    e = widget(depth - 1);
  }
  Events candidates = raises_of(*e);
  add_all(candidates, raises_of(*x.widget));
  if (chance(0.3)) candidates.insert(signature_of("z" + std::to_string(1 + pick(kCustomEvents))));
  auto name = fresh("s");
  auto d = handlers(candidates, depth - 1);

  auto lhs = std::make_shared<GenWidget>();
  lhs->kind = GenWidget::Kind::User;
  lhs->name = name;
  lhs->child = e;
  lhs->components = {x};
  lhs->handlers = d;

  auto inner = std::make_shared<GenWidget>();
  inner->kind = GenWidget::Kind::User;
  inner->name = fresh("s");
  inner->child = e;
  inner->components = {x};
  auto rhs = std::make_shared<GenWidget>();
  rhs->kind = GenWidget::Kind::User;
  rhs->name = name;
  rhs->child = inner;
  rhs->handlers = d;
  return {lhs, rhs};
}

std::string program_of(const GenWidget& w) { return "val main = " + source_of(w) + "\n"; }

}  // namespace wtest

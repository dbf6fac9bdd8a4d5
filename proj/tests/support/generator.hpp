#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace wtest {

using Rng = std::mt19937_64;

/// Event signatures in printed form: `push(int)`, `move(int,int)`, `z2()`.
using Events = std::set<std::string>;

struct GenWidget;
using GenWidgetP = std::shared_ptr<const GenWidget>;

struct GenHandler {
  enum class Result { Self, Raise, Branch, Replace };
  /// `push`, `move` or `z1`..`z3`.
  std::string event;
  Result result = Result::Self;
  /// One event for Raise, two for Branch.
  std::vector<std::string> raises;
  GenWidgetP replacement;
};

struct GenComponent {
  std::string name;
  GenWidgetP widget;
};

/// A generated widget command, kept structured so that its source text,
/// its type and the events it raises can all be derived from it.
struct GenWidget {
  enum class Kind { Button, Label, Screen, Window, User, Ref };
  Kind kind = Kind::Button;
  std::string text;
  /// Screen/Window child, User parent, or the component a Ref names.
  GenWidgetP child;
  /// Self name of a user widget, or the component name of a Ref.
  std::string name;
  std::vector<GenComponent> components;
  std::vector<GenHandler> handlers;
};

std::string signature_of(const std::string& event);
std::string source_of(const GenWidget& w);
/// A type the widget command yields a value of, with the raised events
/// spelled out and no fields.
std::string type_of(const GenWidget& w);
/// The event-erasure oracle: what the widget raises once built.
Events raises_of(const GenWidget& w);
/// Events a handler's body may raise while it runs.
Events handler_effects(const GenHandler& h);

/// Random widget programs over buttons, labels, screens, windows and user
/// widgets with handlers that keep themselves, raise events, branch or
/// replace themselves.
class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  GenWidgetP widget(int depth);
  /// A user widget around `parent` with random handlers for some of the
  /// events it would otherwise raise.
  GenWidgetP user(GenWidgetP parent, std::vector<GenComponent> components, int depth);
  std::vector<GenHandler> handlers(const Events& candidates, int depth);
  /// Wraps `w` in a user widget handling each raised event with
  /// probability `coverage` (1 gives a runnable program).
  GenWidgetP close(const GenWidgetP& w, double coverage = 1.0);

  /// Both sides of `widget(e){x<-e';d}` = `widget(widget(e){x<-e'}){d}`.
  std::pair<GenWidgetP, GenWidgetP> body_split(int depth);

  std::string fresh(const std::string& prefix);
  bool chance(double p);
  int pick(int n);
  Rng& rng() { return rng_; }

 private:
  GenWidgetP leaf();
  Rng rng_;
  int counter_ = 0;
};

/// A program whose entry `main` is the given widget command.
std::string program_of(const GenWidget& w);

}  // namespace wtest

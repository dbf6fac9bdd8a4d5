#include "random_backend.hpp"

#include <vector>

namespace wtest {

namespace {

void collect(const widget::DisplayNode& n, std::vector<const widget::DisplayNode*>& out) {
  if (n.kind == "button" || n.kind == "screen" || n.kind == "window" || n.kind == "phone")
    out.push_back(&n);
  for (auto& c : n.children) collect(c, out);
}

}  // namespace

void RandomBackend::show(const std::optional<widget::DisplayNode>& display) { trace_.push_back(display); }

std::optional<widget::Event> RandomBackend::next_event(widget::Runtime&, const widget::ValueP&) {
  if (sent_ >= budget_ || trace_.empty() || !trace_.back()) return std::nullopt;
  std::vector<const widget::DisplayNode*> targets;
  collect(*trace_.back(), targets);
  if (targets.empty()) return std::nullopt;
  auto* n = targets[std::uniform_int_distribution<size_t>(0, targets.size() - 1)(rng_)];
  ++sent_;
  if (n->kind == "button") return widget::Event{n->id, "push", {widget::v_int(n->id)}};
  std::uniform_int_distribution<int> coord(0, 5);
  return widget::Event{n->id, "move", {widget::v_int(coord(rng_)), widget::v_int(coord(rng_))}};
}

RandomRun run_random(const widget::Program& program, std::uint64_t seed, int events,
                     const std::filesystem::path& data_dir) {
  RandomRun out;
  RandomBackend backend(seed, events);
  widget::Evaluator ev(program);
  widget::RuntimeState st;
  st.data_dir = data_dir;
  widget::Runtime rt(ev, st);
  try {
    widget::run_loop(rt, backend);
  } catch (const widget::NoHandler& e) {
    out.fault = e.what();
    out.no_handler = true;
  } catch (const widget::Error& e) {
    out.fault = e.what();
  }
  out.trace = backend.trace();
  out.events = backend.sent();
  return out;
}

}  // namespace wtest

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "widget/harness.hpp"

namespace wtest {

/// Sends `budget` random events picked from the current display: a push to
/// a button or a move to a screen, window or phone. Choices depend only on
/// the shape of the display (preorder position), never on ids, so two runs
/// whose displays agree up to ids see the same events.
class RandomBackend : public widget::Backend {
 public:
  RandomBackend(std::uint64_t seed, int budget) : rng_(seed), budget_(budget) {}

  void show(const std::optional<widget::DisplayNode>& display) override;
  std::optional<widget::Event> next_event(widget::Runtime& rt, const widget::ValueP& root) override;

  const widget::DisplayTrace& trace() const { return trace_; }
  int sent() const { return sent_; }

 private:
  std::mt19937_64 rng_;
  int budget_;
  int sent_ = 0;
  widget::DisplayTrace trace_;
};

struct RandomRun {
  widget::DisplayTrace trace;
  /// What stopped the run early, empty when every event was handled.
  std::string fault;
  bool no_handler = false;
  int events = 0;
};

RandomRun run_random(const widget::Program& program, std::uint64_t seed, int events,
                     const std::filesystem::path& data_dir);

}  // namespace wtest

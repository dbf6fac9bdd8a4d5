#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "widget/value.hpp"

namespace widget {

struct RuntimeState;

/// Contents of a `db[K,V]` widget, mirrored to a file of `key<TAB>value`
/// lines.
struct DbState {
  std::filesystem::path file;
  TypeP key_type;
  TypeP val_type;
  std::vector<std::pair<ValueP, ValueP>> records;

  void load();
  void save() const;
  /// Inserts or overwrites the record for `key`.
  void update(const ValueP& key, const ValueP& value);
  bool remove(const ValueP& key);
  /// Records as Widget values `[{key=..;val=..}]`.
  ValueP records_value() const;
};

/// Serializes one scalar for the db file, escaping tab, newline and
/// backslash.
std::string encode_field(const ValueP& v);
/// Inverse of encode_field for a value of the given type.
ValueP decode_field(const std::string& text, const TypeP& type);

struct NotifierState {
  bool connected = false;
  bool registered = false;
};

/// Text entered into an addscreen (from `set-field` or a renderer).
struct AddScreenState {
  std::string name;
  std::string address;
};

using ExternalState = std::variant<std::monostate, DbState, NotifierState, AddScreenState>;

/// An event addressed to the root widget by the platform.
struct ContextEvent {
  std::string name;
  std::vector<ValueP> args;
};

/// Simulated service provider: tracks peer phones and reports those that
/// come within `range` of this phone.
struct ProviderSim {
  double range = 10;
  std::string self_address;
  bool self_registered = false;
  std::pair<std::int64_t, std::int64_t> self_pos{0, 0};
  std::map<std::string, std::optional<std::pair<std::int64_t, std::int64_t>>> peers;
  std::set<std::string> registered;

  bool in_range(const std::optional<std::pair<std::int64_t, std::int64_t>>& peer,
                std::pair<std::int64_t, std::int64_t> self) const;
};

/// Scripted action of a simulated peer phone.
struct ProviderDirective {
  enum class Kind { PeerRegister, PeerMove } kind = Kind::PeerRegister;
  std::string address;
  std::int64_t x = 0;
  std::int64_t y = 0;
};

/// Applies a peer directive; returns the notify events it triggers. A
/// notify fires only when a registered peer crosses from outside the range
/// to inside it while this phone is registered.
std::vector<ContextEvent> provider_step(ProviderSim& sim, const ProviderDirective& d);

/// Moves this phone; returns the notify events triggered.
std::vector<ContextEvent> provider_self_move(ProviderSim& sim, std::int64_t x, std::int64_t y);

/// Builds an external widget. Child widget arguments must already be
/// instantiated (widget references or lists of them).
InstanceP construct_external(RuntimeState& state, const std::string& name,
                             const std::vector<TypeP>& type_args, const std::vector<ValueP>& args);

/// Runs a command exported by an external widget.
ValueP external_command(RuntimeState& state, const InstanceP& inst, const std::string& name,
                        const std::vector<ValueP>& args);

/// External kinds with no visual representation.
bool is_invisible_external(const std::string& kind);

}  // namespace widget

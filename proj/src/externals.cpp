// External widgets: constructors, private state and exported commands.

#include "widget/externals.hpp"

#include <cmath>
#include <fstream>

#include "widget/error.hpp"
#include "widget/runtime.hpp"

namespace widget {

namespace {

[[noreturn]] void fault(const std::string& msg) { throw RuntimeFault(Pos{}, msg); }

const std::vector<std::string>& prop_names(const std::string& kind) {
  static const std::map<std::string, std::vector<std::string>> names = {
      {"button", {"label"}},
      {"label", {"text"}},
      {"clock", {"x", "y"}},
      {"screen", {"x", "y", "w", "h", "child"}},
      {"window", {"title", "child"}},
      {"phone", {"title", "display", "buttons"}},
      {"db", {"file"}},
      {"notifier", {"port"}},
      {"addscreen", {"records"}},
  };
  auto it = names.find(kind);
  if (it == names.end()) fault("unknown external widget " + kind);
  return it->second;
}

PrimKind prim_of(const TypeP& t) {
  if (t)
    if (auto p = t->as<ty::Prim>()) return p->kind;
  return PrimKind::Str;
}

template <class S>
S& state_of(RuntimeState& st, const InstanceP& inst) {
  auto it = st.external_states.find(inst->id);
  if (it == st.external_states.end() || !std::holds_alternative<S>(it->second))
    fault("external widget " + inst->ext + " has no state");
  return std::get<S>(it->second);
}

double distance(std::pair<std::int64_t, std::int64_t> a, std::pair<std::int64_t, std::int64_t> b) {
  return std::hypot(double(a.first - b.first), double(a.second - b.second));
}

}  // namespace

bool is_invisible_external(const std::string& kind) { return kind == "db" || kind == "notifier"; }

std::string encode_field(const ValueP& v) {
  std::string raw;
  if (auto s = v->as<val::Str>())
    raw = s->value;
  else if (auto i = v->as<val::Int>())
    raw = std::to_string(i->value);
  else if (auto b = v->as<val::Bool>())
    raw = b->value ? "true" : "false";
  else
    fault("db stores only str, int and bool values");
  std::string out;
  for (char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

ValueP decode_field(const std::string& text, const TypeP& type) {
  std::string raw;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\' || i + 1 == text.size()) {
      raw += text[i];
      continue;
    }
    char c = text[++i];
    raw += c == 't' ? '\t' : c == 'n' ? '\n' : c == 'r' ? '\r' : c;
  }
  switch (prim_of(type)) {
    case PrimKind::Int:
      try {
        return v_int(std::stoll(raw));
      } catch (const std::exception&) {
        fault("db field '" + raw + "' is not an int");
      }
    case PrimKind::Bool: return v_bool(raw == "true");
    default: return v_str(raw);
  }
}

void DbState::load() {
  records.clear();
  std::ifstream in(file);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) fault("malformed db line in " + file.string());
    update(decode_field(line.substr(0, tab), key_type),
           decode_field(line.substr(tab + 1), val_type));
  }
}

void DbState::save() const {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::trunc);
  if (!out) fault("cannot write " + file.string());
  for (auto& [k, v] : records) out << encode_field(k) << '\t' << encode_field(v) << '\n';
}

void DbState::update(const ValueP& key, const ValueP& value) {
  for (auto& r : records)
    if (values_equal(r.first, key)) {
      r.second = value;
      return;
    }
  records.emplace_back(key, value);
}

bool DbState::remove(const ValueP& key) {
  for (auto it = records.begin(); it != records.end(); ++it)
    if (values_equal(it->first, key)) {
      records.erase(it);
      return true;
    }
  return false;
}

ValueP DbState::records_value() const {
  val::List l;
  for (auto& [k, v] : records) l.elems.push_back(make_value(val::Record{{{"key", k}, {"val", v}}}));
  return make_value(std::move(l));
}

bool ProviderSim::in_range(const std::optional<std::pair<std::int64_t, std::int64_t>>& peer,
                           std::pair<std::int64_t, std::int64_t> self) const {
  return peer && distance(*peer, self) <= range;
}

std::vector<ContextEvent> provider_step(ProviderSim& sim, const ProviderDirective& d) {
  auto& pos = sim.peers[d.address];
  if (d.kind == ProviderDirective::Kind::PeerRegister) {
    sim.registered.insert(d.address);
    return {};
  }
  bool before = sim.in_range(pos, sim.self_pos);
  pos = std::make_pair(d.x, d.y);
  bool after = sim.in_range(pos, sim.self_pos);
  if (!before && after && sim.registered.count(d.address) && sim.self_registered)
    return {ContextEvent{"notify", {v_str(d.address)}}};
  return {};
}

std::vector<ContextEvent> provider_self_move(ProviderSim& sim, std::int64_t x, std::int64_t y) {
  auto old = sim.self_pos;
  sim.self_pos = {x, y};
  std::vector<ContextEvent> out;
  if (!sim.self_registered) return out;
  for (auto& [addr, pos] : sim.peers) {
    if (!sim.registered.count(addr)) continue;
    if (!sim.in_range(pos, old) && sim.in_range(pos, sim.self_pos))
      out.push_back({"notify", {v_str(addr)}});
  }
  return out;
}

InstanceP construct_external(RuntimeState& state, const std::string& name,
                             const std::vector<TypeP>& type_args, const std::vector<ValueP>& args) {
  auto& names = prop_names(name);
  if (names.size() != args.size())
    fault(name + " expects " + std::to_string(names.size()) + " arguments");
  auto inst = std::make_shared<Instance>();
  inst->kind = InstanceKind::External;
  inst->ext = name;
  inst->type_args = type_args;
  for (size_t i = 0; i < args.size(); ++i) inst->props.push_back({names[i], args[i]});
  inst->id = state.next_widget_id++;

  if (name == "db") {
    auto f = args[0]->as<val::Str>();
    if (!f) fault("db expects a file name");
    DbState db;
    db.file = state.data_dir / f->value;
    db.key_type = type_args.size() > 0 ? type_args[0] : t_str();
    db.val_type = type_args.size() > 1 ? type_args[1] : t_str();
    db.load();
    state.external_states[inst->id] = std::move(db);
  } else if (name == "notifier") {
    state.external_states[inst->id] = NotifierState{};
  } else if (name == "addscreen") {
    state.external_states[inst->id] = AddScreenState{};
  }
  return inst;
}

ValueP external_command(RuntimeState& state, const InstanceP& inst, const std::string& name,
                        const std::vector<ValueP>& args) {
  const auto& k = inst->ext;
  if (k == "db") {
    auto& db = state_of<DbState>(state, inst);
    if (name == "records") return db.records_value();
    if (name == "update") {
      db.update(args.at(0), args.at(1));
      db.save();
      return args.at(1);
    }
    if (name == "remove") {
      bool removed = db.remove(args.at(0));
      db.save();
      return v_bool(removed);
    }
  } else if (k == "notifier") {
    auto& n = state_of<NotifierState>(state, inst);
    if (name == "connect") {
      n.connected = true;
      return v_bool(true);
    }
    if (name == "register") {
      // Registering needs a connection; misuse yields false.
      if (!n.connected) return v_bool(false);
      n.registered = true;
      state.provider.self_address = args.at(0)->as<val::Str>()->value;
      state.provider.self_registered = true;
      return v_bool(true);
    }
    if (name == "move") {
      auto x = args.at(0)->as<val::Int>()->value;
      auto y = args.at(1)->as<val::Int>()->value;
      for (auto& e : provider_self_move(state.provider, x, y)) state.pending.push_back(e);
      return v_bool(true);
    }
  } else if (k == "addscreen") {
    auto& s = state_of<AddScreenState>(state, inst);
    if (name == "name") return v_str(s.name);
    if (name == "address") return v_str(s.address);
  }
  fault("external widget " + k + " has no command " + name);
}

}  // namespace widget

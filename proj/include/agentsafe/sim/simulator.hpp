#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "agentsafe/core/digest.hpp"
#include "agentsafe/core/rng.hpp"
#include "agentsafe/metrics/metrics.hpp"
#include "agentsafe/sim/config.hpp"

namespace agentsafe {

inline constexpr const char* kCheckpointFormat = "agentsafe.checkpoint/1";

/// Everything the engine tracks for one agent.
struct SimAgent {
  AgentState state;
  AgentPlan plan;
  ScenarioRecord scenario;
  Rng rng;

  const std::string& id() const { return state.id(); }
};

namespace detail {

inline json scratch_json(const ScratchState& s) {
  return json{{"goal", s.current_goal},
              {"activity", s.current_activity},
              {"energy", s.social_energy},
              {"partner", s.conversation_partner ? json(*s.conversation_partner) : json(nullptr)},
              {"slot", s.pending_slot ? json(s.pending_slot->str()) : json(nullptr)},
              {"retrieved", s.retrieved}};
}

inline ScratchState scratch_from_json(const json& j) {
  ScratchState s;
  s.current_goal = j.at("goal");
  s.current_activity = j.at("activity");
  s.social_energy = j.at("energy");
  if (!j.at("partner").is_null()) s.conversation_partner = j.at("partner").get<std::string>();
  if (!j.at("slot").is_null()) s.pending_slot = ClockTime::parse(j.at("slot").get<std::string>());
  s.retrieved = j.at("retrieved").get<std::vector<std::int64_t>>();
  return s;
}

inline json traits_json(const TraitLayers& t) {
  json l2 = json::array();
  for (const auto& v : t.volatile_traits) l2.push_back(json{{"text", v.text}, {"expires_step", v.expiry_step}});
  return json{{"L0", t.permanent}, {"L1", t.learned}, {"L2", l2}};
}

inline TraitLayers traits_from_json(const json& j) {
  TraitLayers t;
  t.permanent = j.at("L0").get<std::vector<std::string>>();
  t.learned = j.at("L1").get<std::vector<std::string>>();
  for (const auto& v : j.at("L2")) t.volatile_traits.push_back({v.at("text"), v.at("expires_step")});
  return t;
}

inline PerceptionReport perception_from_json(const json& j, int step) {
  return PerceptionReport{j.at("agent"), step, j.at("zone"), j.at("objects").get<std::vector<std::string>>(),
                          j.at("agents").get<std::vector<std::string>>()};
}

inline json plan_json(const AgentPlan& p) {
  json slots = json::array();
  for (const auto& s : p.plan.slots) slots.push_back(json(slot_to_json(s)));
  json revisions = json::array();
  for (const auto& r : p.revisions) revisions.push_back(json{{"record", r.to_json()}, {"step", r.step}});
  json initial = json::array();
  for (const auto& [hour, st] : p.initial_states) initial.push_back(json{hour, to_string(st)});
  json warnings = json::array();
  for (const auto& [hour, n] : p.judge.warnings) warnings.push_back(json{hour, n});
  return json{{"slots", slots}, {"revisions", revisions}, {"initial", initial}, {"warnings", warnings}};
}

inline void plan_from_json(AgentPlan& p, const json& j) {
  p.plan.slots.clear();
  for (const auto& s : j.at("slots")) p.plan.slots.push_back(slot_from_json(s));
  p.revisions.clear();
  for (const auto& r : j.at("revisions")) p.revisions.push_back(RevisionRecord::from_json(r.at("record"), r.at("step")));
  p.initial_states.clear();
  for (const auto& e : j.at("initial")) p.initial_states[e[0].get<int>()] = parse_safety_state(e[1].get<std::string>());
  p.judge.warnings.clear();
  for (const auto& e : j.at("warnings")) p.judge.warnings[e[0].get<int>()] = e[1].get<int>();
}

inline std::pair<std::string, std::string> unordered_pair(const std::string& a, const std::string& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace detail

/// Discrete-step engine. Phases per step: perceive, retrieve, plan/act,
/// converse, revise (on cadence), snapshot (on cadence). Cross-agent effects
/// are applied in agent-ID order.
class Simulator {
 public:
  explicit Simulator(SimConfig config) : Simulator(config, std::make_unique<Gateway>(make_gateway(config.backend))) {}

  Simulator(SimConfig config, std::unique_ptr<Gateway> gateway)
      : config_(std::move(config)), clock_{config_.window, config_.step_seconds}, gateway_(std::move(gateway)) {
    config_.validate();
    embedder_ = std::make_unique<Embedder>(*gateway_);
    load_inputs();
    log_.set_listener([this](const SimEvent& e) { metrics_.record(e); });
    if (config_.log_file) log_.open_file(*config_.log_file);
  }

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Step 0: initial classification first, then agent construction.
  void initialize() {
    if (initialized_) return;
    std::vector<std::string> ids;
    json scenarios = json::object();
    for (const auto& a : agents_) {
      ids.push_back(a.id());
      scenarios[a.id()] = a.scenario.scenario_id;
    }
    log_.emit(0, "run_start",
              json{{"schema", kRunLogSchema}, {"config", config_.to_json()}, {"agents", ids}, {"scenarios", scenarios}});
    for (auto& a : agents_) classify_initial(a.plan, *gateway_, &log_);

    ModelContext models = context();
    for (auto& a : agents_) {
      const Persona persona = a.state.persona;
      a.state = init_agent(persona, world_, config_.window, models, &log_);
      locations_.place(a.id(), persona.starting_zone, 0);
      log_.emit(0, "agent_init",
                json{{"agent", a.id()}, {"zone", persona.starting_zone}, {"memories", a.state.memory.size()},
                     {"energy", a.state.scratch.social_energy}});
    }
    initialized_ = true;
  }

  void step_once() {
    if (!initialized_) initialize();
    if (finished_) throw Error(ErrorCode::InvalidRequest, "run already finished");
    const int s = ++step_;
    for (auto& a : agents_) a.state.traits.expire(s);
    phase_perceive(s);
    phase_retrieve(s);
    phase_act(s);
    phase_converse(s);
    if (s % config_.revision_cadence == 0) phase_revise(s);
    if (s % config_.snapshot_cadence == 0) log_.emit(s, "snapshot", metrics_.snapshot(s).to_json());
    if (s == config_.total_steps) finish();
  }

  /// Runs to `step` (or the end); checkpoint_every > 0 writes a checkpoint into
  /// `checkpoint_dir` after every multiple of it.
  void run_until(int step, int checkpoint_every = 0, const std::filesystem::path& checkpoint_dir = {}) {
    if (!initialized_) initialize();
    const int last = std::min(step, config_.total_steps);
    while (step_ < last) {
      step_once();
      if (checkpoint_every > 0 && step_ % checkpoint_every == 0) checkpoint(checkpoint_path(checkpoint_dir, step_));
    }
  }

  void run(int checkpoint_every = 0, const std::filesystem::path& checkpoint_dir = {}) {
    run_until(config_.total_steps, checkpoint_every, checkpoint_dir);
  }

  static std::filesystem::path checkpoint_path(const std::filesystem::path& dir, int step) {
    char name[32];
    std::snprintf(name, sizeof name, "step-%06d.json", step);
    return dir / name;
  }

  int step() const { return step_; }
  bool initialized() const { return initialized_; }
  bool finished() const { return finished_; }
  int sessions_run() const { return sessions_; }
  std::int64_t conversations_started() const { return next_conversation_; }
  const SimConfig& config() const { return config_; }
  const SimClock& clock() const { return clock_; }
  const WorldGraph& world() const { return world_; }
  const LocationTable& locations() const { return locations_; }
  const RunLog& log() const { return log_; }
  const MetricsAggregator& metrics() const { return metrics_; }
  Gateway& gateway() { return *gateway_; }
  const std::vector<SimAgent>& agents() const { return agents_; }
  const std::vector<Conversation>& open_conversations() const { return conversations_; }

  const SimAgent& agent(const std::string& id) const {
    for (const auto& a : agents_)
      if (a.id() == id) return a;
    throw Error(ErrorCode::UnknownAgent, id);
  }

  json memory_dump() const {
    json out = json::object();
    for (const auto& a : agents_) {
      json entries = json::array();
      for (const auto& e : a.state.memory.entries()) entries.push_back(MemoryStream::entry_json(e));
      out[a.id()] = entries;
    }
    return out;
  }

  /// Dynamic state plus the log so far; the static inputs are reloaded from the config.
  json state_json() const {
    json agents = json::array();
    for (const auto& a : agents_) {
      const AgentState& st = a.state;
      agents.push_back(json{{"id", a.id()},
                            {"traits", detail::traits_json(st.traits)},
                            {"memory", st.memory.to_json()},
                            {"scratch", detail::scratch_json(st.scratch)},
                            {"map", json{{"zones", st.map.zones}, {"objects", st.map.objects}}},
                            {"schedule_index", st.schedule_index},
                            {"zone_entered_step", st.zone_entered_step},
                            {"perception", st.last_perception ? json{{"step", st.last_perception->step},
                                                                     {"report", st.last_perception->to_json()}}
                                                              : json(nullptr)},
                            {"rng", a.rng.state()},
                            {"plan", detail::plan_json(a.plan)}});
    }
    json locations = json::object();
    for (const auto& [id, loc] : locations_.all()) locations[id] = json{{"zone", loc.zone_id}, {"entered", loc.entered_at_step}};
    json conversations = json::array();
    for (const auto& c : conversations_) conversations.push_back(c.to_json());
    json history = json::array();
    for (const auto& [a, b] : history_) history.push_back(json{a, b});
    return json{{"config", config_.to_json()},
                {"step", step_},
                {"initialized", initialized_},
                {"finished", finished_},
                {"sessions", sessions_},
                {"next_conversation", next_conversation_},
                {"conversations", conversations},
                {"history", history},
                {"locations", locations},
                {"agents", agents},
                {"metrics", metrics_.to_json()},
                {"log", log_.lines()}};
  }

  std::string state_digest() const { return sha256_hex(state_json().dump()); }

  void checkpoint(const std::filesystem::path& path) const {
    const json payload = state_json();
    const json doc{{"format", kCheckpointFormat}, {"payload", payload}, {"digest", sha256_hex(payload.dump())}};
    write_file(path, doc.dump() + "\n");
  }

  /// Rebuilds a simulator from a checkpoint. The backend and log file are not
  /// part of the checkpoint and are supplied by the caller.
  static std::unique_ptr<Simulator> resume(const std::filesystem::path& path, const BackendConfig& backend,
                                           std::optional<std::filesystem::path> log_file = std::nullopt) {
    json doc;
    try {
      doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::CorruptCheckpoint, "cannot parse checkpoint " + path.string() + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::CorruptCheckpoint, e.what());
    }
    if (!doc.is_object() || doc.value("format", "") != kCheckpointFormat || !doc.contains("payload") ||
        !doc.contains("digest"))
      throw Error(ErrorCode::CorruptCheckpoint, "not a checkpoint: " + path.string());
    const json& payload = doc.at("payload");
    if (sha256_hex(payload.dump()) != doc.at("digest").get<std::string>())
      throw Error(ErrorCode::CorruptCheckpoint, "digest mismatch in " + path.string());

    try {
      SimConfig config = SimConfig::from_json(payload.at("config"));
      config.backend = backend;
      config.backend.embedding_dim = payload.at("config").at("embedding_dim");
      config.log_file = std::move(log_file);
      auto sim = std::make_unique<Simulator>(std::move(config));
      sim->restore(payload);
      return sim;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::CorruptCheckpoint, std::string("checkpoint payload incomplete: ") + e.what());
    }
  }

 private:
  ModelContext context() { return ModelContext{*gateway_, *embedder_}; }

  void load_inputs() {
    try {
      world_ = WorldGraph::load(config_.world_file);
    } catch (const Error& e) {
      throw Error(ErrorCode::ConfigError, std::string("world: ") + e.what());
    }
    std::vector<Persona> personas;
    for (int i = 0; i < config_.agent_count; ++i) {
      try {
        personas.push_back(Persona::load(config_.persona_files[static_cast<std::size_t>(i)]));
      } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, std::string("persona: ") + e.what());
      }
    }
    std::sort(personas.begin(), personas.end(), [](const Persona& a, const Persona& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < personas.size(); ++i)
      if (personas[i].id == personas[i - 1].id) throw Error(ErrorCode::ConfigError, "duplicate persona id " + personas[i].id);
    for (const auto& [agent, scenario] : config_.scenario_overrides) {
      if (std::none_of(personas.begin(), personas.end(), [&](const Persona& p) { return p.id == agent; }))
        throw Error(ErrorCode::ConfigError, "scenario override for unknown agent " + agent);
    }

    std::map<std::string, ScenarioRecord> cache;
    auto scenario = [&](const std::string& id) -> const ScenarioRecord& {
      auto it = cache.find(id);
      if (it != cache.end()) return it->second;
      ScenarioRecord r = load_scenario(config_.scenario_dir / (id + ".json"));
      try {
        validate_scenario(r);
      } catch (const Error& e) {
        throw Error(ErrorCode::ScenarioLoadError, e.what());
      }
      if (r.scenario_id != id) throw Error(ErrorCode::ScenarioLoadError, "file for " + id + " holds " + r.scenario_id);
      if (!(r.unsafe_plan.window == config_.window))
        throw Error(ErrorCode::ScenarioLoadError, "scenario " + id + " window " + r.unsafe_plan.window.str() +
                                                      " differs from run window " + config_.window.str());
      return cache.emplace(id, std::move(r)).first->second;
    };

    for (const auto& p : personas) {
      const auto ov = config_.scenario_overrides.find(p.id);
      const ScenarioRecord& rec = scenario(ov == config_.scenario_overrides.end() ? config_.scenario_id : ov->second);
      SimAgent a;
      a.state.persona = p;
      a.scenario = rec;
      a.plan = AgentPlan::from_scenario(p.id, rec, config_.planner.override_threshold);
      a.rng = Rng(derive_seed(config_.seed, "agent:" + p.id + ":social"));
      agents_.push_back(std::move(a));
    }
  }

  void restore(const json& p) {
    step_ = p.at("step");
    initialized_ = p.at("initialized");
    finished_ = p.at("finished");
    sessions_ = p.at("sessions");
    next_conversation_ = p.at("next_conversation");
    conversations_.clear();
    for (const auto& c : p.at("conversations")) conversations_.push_back(Conversation::from_json(c));
    history_.clear();
    for (const auto& h : p.at("history")) history_.insert({h[0].get<std::string>(), h[1].get<std::string>()});
    for (const auto& [id, loc] : p.at("locations").items()) locations_.place(id, loc.at("zone"), loc.at("entered"));
    const auto& saved = p.at("agents");
    if (saved.size() != agents_.size()) throw Error(ErrorCode::CorruptCheckpoint, "agent count differs from config");
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      const json& j = saved[i];
      SimAgent& a = agents_[i];
      if (j.at("id") != a.id()) throw Error(ErrorCode::CorruptCheckpoint, "agent order differs from config");
      AgentState& st = a.state;
      st.traits = detail::traits_from_json(j.at("traits"));
      st.memory = MemoryStream::from_json(j.at("memory"));
      st.scratch = detail::scratch_from_json(j.at("scratch"));
      st.map.agent_id = a.id();
      st.map.zones = j.at("map").at("zones").get<std::map<std::string, int>>();
      st.map.objects = j.at("map").at("objects").get<std::map<std::string, int>>();
      st.schedule_index = j.at("schedule_index");
      st.zone_entered_step = j.at("zone_entered_step");
      if (!j.at("perception").is_null())
        st.last_perception = detail::perception_from_json(j.at("perception").at("report"), j.at("perception").at("step"));
      a.rng.set_state(j.at("rng"));
      detail::plan_from_json(a.plan, j.at("plan"));
    }
    metrics_ = MetricsAggregator::from_json(p.at("metrics"));
    std::vector<SimEvent> events;
    for (const auto& line : p.at("log")) events.push_back(SimEvent::from_json(json::parse(line.get<std::string>())));
    log_.preload(std::move(events));
  }

  SimAgent& mutable_agent(const std::string& id) {
    for (auto& a : agents_)
      if (a.id() == id) return a;
    throw Error(ErrorCode::UnknownAgent, id);
  }

  void diagnostic(int step, const std::string& agent, const std::string& what, const std::exception& e) {
    log_.emit(step, "diagnostic", json{{"agent", agent}, {"what", what}, {"detail", e.what()}});
  }

  static std::string describe_scene(const PerceptionReport& r) {
    std::string out = "I am in the " + r.zone_id + ".";
    if (!r.objects.empty()) out += " I see " + text::join(r.objects, ", ") + ".";
    out += r.agents.empty() ? " Nobody else is here." : " Here with me: " + text::join(r.agents, ", ") + ".";
    return out;
  }

  void phase_perceive(int s) {
    ModelContext models = context();
    for (auto& a : agents_) {
      AgentState& st = a.state;
      PerceptionReport report = perceive(a.id(), world_, locations_, &st.map, s, &log_);
      const bool changed = !st.last_perception || !st.last_perception->same_scene(report);
      st.last_perception = report;
      if (!changed) continue;
      try {
        add_memory(st, MemoryKind::observation, describe_scene(report), "self", s, models, &log_);
      } catch (const Error& e) {
        diagnostic(s, a.id(), "observation-memory-failed", e);
      }
    }
  }

  void phase_retrieve(int s) {
    ModelContext models = context();
    for (auto& a : agents_) {
      ScratchState& sc = a.state.scratch;
      const std::string query = !sc.current_activity.empty() ? sc.current_activity
                                : !sc.current_goal.empty()    ? sc.current_goal
                                                              : a.state.persona.name;
      try {
        sc.retrieved = ids_of(retrieve(a.state, query, config_.perceive_memory_k, config_.planner.weights, s, models));
      } catch (const Error& e) {
        diagnostic(s, a.id(), "retrieve-failed", e);
      }
    }
  }

  void phase_act(int s) {
    ModelContext models = context();
    const ClockTime now = clock_.wall_time(s);
    const ClockTime label = clock_.slot_label(s);
    for (auto& a : agents_) {
      AgentState& st = a.state;
      const PlanSlot* slot = a.plan.plan.find(label);
      if (slot) {
        st.scratch.current_activity = slot->activity;
        if (!st.scratch.pending_slot || !(*st.scratch.pending_slot == label)) {
          st.scratch.pending_slot = label;
          log_.emit(s, "plan",
                    json{{"agent", a.id()}, {"hour", label.str()}, {"activity", slot->activity},
                         {"state", to_string(slot->state)}});
          try {
            add_memory(st, MemoryKind::plan, "At " + label.str() + " I plan to: " + slot->activity, "planner", s, models,
                       &log_);
          } catch (const Error& e) {
            diagnostic(s, a.id(), "plan-memory-failed", e);
          }
        }
      }
      st.scratch.current_goal = current_goal(st.persona, config_.window, now);
      if (!st.scratch.conversation_partner) schedule_move(a, s, now);
    }
    for (auto& a : agents_) {
      const bool alone = locations_.agents_in(locations_.at(a.id()).zone_id).size() == 1;
      a.state.scratch.social_energy = update_energy(a.state.scratch.social_energy, a.state.persona.energy_decay_rate,
                                                    alone, config_.social.recovery_per_step);
    }
  }

  /// Agents wait at their starting zone until their arrival time, then cycle
  /// through their zone preferences, staying the given minutes in each.
  void schedule_move(SimAgent& a, int s, ClockTime now) {
    AgentState& st = a.state;
    const auto& prefs = st.persona.zone_preferences;
    if (prefs.empty()) return;
    std::optional<std::string> target;
    if (st.schedule_index < 0) {
      if (config_.window.offset_of(now) < config_.window.offset_of(st.persona.arrival_time)) return;
      st.schedule_index = 0;
      target = prefs[0].zone_id;
    } else {
      const auto& pref = prefs[static_cast<std::size_t>(st.schedule_index)];
      if (static_cast<long long>(s - st.zone_entered_step) * config_.step_seconds < 60LL * pref.minutes) return;
      st.schedule_index = (st.schedule_index + 1) % static_cast<int>(prefs.size());
      target = prefs[static_cast<std::size_t>(st.schedule_index)].zone_id;
    }
    st.zone_entered_step = s;
    if (*target == locations_.at(a.id()).zone_id) return;
    try {
      move(a.id(), *target, world_, locations_, s, &log_);
      st.map.learn_zone(*target, s);
    } catch (const Error& e) {
      diagnostic(s, a.id(), "move-failed", e);
    }
  }

  SuggestionCatalog build_catalog() const {
    SuggestionCatalog catalog;
    for (const auto& a : agents_)
      for (const auto& slot : a.plan.plan.slots) catalog.add(slot.activity, slot.state);
    for (const auto& a : agents_)
      for (const auto& slot : a.scenario.unsafe_plan.slots) {
        const auto it = a.plan.initial_states.find(slot.hour.minutes);
        if (it != a.plan.initial_states.end() && it->second == SafetyState::unsafe)
          catalog.add(slot.activity, SafetyState::unsafe);
      }
    return catalog;
  }

  void advance(Conversation& conv, int s, const SuggestionCatalog& catalog) {
    ModelContext models = context();
    SimAgent& initiator = mutable_agent(conv.initiator);
    SimAgent& target = mutable_agent(conv.target);
    try {
      advance_conversation(conv, initiator.state, target.state, s, config_.social.max_turns, catalog, models,
                           config_.social, &log_);
    } catch (const Error& e) {
      diagnostic(s, conv.initiator, "conversation-failed", e);
      close_conversation(conv, initiator.state, target.state, s, "error", &log_);
    }
  }

  void phase_converse(int s) {
    const SuggestionCatalog catalog = build_catalog();
    for (auto& conv : conversations_) advance(conv, s, catalog);
    std::erase_if(conversations_, [](const Conversation& c) { return !c.open; });

    ModelContext models = context();
    for (auto& a : agents_) {
      if (a.state.scratch.conversation_partner) continue;
      if (a.rng.uniform() >= config_.social.chat_probability) continue;
      std::vector<std::string> others;
      for (const auto& id : locations_.agents_in(locations_.at(a.id()).zone_id))
        if (id != a.id()) others.push_back(id);
      if (others.empty()) continue;
      SimAgent& target = mutable_agent(others[a.rng.below(others.size())]);
      const auto pair = detail::unordered_pair(a.id(), target.id());
      const ChatKind kind = history_.count(pair) ? ChatKind::conversation : ChatKind::greeting;
      ChatAttempt attempt;
      try {
        attempt = attempt_conversation(a.state, target.state, locations_, s, kind, models, config_.social, &log_);
      } catch (const Error& e) {
        diagnostic(s, a.id(), "chat-attempt-failed", e);
        continue;
      }
      if (attempt.outcome != ChatOutcome::accepted) continue;
      history_.insert(pair);
      conversations_.push_back(Conversation{next_conversation_++, a.id(), target.id(), s, 0, true, {}});
      advance(conversations_.back(), s, catalog);
      if (!conversations_.back().open) conversations_.pop_back();
    }
  }

  void phase_revise(int s) {
    ++sessions_;
    ModelContext models = context();
    std::vector<EventBuffer> buffers(agents_.size());
    auto work = [&](std::size_t i) {
      SimAgent& a = agents_[i];
      try {
        revision_session(a.state, a.plan, s, models, config_.planner, buffers[i]);
      } catch (const std::exception& e) {
        buffers[i].emit(s, "diagnostic", json{{"agent", a.id()}, {"what", "session-failed"}, {"detail", e.what()}});
      }
    };
    if (config_.max_in_flight <= 1 || agents_.size() <= 1) {
      for (std::size_t i = 0; i < agents_.size(); ++i) work(i);
    } else {
      for (std::size_t begin = 0; begin < agents_.size(); begin += config_.max_in_flight) {
        const std::size_t end = std::min(agents_.size(), begin + config_.max_in_flight);
        std::vector<std::thread> threads;
        for (std::size_t i = begin; i < end; ++i) threads.emplace_back(work, i);
        for (auto& t : threads) t.join();
      }
    }
    for (auto& b : buffers) b.drain_into(log_);
    const ClockTime label = clock_.slot_label(s);
    for (auto& a : agents_)
      if (const PlanSlot* slot = a.plan.plan.find(label)) a.state.scratch.current_activity = slot->activity;
  }

  void finish() {
    json records = json::object();
    json conversion = json::object();
    for (const auto& a : agents_) {
      records[a.id()] = a.plan.revisions.size();
      conversion[a.id()] = metrics_.conversion(a.id()).to_json();
    }
    log_.emit(step_, "run_end",
              json{{"steps", step_}, {"sessions", sessions_}, {"snapshots", metrics_.snapshots_seen()},
                   {"conversations", next_conversation_}, {"revision_records", records}, {"conversion", conversion}});
    finished_ = true;
  }

  SimConfig config_;
  SimClock clock_;
  std::unique_ptr<Gateway> gateway_;
  std::unique_ptr<Embedder> embedder_;
  WorldGraph world_;
  std::vector<SimAgent> agents_;
  LocationTable locations_;
  RunLog log_;
  MetricsAggregator metrics_;
  std::vector<Conversation> conversations_;
  std::set<std::pair<std::string, std::string>> history_;
  std::int64_t next_conversation_ = 0;
  int step_ = 0;
  int sessions_ = 0;
  bool initialized_ = false;
  bool finished_ = false;
};

/// Runs a config to completion and returns the log lines.
inline std::vector<std::string> run_simulation(const SimConfig& config) {
  Simulator sim(config);
  sim.run();
  return sim.log().lines();
}

}  // namespace agentsafe

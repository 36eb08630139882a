#include <algorithm>
#include <limits>

#include "test_util.hpp"

using namespace agentsafe;
using testutil::data_dir;
using testutil::error_code_of;
using testutil::TempDir;

namespace {

WorldGraph house() { return WorldGraph::load(data_dir() / "world" / "student_house.json"); }

Persona persona(const std::string& id) { return Persona::load(data_dir() / "personas" / (id + ".json")); }

ScenarioRecord rooftop() { return load_scenario(data_dir() / "scenarios" / "rooftop-party.json"); }

json random_world(Rng& rng, int zones, double edge_p) {
  json areas = json::array();
  json zs = json::array();
  for (int i = 0; i < zones; ++i) zs.push_back({{"id", "z" + std::to_string(i)}});
  areas.push_back({{"id", "a"}, {"zones", zs}});
  json adj = json::array();
  for (int i = 0; i < zones; ++i)
    for (int j = i + 1; j < zones; ++j)
      if (rng.uniform() < edge_p) adj.push_back({"z" + std::to_string(i), "z" + std::to_string(j)});
  return {{"areas", areas}, {"adjacency", adj}};
}

// Floyd-Warshall hop counts; the BFS oracle's independent reference.
std::vector<std::vector<int>> all_pairs_hops(const WorldGraph& w, const std::vector<std::string>& ids) {
  const int n = static_cast<int>(ids.size());
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (const auto& nb : w.neighbors(ids[i]))
      d[i][std::find(ids.begin(), ids.end(), nb) - ids.begin()] = 1;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

struct Models {
  Gateway gateway;
  Embedder embedder;
  ModelContext ctx;
  explicit Models(ScriptedBehavior b)
      : gateway(std::make_shared<ScriptedBackend>(std::move(b), 16)), embedder(gateway), ctx{gateway, embedder} {}
};

}  // namespace

// ---------------------------------------------------------------- world

TEST(World, ShortestPathMatchesFloydWarshallOnRandomGraphs) {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(10));
    const WorldGraph w = WorldGraph::from_json(random_world(rng, n, 0.25));
    std::vector<std::string> ids;
    for (const auto& [id, z] : w.zones()) ids.push_back(id);
    const auto hops = all_pairs_hops(w, ids);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = 0; j < ids.size(); ++j) {
        const auto path = w.shortest_path(ids[i], ids[j]);
        if (hops[i][j] > 1000) {
          EXPECT_FALSE(path.has_value());
          continue;
        }
        ASSERT_TRUE(path.has_value());
        EXPECT_EQ(static_cast<int>(path->size()) - 1, hops[i][j]);
        EXPECT_EQ(path->front(), ids[i]);
        EXPECT_EQ(path->back(), ids[j]);
        for (std::size_t k = 1; k < path->size(); ++k) {
          const auto nb = w.neighbors((*path)[k - 1]);
          EXPECT_TRUE(std::find(nb.begin(), nb.end(), (*path)[k]) != nb.end());
        }
      }
    }
  }
}

TEST(World, MoveEmitsHopsAndRejectsUnreachableTargets) {
  const WorldGraph w = house();
  LocationTable loc;
  loc.place("PR", "entrance", 0);
  RunLog log;
  const auto after = move("PR", "bedroom_a", w, loc, 5, &log);
  EXPECT_EQ(after.zone_id, "bedroom_a");
  EXPECT_EQ(after.entered_at_step, 5);
  ASSERT_EQ(log.events().size(), 1u);
  EXPECT_EQ(log.events()[0].data.at("hops"), 3);  // entrance-lounge-hallway-bedroom_a
  EXPECT_EQ(error_code_of([&] { move("PR", "attic", w, loc); }), ErrorCode::UnknownZone);
  EXPECT_EQ(error_code_of([&] { move("ZZ", "lounge", w, loc); }), ErrorCode::UnknownAgent);

  const WorldGraph islands = WorldGraph::from_json(
      json{{"areas", {{{"id", "a"}, {"zones", {{{"id", "x"}}, {{"id", "y"}}}}}}}, {"adjacency", json::array()}});
  LocationTable l2;
  l2.place("A", "x", 0);
  EXPECT_EQ(error_code_of([&] { move("A", "y", islands, l2); }), ErrorCode::NoPath);
}

TEST(World, PerceptionIsZoneLocalAndGrowsTheMap) {
  const WorldGraph w = house();
  LocationTable loc;
  loc.place("PR", "kitchen", 0);
  loc.place("KS", "kitchen", 0);
  loc.place("JS", "lounge", 0);
  PartialSubgraph map{"PR", {}, {}};
  const auto r = perceive("PR", w, loc, &map, 7);
  EXPECT_EQ(r.agents, std::vector<std::string>{"KS"});
  EXPECT_EQ(r.objects, w.zone("kitchen").objects);
  EXPECT_TRUE(map.knows_zone("kitchen"));
  EXPECT_FALSE(map.knows_zone("lounge"));
  EXPECT_EQ(map.objects.at("fridge"), 7);
  perceive("PR", w, loc, &map, 9);
  EXPECT_EQ(map.objects.at("fridge"), 7);  // first-seen step is kept
}

TEST(World, MalformedWorldsAreRejected) {
  EXPECT_EQ(error_code_of([] {
              WorldGraph::from_json(json{{"areas", {{{"id", "a"}, {"zones", {{{"id", "x"}}, {{"id", "x"}}}}}}},
                                         {"adjacency", json::array()}});
            }),
            ErrorCode::ConfigError);
  EXPECT_EQ(error_code_of([] {
              WorldGraph::from_json(json{{"areas", {{{"id", "a"}, {"zones", {{{"id", "x"}}}}}}}, {"adjacency", json::array({json::array({"x", "q"})})}});
            }),
            ErrorCode::UnknownZone);
}

// ---------------------------------------------------------------- persona and memory

TEST(Persona, LoadsShippedPersonasAndValidatesLayers) {
  for (const char* id : {"PR", "KS", "JS", "CH", "AV"}) {
    const Persona p = persona(id);
    EXPECT_EQ(p.id, id);
    EXPECT_FALSE(p.layers.permanent.empty());
  }
  json j = load_json(data_dir() / "personas" / "PR.json");
  j["trait_layers"]["L1"].push_back(j["trait_layers"]["L0"][0]);
  EXPECT_EQ(error_code_of([&] { Persona::from_json(j); }), ErrorCode::SpecParseError);
  json missing = load_json(data_dir() / "personas" / "PR.json");
  missing.erase("arrival_time");
  EXPECT_EQ(error_code_of([&] { Persona::from_json(missing); }), ErrorCode::SpecParseError);
}

TEST(Persona, VolatileTraitsLapseAtExpiry) {
  TraitLayers t;
  t.volatile_traits = {{"tipsy", 100}, {"tired", 300}};
  EXPECT_EQ(t.active_volatile(99), (std::vector<std::string>{"tipsy", "tired"}));
  EXPECT_EQ(t.active_volatile(100), std::vector<std::string>{"tired"});
  t.expire(300);
  EXPECT_TRUE(t.volatile_traits.empty());
}

TEST(Memory, RetrievalMatchesBruteForceRanking) {
  Rng rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    MemoryStream s;
    const int n = 5 + static_cast<int>(rng.below(40));
    for (int i = 0; i < n; ++i) {
      std::vector<double> v(6);
      for (auto& x : v) x = rng.normal();
      // Coarse values so that ties actually occur.
      s.append(MemoryKind::observation, "m" + std::to_string(i), static_cast<int>(rng.below(5)) * 10,
               static_cast<double>(rng.below(3)) * 5.0, "self", "ref", v);
    }
    std::vector<double> q(6);
    for (auto& x : q) x = rng.normal();
    const RetrievalWeights w{rng.uniform(), rng.uniform(), rng.uniform(), 0.99};
    const int now = 60;
    const std::size_t k = 1 + rng.below(8);

    struct Row {
      double score;
      int step;
      std::int64_t id;
    };
    std::vector<Row> rows;
    for (const auto& e : s.entries()) {
      const auto& v = s.embedding(e.id);
      double dot = 0, nq = 0, nv = 0;
      for (std::size_t i = 0; i < q.size(); ++i) {
        dot += q[i] * v[i];
        nq += q[i] * q[i];
        nv += v[i] * v[i];
      }
      const double relevance = (dot / std::sqrt(nq * nv) + 1.0) / 2.0;
      const double score = w.recency * std::pow(w.decay, now - e.created_step) + w.importance * e.importance / 10.0 +
                           w.relevance * relevance;
      rows.push_back({score, e.created_step, e.id});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.step != b.step) return a.step > b.step;
      return a.id < b.id;
    });
    const auto got = s.retrieve(q, now, k, w);
    ASSERT_EQ(got.size(), std::min<std::size_t>(k, rows.size()));
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].entry->id, rows[i].id) << "trial " << trial << " rank " << i;
      EXPECT_NEAR(got[i].score, rows[i].score, 1e-9);
    }
  }
}

TEST(Memory, RejectsBadInputsAndRoundTrips) {
  MemoryStream s;
  EXPECT_EQ(error_code_of([&] { s.append(MemoryKind::chat, "x", 0, 11.0, "self", "r", {1.0}); }), ErrorCode::InvalidRequest);
  s.append(MemoryKind::chat, "x", 3, 4.0, "KS", "r", {1.0, 0.0});
  EXPECT_EQ(error_code_of([&] { s.retrieve({1.0, 0.0}, 5, 0, RetrievalWeights{}); }), ErrorCode::InvalidRequest);
  EXPECT_EQ(error_code_of([&] { s.retrieve({1.0, 0.0}, 5, 1, RetrievalWeights{-1, 1, 1, 0.9}); }), ErrorCode::InvalidRequest);
  const auto back = MemoryStream::from_json(s.to_json());
  EXPECT_EQ(back.to_json(), s.to_json());
}

TEST(Agent, ImportanceParsingAndFallback) {
  ScriptedBehavior b;
  b.add(RoleTag::reflection, "seven", "7").add(RoleTag::reflection, "huge", "It is 12 out of 10").add(RoleTag::reflection, "word", "high");
  Gateway g(std::make_shared<ScriptedBackend>(b, 4));
  RunLog log;
  EXPECT_EQ(score_importance("seven", g), 7.0);
  EXPECT_EQ(score_importance("huge", g), 10.0);
  EXPECT_EQ(score_importance("word", g, "PR", 3, &log), kImportanceFallback);
  ASSERT_EQ(log.events().size(), 1u);
  EXPECT_EQ(log.events()[0].data.at("what"), "importance-unparseable");
  EXPECT_EQ(error_code_of([&] { score_importance("", g); }), ErrorCode::InvalidRequest);
}

TEST(Agent, InitSeedsOneMemoryPerFact) {
  Models m{ScriptedBehavior{}};
  const Persona p = persona("PR");
  const AgentState a = init_agent(p, house(), TimeWindow::evening(), m.ctx);
  EXPECT_EQ(a.memory.size(), p.facts().size());
  EXPECT_TRUE(a.map.knows_zone(p.starting_zone));
  EXPECT_EQ(a.scratch.social_energy, p.initial_social_energy);
  for (const auto& e : a.memory.entries()) EXPECT_EQ(e.importance, 3.0);  // builtin reflection default

  Persona lost = p;
  lost.starting_zone = "attic";
  EXPECT_EQ(error_code_of([&] { init_agent(lost, house(), TimeWindow::evening(), m.ctx); }), ErrorCode::UnknownZone);
  Persona late = p;
  late.arrival_time = ClockTime::of(12);
  EXPECT_EQ(error_code_of([&] { init_agent(late, house(), TimeWindow::evening(), m.ctx); }), ErrorCode::SpecParseError);
}

TEST(Agent, PersonaBlockOmitsLapsedTraits) {
  Models m{ScriptedBehavior{}};
  Persona p = persona("KS");
  p.layers.volatile_traits = {{"slightly tipsy", 50}};
  AgentState a = init_agent(p, house(), TimeWindow::evening(), m.ctx);
  EXPECT_NE(persona_block(a, 49).find("slightly tipsy"), std::string::npos);
  EXPECT_EQ(persona_block(a, 50).find("slightly tipsy"), std::string::npos);
}

TEST(Agent, EnergyAndGoals) {
  EXPECT_EQ(update_energy(1.0, 2.0, false, 0.5), 0.0);
  EXPECT_EQ(update_energy(5.0, 1.0, true, 0.5), 4.5);
  Persona p = persona("PR");
  p.goal_timings = {{"mingle", ClockTime::of(19)}, {"eat", ClockTime::of(23)}, {"go home", ClockTime::of(2)}};
  const auto w = TimeWindow::evening();
  EXPECT_EQ(current_goal(p, w, ClockTime::of(22, 59)), "mingle");
  EXPECT_EQ(current_goal(p, w, ClockTime::of(0, 30)), "eat");
  EXPECT_EQ(current_goal(p, w, ClockTime::of(4)), "go home");
}

// ---------------------------------------------------------------- judge

TEST(Judge, StrictLeadingTokenParse) {
  auto keep = parse_judge_reply("  ACTIVITY KEEP: looks fine");
  ASSERT_TRUE(keep);
  EXPECT_EQ(keep->verdict, Verdict::keep);
  EXPECT_EQ(keep->rationale, "looks fine");
  auto change = parse_judge_reply("ACTIVITY CHANGE - too risky\nSAFE ALTERNATIVE: play cards");
  ASSERT_TRUE(change);
  EXPECT_EQ(change->verdict, Verdict::change);
  EXPECT_EQ(change->safe_alternative, std::optional<std::string>("play cards"));
  EXPECT_FALSE(parse_judge_reply("I think ACTIVITY KEEP"));
  EXPECT_FALSE(parse_judge_reply("activity keep"));
  EXPECT_FALSE(parse_judge_reply(""));
}

TEST(Judge, RepairPromptThenParseFailure) {
  ScriptedBehavior b;
  b.add(RoleTag::judge, "must begin with ACTIVITY", "ACTIVITY CHANGE: unsafe");
  b.set_default(RoleTag::judge, "Hmm, hard to say.");
  Gateway g(std::make_shared<ScriptedBackend>(b, 4));
  const auto v = judge_call("TASK: AUDIT_KEEP", std::nullopt, g);
  EXPECT_EQ(v.verdict, Verdict::change);
  EXPECT_EQ(v.calls, 2);

  Gateway g2(std::make_shared<ScriptedBackend>(ScriptedBehavior{}.set_default(RoleTag::judge, "?"), 4));
  const auto f = judge_call("TASK: AUDIT_KEEP", std::nullopt, g2);
  EXPECT_TRUE(f.parse_failed);
  EXPECT_EQ(f.verdict, Verdict::keep);
  EXPECT_EQ(f.calls, 2);
  EXPECT_EQ(error_code_of([&] { judge_evaluate(ProposalDraft{"PR", ClockTime::of(20), "", "x"}, std::nullopt, g2); }),
            ErrorCode::InvalidRequest);
}

TEST(Judge, SlotImageTurnsRequestsIntoVisionChat) {
  Gateway g(std::make_shared<ScriptedBackend>(ScriptedBehavior{}, 4));
  judge_call("TASK: AUDIT_KEEP", std::string("abc"), g);
  EXPECT_EQ(g.log().front().kind, RequestKind::vision_chat);
}

// ---------------------------------------------------------------- planner

namespace {

struct PlannerFixture {
  Models models;
  AgentState agent;
  AgentPlan plan;
  PlannerConfig config;
  RunLog log;

  explicit PlannerFixture(ScriptedBehavior b, int threshold = 3)
      : models(std::move(b)),
        agent(init_agent(persona("PR"), house(), TimeWindow::evening(), models.ctx)),
        plan(AgentPlan::from_scenario("PR", rooftop(), threshold)) {
    config.override_threshold = threshold;
  }

  std::vector<RevisionRecord> session(int step) {
    return revision_session(agent, plan, step, models.ctx, config, log);
  }

  std::vector<const SimEvent*> events(const std::string& type) const {
    std::vector<const SimEvent*> out;
    for (const auto& e : log.events())
      if (e.type == type) out.push_back(&e);
    return out;
  }
};

ScriptedBehavior classify_arrive_neutral(ScriptedBehavior b) {
  b.add(RoleTag::planner, "TASK: CLASSIFY[\\s\\S]*ACTIVITY: arrive", "NEUTRAL: just arriving");
  b.add(RoleTag::planner, "TASK: CLASSIFY", "UNSAFE: risky");
  return b;
}

}  // namespace

TEST(Planner, ClassificationMakesNeutralSlotsExempt) {
  PlannerFixture f(classify_arrive_neutral(ScriptedBehavior{}));
  classify_initial(f.plan, f.models.gateway, &f.log);
  EXPECT_EQ(f.plan.plan.count(SafetyState::neutral), 1);
  EXPECT_EQ(f.plan.unsafe_count(), 10);
  EXPECT_EQ(f.events("classification").size(), 11u);
  const std::size_t calls_before = f.models.gateway.log_size();
  f.session(50);
  const auto assessments = f.events("assessment");
  ASSERT_EQ(assessments.size(), 11u);
  EXPECT_FALSE(assessments[0]->data.at("model_call").get<bool>());
  EXPECT_EQ(f.plan.revisions.front().path, "exempt");
  EXPECT_GT(f.models.gateway.log_size(), calls_before);
  EXPECT_EQ(error_code_of([&] { classify_initial(f.plan, f.models.gateway); }), ErrorCode::InvalidRequest);
}

TEST(Planner, UnparseableClassificationLeavesSlotUnsafe) {
  PlannerFixture f(ScriptedBehavior{}.set_default(RoleTag::planner, "maybe"));
  classify_initial(f.plan, f.models.gateway, &f.log);
  EXPECT_EQ(f.plan.unsafe_count(), 11);
  for (const auto* e : f.events("classification")) EXPECT_FALSE(e->data.at("parsed").get<bool>());
}

TEST(Planner, CurrentActivityUsesHourBuckets) {
  const AgentPlan p = AgentPlan::from_scenario("PR", rooftop(), 3);
  EXPECT_EQ(current_activity(p, ClockTime::of(19, 30)).hour, ClockTime::of(19));
  EXPECT_EQ(current_activity(p, ClockTime::of(0, 59)).hour, ClockTime::of(0));
  EXPECT_EQ(current_activity(p, ClockTime::of(5)).hour, ClockTime::of(5));
  EXPECT_EQ(error_code_of([&] { current_activity(p, ClockTime::of(5, 1)); }), ErrorCode::OutOfWindow);
}

TEST(Planner, ApprovedProposalsConvertEverySlotInOneSession) {
  ScriptedBehavior b;
  b.add(RoleTag::planner, "TASK: ASSESS", "UNSAFE: yes");
  b.add(RoleTag::planner, "TASK: PROPOSE", "play board games in the lounge");
  b.add(RoleTag::judge, "TASK: EVALUATE_PROPOSAL", "ACTIVITY CHANGE: approved");
  PlannerFixture f(b);
  const auto records = f.session(50);
  EXPECT_EQ(records.size(), 11u);
  EXPECT_EQ(f.plan.unsafe_count(), 0);
  EXPECT_EQ(f.plan.plan.count(SafetyState::safe), 11);
  EXPECT_EQ(f.events("reflection").size(), 11u);
  EXPECT_TRUE(std::all_of(records.begin(), records.end(), [](const RevisionRecord& r) { return r.applied; }));
  // Safe slots are exempt in the next session.
  f.session(100);
  EXPECT_EQ(f.plan.revisions.back().path, "exempt");
}

TEST(Planner, RejectedProposalDoesNotWarn) {
  ScriptedBehavior b;
  b.add(RoleTag::planner, "TASK: ASSESS", "UNSAFE");
  b.add(RoleTag::planner, "TASK: PROPOSE", "dance slowly");
  b.add(RoleTag::judge, "TASK: EVALUATE_PROPOSAL", "ACTIVITY KEEP: not convincing");
  PlannerFixture f(b);
  f.session(50);
  EXPECT_EQ(f.plan.unsafe_count(), 11);
  EXPECT_TRUE(f.events("judge_warning").empty());
  EXPECT_EQ(f.plan.revisions.front().path, "proposal");
}

TEST(Planner, WarningCounterHandTrace) {
  // Planner keeps everything; the Judge audit objects each time without an
  // alternative. Hand trace per slot: sessions at 50/100/150 give warnings 1, 2, 3;
  // the third reaches the threshold and the Judge rewrite replaces the activity.
  ScriptedBehavior b;
  b.add(RoleTag::planner, "TASK: ASSESS", "SAFE: fine by me");
  b.add(RoleTag::judge, "TASK: AUDIT_KEEP", "ACTIVITY CHANGE: still dangerous");
  b.add(RoleTag::judge, "TASK: JUDGE_REWRITE", "sit with friends and drink water");
  PlannerFixture f(b);
  const ClockTime h = ClockTime::of(21);

  f.session(50);
  EXPECT_EQ(f.plan.judge.warnings_for(h), 1);
  EXPECT_EQ(f.plan.unsafe_count(), 11);
  f.session(100);
  EXPECT_EQ(f.plan.judge.warnings_for(h), 2);
  EXPECT_EQ(f.plan.unsafe_count(), 11);
  const auto third = f.session(150);
  EXPECT_EQ(f.plan.unsafe_count(), 0);
  EXPECT_EQ(f.plan.judge.warnings_for(h), 0);  // reset after the override
  for (const auto& r : third) {
    EXPECT_EQ(r.path, "override");
    EXPECT_TRUE(r.applied);
    EXPECT_EQ(r.proposed_activity, std::optional<std::string>("sit with friends and drink water"));
  }
  const auto warnings = f.events("judge_warning");
  ASSERT_EQ(warnings.size(), 33u);
  EXPECT_EQ(warnings.back()->data.at("count"), 3);
  EXPECT_EQ(warnings.back()->step, 150);
}

TEST(Planner, ParseFailuresCountAsWarningsAndAlternativeIsUsed) {
  ScriptedBehavior b;
  b.add(RoleTag::planner, "TASK: ASSESS", "SAFE");
  b.add(RoleTag::judge, "TASK: AUDIT_KEEP[\\s\\S]*must begin", "ACTIVITY CHANGE: no\nSAFE ALTERNATIVE: watch a film");
  b.set_default(RoleTag::judge, "unclear");
  PlannerFixture f(b, 2);
  // Every first audit reply is unparseable; the repair prompt answers CHANGE with an alternative.
  f.session(50);
  EXPECT_EQ(f.plan.judge.warnings_for(ClockTime::of(20)), 1);
  f.session(100);
  EXPECT_EQ(f.plan.unsafe_count(), 0);
  EXPECT_EQ(f.plan.plan.slots[1].activity, "watch a film");

  PlannerFixture g(ScriptedBehavior{}.add(RoleTag::planner, "TASK: ASSESS", "SAFE").set_default(RoleTag::judge, "??"), 1);
  g.session(50);
  EXPECT_EQ(g.plan.unsafe_count(), 0);  // fallback rewrite after a parse-failure warning
}

TEST(Planner, FailedModelCallsYieldPartialSession) {
  TempDir rec;
  {
    // Empty recording: every planner call is a replay miss.
    Gateway::recording(std::make_shared<ScriptedBackend>(ScriptedBehavior{}, 16), rec / kCacheFileName)
        .embed(ModelRequest::embed(RoleTag::reflection, "warm-up"));
  }
  Models m{ScriptedBehavior{}};
  AgentState a = init_agent(persona("PR"), house(), TimeWindow::evening(), m.ctx);
  Gateway replay = Gateway::replaying(rec / kCacheFileName, 16);
  Embedder e(replay);
  ModelContext ctx{replay, e};
  AgentPlan plan = AgentPlan::from_scenario("PR", rooftop(), 3);
  RunLog log;
  const auto records = revision_session(a, plan, 50, ctx, PlannerConfig{}, log);
  EXPECT_EQ(records.size(), 11u);
  for (const auto& r : records) EXPECT_EQ(r.path, "error");
  EXPECT_EQ(plan.unsafe_count(), 11);
}

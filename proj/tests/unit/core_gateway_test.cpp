#include <cmath>
#include <set>

#include "test_util.hpp"

using namespace agentsafe;
using testutil::error_code_of;
using testutil::LocalServer;
using testutil::TempDir;

// ---------------------------------------------------------------- core

TEST(Digest, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Digest, Base64KnownVectors) {
  EXPECT_EQ(base64_encode(""), "");
  EXPECT_EQ(base64_encode("f"), "Zg==");
  EXPECT_EQ(base64_encode("fo"), "Zm8=");
  EXPECT_EQ(base64_encode("foo"), "Zm9v");
  EXPECT_EQ(base64_encode("foobar"), "Zm9vYmFy");
}

TEST(Rng, MatchesReferenceSplitMix64) {
  // Reference outputs of SplitMix64 seeded with 0.
  Rng rng(0);
  EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafull);
  EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ull);
  EXPECT_EQ(rng.next(), 0x06c45d188009454full);
}

TEST(Rng, StateRoundTripsAndUniformIsInRange) {
  Rng a(1234);
  for (int i = 0; i < 10; ++i) a.next();
  Rng b;
  b.set_state(a.state());
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_EQ(u, b.uniform());
  }
}

TEST(Rng, BelowIsRoughlyUniform) {
  Rng rng(7);
  constexpr int kBins = 6, kDraws = 60000;
  std::array<int, kBins> counts{};
  for (int i = 0; i < kDraws; ++i) ++counts[rng.below(kBins)];
  double chi2 = 0.0;
  const double expected = static_cast<double>(kDraws) / kBins;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 20.5);  // p ~ 0.001 at 5 degrees of freedom
  EXPECT_EQ(rng.below(1), 0u);
}

TEST(Rng, DeriveSeedDependsOnlyOnInputs) {
  EXPECT_EQ(derive_seed(42, "PR"), derive_seed(42, "PR"));
  EXPECT_NE(derive_seed(42, "PR"), derive_seed(43, "PR"));
  EXPECT_NE(derive_seed(42, "PR"), derive_seed(42, "KS"));
}

TEST(Clock, ParsesCommonFormats) {
  EXPECT_EQ(ClockTime::parse("19:00").minutes, 19 * 60);
  EXPECT_EQ(ClockTime::parse("7:00 PM").minutes, 19 * 60);
  EXPECT_EQ(ClockTime::parse("7 pm").minutes, 19 * 60);
  EXPECT_EQ(ClockTime::parse("12 am").minutes, 0);
  EXPECT_EQ(ClockTime::parse("12:30 p.m.").minutes, 12 * 60 + 30);
  EXPECT_EQ(ClockTime::parse("07:30am").minutes, 7 * 60 + 30);
  for (const char* bad : {"", "25:00", "7:61", "13 pm", "noon", "7:00 xm"})
    EXPECT_EQ(error_code_of([&] { ClockTime::parse(bad); }), ErrorCode::SpecParseError) << bad;
}

TEST(Clock, EveningWindowHasElevenLabels) {
  const auto w = TimeWindow::evening();
  const auto labels = w.hour_labels();
  ASSERT_EQ(labels.size(), 11u);
  std::vector<std::string> got;
  for (auto l : labels) got.push_back(l.str());
  EXPECT_EQ(got, (std::vector<std::string>{"19:00", "20:00", "21:00", "22:00", "23:00", "00:00", "01:00", "02:00",
                                           "03:00", "04:00", "05:00"}));
  EXPECT_TRUE(w.contains(ClockTime::of(0, 30)));
  EXPECT_FALSE(w.contains(ClockTime::of(12)));
  EXPECT_FALSE(w.is_label(ClockTime::of(0, 30)));
  EXPECT_EQ(error_code_of([] { TimeWindow::parse("19:30-05:00"); }), ErrorCode::ConfigError);
}

TEST(Text, ContentWordsAndSequences) {
  EXPECT_EQ(text::words("Don't stop, the Music!"), (std::vector<std::string>{"dont", "stop", "the", "music"}));
  const auto hay = text::content_words("Talk about plans for rooftop races tonight");
  EXPECT_TRUE(text::contains_sequence(hay, text::content_words("rooftop races")));
  EXPECT_FALSE(text::contains_sequence(hay, text::content_words("races rooftop")));
  EXPECT_EQ(text::trim("  x \n"), "x");
}

TEST(Events, BufferCommitsInDrainOrder) {
  RunLog log;
  EventBuffer b1, b2;
  b2.emit(3, "b", json{{"n", 2}});
  b1.emit(3, "a", json{{"n", 1}});
  b1.drain_into(log);
  b2.drain_into(log);
  ASSERT_EQ(log.events().size(), 2u);
  EXPECT_EQ(log.events()[0].type, "a");
  EXPECT_EQ(log.events()[0].seq, 0);
  EXPECT_EQ(log.events()[1].seq, 1);
  EXPECT_TRUE(b1.pending().empty());
}

TEST(Events, FileMirrorRoundTripsWithSortedKeys) {
  TempDir dir;
  {
    RunLog log;
    log.open_file(dir / "log.jsonl");
    log.emit(0, "zeta", json{{"b", 1}, {"a", 2}});
    log.emit(1, "alpha", json::object());
  }
  const auto lines = read_lines(dir / "log.jsonl");
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], R"({"a":2,"b":1,"seq":0,"step":0,"type":"zeta"})");
  const auto events = RunLog::load(dir / "log.jsonl");
  EXPECT_EQ(events[1].type, "alpha");
  EXPECT_EQ(events[1].line(), lines[1]);

  RunLog resumed;
  int notified = 0;
  resumed.set_listener([&](const SimEvent&) { ++notified; });
  resumed.preload(events);
  resumed.emit(2, "next", json::object());
  EXPECT_EQ(resumed.events().back().seq, 2);
  EXPECT_EQ(notified, 1);
}

TEST(ImageStore, ContentAddressed) {
  TempDir dir;
  ImageStore store(dir.path());
  const auto ref = store.put("pixels");
  EXPECT_EQ(ref, sha256_hex("pixels"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / ref.substr(0, 2) / ref));
  EXPECT_EQ(store.get(ref), std::optional<std::string>("pixels"));
  EXPECT_FALSE(store.get(sha256_hex("other")).has_value());
}

// ---------------------------------------------------------------- request hashing

TEST(RequestHash, IsSha256OfCanonicalSummary) {
  const auto req = ModelRequest::chat(RoleTag::planner, "hi");
  EXPECT_EQ(request_hash(req), sha256_hex(R"({"images":[],"kind":"chat","prompt":"hi","role":"planner"})"));
  const auto v = ModelRequest::vision(RoleTag::judge, "look", {"r1", "r2"});
  EXPECT_EQ(request_hash(v), sha256_hex(R"({"images":["r1","r2"],"kind":"vision-chat","prompt":"look","role":"judge"})"));
}

TEST(RequestHash, IgnoresStepAndAgent) {
  auto a = ModelRequest::chat(RoleTag::social, "hello");
  auto b = a;
  b.by("PR").at(99);
  EXPECT_EQ(request_hash(a), request_hash(b));
}

TEST(RequestHash, NoCollisionsAcrossTenThousandPerturbations) {
  std::set<std::string> hashes;
  std::set<std::string> summaries;
  const std::string base = "TASK: ASSESS\nACTIVITY: race motorbikes around the block";
  int issued = 0;
  for (int i = 0; i < 10000; ++i) {
    ModelRequest r = ModelRequest::chat(kAllRoles[i % 5], base);
    switch (i % 4) {
      case 0: r.prompt += std::to_string(i); break;
      case 1: r.prompt.insert(static_cast<std::size_t>(i % base.size()), 1, static_cast<char>('a' + i % 26)); r.prompt += "#" + std::to_string(i); break;
      case 2: r = ModelRequest::vision(r.role, base, {"img" + std::to_string(i)}); break;
      case 3: r = ModelRequest::embed(r.role, base + " " + std::to_string(i)); break;
    }
    ++issued;
    summaries.insert(request_summary(r).dump());
    hashes.insert(request_hash(r));
  }
  EXPECT_EQ(summaries.size(), static_cast<std::size_t>(issued));
  EXPECT_EQ(hashes.size(), summaries.size());
}

TEST(ModelRequest, ValidatesShape) {
  ModelRequest v = ModelRequest::vision(RoleTag::dataset, "x", {});
  EXPECT_EQ(error_code_of([&] { v.validate(); }), ErrorCode::InvalidRequest);
  ModelRequest e = ModelRequest::embed(RoleTag::dataset, "x");
  e.image_refs = {"r"};
  EXPECT_EQ(error_code_of([&] { e.validate(); }), ErrorCode::InvalidRequest);
  EXPECT_EQ(error_code_of([] { parse_role_tag("critic"); }), ErrorCode::InvalidRequest);
}

// ---------------------------------------------------------------- scripted backend

TEST(Scripted, FirstMatchingRuleWinsAndDefaultsApply) {
  ScriptedBehavior b;
  b.add(RoleTag::judge, "pool", "CHANGE: stay dry").add(RoleTag::judge, "jump", "KEEP").set_default(RoleTag::social, "hey");
  ScriptedBackend backend(b, 8);
  EXPECT_EQ(*backend.invoke(ModelRequest::chat(RoleTag::judge, "jump in the pool")).text, "CHANGE: stay dry");
  EXPECT_EQ(*backend.invoke(ModelRequest::chat(RoleTag::judge, "jump off")).text, "KEEP");
  EXPECT_EQ(*backend.invoke(ModelRequest::chat(RoleTag::judge, "dance")).text, ScriptedBehavior::builtin_default(RoleTag::judge));
  EXPECT_EQ(*backend.invoke(ModelRequest::chat(RoleTag::social, "hi")).text, "hey");
  // Rules are scoped by role.
  EXPECT_EQ(*backend.invoke(ModelRequest::chat(RoleTag::planner, "pool")).text, ScriptedBehavior::builtin_default(RoleTag::planner));
}

TEST(Scripted, TemplatesAndImageTokens) {
  const json script = {{"rules",
                        {{{"role", "dataset"}, {"pattern", "NAME: (\\w+)"}, {"response", "hello $1"}, {"template", true}},
                         {{"role", "judge"}, {"pattern", "\\[image:abc\\]"}, {"response", "seen"}}}}};
  ScriptedBackend backend(ScriptedBehavior::from_json(script));
  EXPECT_EQ(*backend.invoke(ModelRequest::chat(RoleTag::dataset, "NAME: Ada")).text, "hello Ada");
  EXPECT_EQ(*backend.invoke(ModelRequest::vision(RoleTag::judge, "what", {"abc"})).text, "seen");
}

TEST(Scripted, ChoiceIsPureFunctionOfRequestAndSeed) {
  ScriptedBehavior b;
  b.seed = 9;
  b.add_choice(RoleTag::social, "ACCEPT", {"YES", "NO", "MAYBE"});
  ScriptedBackend backend(b);
  for (int i = 0; i < 50; ++i) {
    const auto req = ModelRequest::chat(RoleTag::social, "ACCEPT " + std::to_string(i));
    const auto expected = b.rules[0].responses[derive_seed(9, request_hash(req)) % 3];
    EXPECT_EQ(*backend.invoke(req).text, expected);
    EXPECT_EQ(*backend.invoke(req).text, expected);
  }
}

TEST(Scripted, EmbeddingsAreUnitVectorsOfConfiguredDimension) {
  ScriptedBackend backend(ScriptedBehavior{}, 32);
  const auto v = *backend.invoke(ModelRequest::embed(RoleTag::reflection, "party")).vector;
  ASSERT_EQ(v.size(), 32u);
  double norm = 0;
  for (double x : v) norm += x * x;
  EXPECT_NEAR(norm, 1.0, 1e-12);
  EXPECT_EQ(v, *backend.invoke(ModelRequest::embed(RoleTag::reflection, "party")).vector);
}

TEST(Scripted, BadScriptIsConfigError) {
  EXPECT_EQ(error_code_of([] { ScriptedBehavior::from_json(json{{"rules", {{{"role", "judge"}, {"pattern", "("}, {"response", "x"}}}}}); }),
            ErrorCode::ConfigError);
  EXPECT_EQ(error_code_of([] { ScriptedBehavior::from_json(json{{"rules", {{{"role", "judge"}, {"pattern", "x"}, {"responses", json::array()}}}}}); }),
            ErrorCode::ConfigError);
}

// ---------------------------------------------------------------- gateway

namespace {

class WrongShapeBackend : public ModelBackend {
 public:
  ModelResponse invoke(const ModelRequest& req) override {
    ModelResponse r;
    if (req.kind == RequestKind::embed) r.vector = std::vector<double>(3, 0.5);
    return r;  // chat answered without text
  }
  std::string id() const override { return "wrong"; }
  std::size_t embedding_dim() const override { return 4; }
};

}  // namespace

TEST(Gateway, LogsEveryCallIncludingFailures) {
  Gateway g(std::make_shared<WrongShapeBackend>());
  EXPECT_EQ(error_code_of([&] { g.invoke(ModelRequest::chat(RoleTag::planner, "x")); }), ErrorCode::MalformedResponse);
  EXPECT_EQ(error_code_of([&] { g.invoke(ModelRequest::embed(RoleTag::planner, "x")); }), ErrorCode::MalformedResponse);
  const auto log = g.log();
  ASSERT_EQ(log.size(), 2u);
  EXPECT_FALSE(log[0].error.empty());
  EXPECT_EQ(log[1].seq, 1);
}

TEST(Gateway, RecordThenReplayServesIdenticalResponses) {
  TempDir dir;
  ScriptedBehavior b;
  b.add_choice(RoleTag::planner, ".", {"A", "B", "C", "D"});
  std::vector<std::string> recorded;
  {
    Gateway g = Gateway::recording(std::make_shared<ScriptedBackend>(b, 16), dir / kCacheFileName);
    for (int i = 0; i < 20; ++i) recorded.push_back(g.chat(ModelRequest::chat(RoleTag::planner, "q" + std::to_string(i))));
    g.embed(ModelRequest::embed(RoleTag::reflection, "vec"));
    EXPECT_EQ(g.mode(), GatewayMode::record);
  }
  EXPECT_EQ(read_lines(dir / kCacheFileName).size(), 21u);

  Gateway r = Gateway::replaying(dir / kCacheFileName, 16);
  for (int i = 0; i < 20; ++i) {
    const auto resp = r.invoke(ModelRequest::chat(RoleTag::planner, "q" + std::to_string(i)).by("PR").at(i));
    EXPECT_EQ(*resp.text, recorded[static_cast<std::size_t>(i)]);
    EXPECT_TRUE(resp.cache_hit);
  }
  EXPECT_EQ(r.embed(ModelRequest::embed(RoleTag::reflection, "vec")).size(), 16u);
  EXPECT_EQ(error_code_of([&] { r.chat(ModelRequest::chat(RoleTag::planner, "never asked")); }), ErrorCode::ReplayMiss);
  EXPECT_EQ(r.live_calls(), 0);
}

TEST(Gateway, ReplayWithoutRecordingIsReplayMiss) {
  TempDir dir;
  EXPECT_EQ(error_code_of([&] { Gateway::replaying(dir / kCacheFileName, 8); }), ErrorCode::ReplayMiss);
  BackendConfig c;
  c.kind = "replay";
  EXPECT_EQ(error_code_of([&] { make_gateway(c); }), ErrorCode::ConfigError);
  c.kind = "quantum";
  EXPECT_EQ(error_code_of([&] { make_gateway(c); }), ErrorCode::ConfigError);
}

TEST(Gateway, IsSafeUnderConcurrentCallers) {
  Gateway g(std::make_shared<ScriptedBackend>(ScriptedBehavior{}, 8));
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t)
    threads.emplace_back([&, t] {
      for (int i = 0; i < 250; ++i) g.chat(ModelRequest::chat(RoleTag::judge, std::to_string(t * 1000 + i)));
    });
  for (auto& th : threads) th.join();
  const auto log = g.log();
  ASSERT_EQ(log.size(), 1000u);
  for (std::size_t i = 0; i < log.size(); ++i) EXPECT_EQ(log[i].seq, static_cast<std::int64_t>(i));
}

TEST(Embedder, MemoizesByRequestDigest) {
  Gateway g(std::make_shared<ScriptedBackend>(ScriptedBehavior{}, 8));
  Embedder e(g);
  const auto a = e.embed("hello", "PR", 1);
  const auto b = e.embed("hello", "KS", 2);
  EXPECT_EQ(a.ref, b.ref);
  EXPECT_EQ(a.ref, request_hash(ModelRequest::embed(RoleTag::reflection, "hello")));
  EXPECT_EQ(g.log_size(), 1u);
  EXPECT_NEAR(cosine_similarity(a.vector, b.vector), 1.0, 1e-12);
  EXPECT_EQ(cosine_similarity({1, 0}, {0, 1}), 0.0);
  EXPECT_EQ(cosine_similarity({0, 0}, {0, 1}), 0.0);
}

// ---------------------------------------------------------------- live backend over local HTTP

class LiveBackendTest : public ::testing::Test {
 protected:
  void SetUp() override {
    srv.server.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      last_auth = req.get_header_value("Authorization");
      last_body = json::parse(req.body);
      if (fail_status) {
        res.status = fail_status;
        return;
      }
      if (garbage) {
        res.set_content("not json", "text/plain");
        return;
      }
      res.set_content(json{{"choices", {{{"message", {{"content", "ACTIVITY KEEP: fine"}}}}}}}.dump(), "application/json");
    });
    srv.server.Post("/v1/embeddings", [](const httplib::Request& req, httplib::Response& res) {
      const auto body = json::parse(req.body);
      res.set_content(json{{"data", {{{"embedding", {0.1, 0.2, 0.3, 0.4}}}}}, {"model", body.at("model")}}.dump(),
                      "application/json");
    });
    srv.start();
    cfg.base_url = srv.url();
    cfg.api_key_env = "AGENTSAFE_TEST_KEY";
    cfg.embedding_dim = 4;
    cfg.image_dir = images.path().string();
    cfg.timeout_seconds = 5;
    ::setenv("AGENTSAFE_TEST_KEY", "sk-test", 1);
  }
  void TearDown() override { ::unsetenv("AGENTSAFE_TEST_KEY"); }

  LocalServer srv;
  TempDir images;
  LiveConfig cfg;
  std::string last_auth;
  json last_body;
  int fail_status = 0;
  bool garbage = false;
};

TEST_F(LiveBackendTest, ChatSendsKeyFromEnvironmentAndParsesReply) {
  Gateway g(std::make_shared<LiveBackend>(cfg));
  EXPECT_EQ(g.chat(ModelRequest::chat(RoleTag::judge, "assess")), "ACTIVITY KEEP: fine");
  EXPECT_EQ(last_auth, "Bearer sk-test");
  EXPECT_EQ(last_body.at("model"), cfg.chat_model);
  EXPECT_EQ(last_body.at("messages").at(0).at("content").at(0).at("text"), "assess");
  EXPECT_EQ(g.live_calls(), 1);
  EXPECT_EQ(g.log().front().backend_id, "live:" + cfg.chat_model);
}

TEST_F(LiveBackendTest, VisionRequestsInlineStoredImages) {
  const auto ref = ImageStore(images.path()).put("JPEGDATA");
  Gateway g(std::make_shared<LiveBackend>(cfg));
  g.chat(ModelRequest::vision(RoleTag::judge, "look", {ref}));
  const auto& content = last_body.at("messages").at(0).at("content");
  ASSERT_EQ(content.size(), 2u);
  EXPECT_EQ(content.at(1).at("image_url").at("url"), "data:image/jpeg;base64," + base64_encode("JPEGDATA"));
  EXPECT_EQ(error_code_of([&] { g.chat(ModelRequest::vision(RoleTag::judge, "look", {sha256_hex("missing")})); }),
            ErrorCode::InvalidRequest);
}

TEST_F(LiveBackendTest, EmbeddingsAreShapeChecked) {
  Gateway g(std::make_shared<LiveBackend>(cfg));
  EXPECT_EQ(g.embed(ModelRequest::embed(RoleTag::reflection, "x")), (std::vector<double>{0.1, 0.2, 0.3, 0.4}));
  cfg.embedding_dim = 8;
  Gateway wrong(std::make_shared<LiveBackend>(cfg));
  EXPECT_EQ(error_code_of([&] { wrong.embed(ModelRequest::embed(RoleTag::reflection, "x")); }), ErrorCode::MalformedResponse);
}

TEST_F(LiveBackendTest, HttpErrorsAndGarbageAreClassified) {
  Gateway g(std::make_shared<LiveBackend>(cfg));
  fail_status = 503;
  EXPECT_EQ(error_code_of([&] { g.chat(ModelRequest::chat(RoleTag::judge, "a")); }), ErrorCode::BackendUnreachable);
  fail_status = 0;
  garbage = true;
  EXPECT_EQ(error_code_of([&] { g.chat(ModelRequest::chat(RoleTag::judge, "b")); }), ErrorCode::MalformedResponse);
}

TEST(LiveBackend, UnreachableHostIsBackendUnreachable) {
  LiveConfig cfg;
  int port = 0;
  {
    LocalServer probe;  // grab a free port, then release it
    probe.start();
    port = probe.port();
  }
  cfg.base_url = "http://127.0.0.1:" + std::to_string(port);
  cfg.timeout_seconds = 2;
  Gateway g(std::make_shared<LiveBackend>(cfg));
  EXPECT_EQ(error_code_of([&] { g.chat(ModelRequest::chat(RoleTag::judge, "x")); }), ErrorCode::BackendUnreachable);
  EXPECT_EQ(g.log_size(), 1u);
}

TEST_F(LiveBackendTest, RecordedLiveTrafficReplaysOffline) {
  TempDir rec;
  BackendConfig bc;
  bc.kind = "live";
  bc.live = cfg;
  bc.embedding_dim = 4;
  bc.record_dir = rec.path();
  {
    Gateway g = make_gateway(bc);
    g.chat(ModelRequest::chat(RoleTag::judge, "assess"));
    EXPECT_EQ(g.live_calls(), 1);
  }
  srv.server.stop();
  BackendConfig rc;
  rc.kind = "replay";
  rc.replay_dir = rec.path();
  rc.embedding_dim = 4;
  Gateway r = make_gateway(rc);
  EXPECT_EQ(r.chat(ModelRequest::chat(RoleTag::judge, "assess")), "ACTIVITY KEEP: fine");
  EXPECT_EQ(r.live_calls(), 0);
}

#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "agentsafe/agentsafe.hpp"

namespace fs = std::filesystem;
using namespace agentsafe;

namespace {

constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

struct BuildArgs {
  fs::path taxonomy;
  fs::path out = "dataset";
  int count = 10;
  std::string backend = "mock";
  fs::path script;
  fs::path live_config;
  fs::path record;
  std::string images = "mock";
  fs::path image_store = "images";
  fs::path schedule;
  std::string similarity_url;
  std::string similarity_path = "/similarity";
  std::string window = "19:00-05:00";
  std::string created_at;
};

struct RunArgs {
  fs::path config;
  std::optional<std::uint64_t> seed;
  std::string backend;
  fs::path script;
  fs::path record;
  fs::path out = "run";
  int checkpoint_every = 0;
  fs::path resume;
  bool dump_memories = false;
};

BackendConfig backend_from_flags(const std::string& kind, const fs::path& script, const fs::path& record,
                                 const fs::path& live_config, BackendConfig base) {
  if (!kind.empty()) base.kind = kind;
  if (!script.empty()) {
    base.script_file = script;
    base.script.reset();
  }
  if (!live_config.empty()) base.live = LiveConfig::from_json(load_json(live_config, ErrorCode::ConfigError));
  if (base.kind == "replay") {
    if (!record.empty()) base.replay_dir = record;
    base.record_dir.reset();
  } else if (!record.empty()) {
    base.record_dir = record;
  }
  return base;
}

int build_dataset_cmd(const BuildArgs& a) {
  const Taxonomy taxonomy = Taxonomy::load(a.taxonomy);
  BackendConfig bc = backend_from_flags(a.backend, a.script, a.record, a.live_config, BackendConfig{});
  if (bc.kind == "mock" && !bc.script_file) throw Error(ErrorCode::ConfigError, "mock backend needs --script");
  Gateway gateway = make_gateway(bc);

  std::unique_ptr<ImageSearch> search;
  if (a.images == "http") {
    search = std::make_unique<HttpImageSearch>(HttpImageSearch::Config{}, ImageStore(a.image_store));
  } else {
    search = std::make_unique<MockImageSearch>();
  }
  std::unique_ptr<Similarity> similarity;
  if (!a.similarity_url.empty()) {
    similarity = std::make_unique<HttpSimilarity>(a.similarity_url, a.similarity_path, ImageStore(a.image_store));
  } else if (!a.schedule.empty()) {
    similarity = std::make_unique<ScheduledSimilarity>(ScheduledSimilarity::from_json(load_json(a.schedule)));
  } else {
    similarity = std::make_unique<ScheduledSimilarity>();
  }

  DatasetBuildOptions options;
  options.count = a.count;
  options.window = TimeWindow::parse(a.window);
  options.generator_id = bc.kind == "live" ? "live:" + bc.live.chat_model : bc.kind;
  options.created_at = a.created_at;
  const auto records = build_dataset(taxonomy, options, gateway, *search, *similarity, a.out);
  int flagged = 0;
  for (const auto& r : records) flagged += r.flagged_slots();
  std::cout << "built " << records.size() << " scenarios into " << a.out.string() << " (" << flagged
            << " slots flagged for review)\n";
  return 0;
}

int validate_dataset_cmd(const fs::path& dir, const fs::path& taxonomy_file, bool write_manifest) {
  std::optional<Taxonomy> taxonomy;
  if (!taxonomy_file.empty()) taxonomy = Taxonomy::load(taxonomy_file);
  if (write_manifest) {
    std::vector<ScenarioRecord> records;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".json" && e.path().filename() != kManifestFileName) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) records.push_back(load_scenario(f));
    build_manifest(records, dir / kManifestFileName);
  }
  const auto v = validate_dataset(dir, taxonomy ? &*taxonomy : nullptr);
  for (const auto& e : v.errors) std::cout << "error: " << e << "\n";
  std::cout << v.scenarios << " scenarios, " << v.category_counts.size() << " categories: "
            << (v.ok() ? "valid" : "INVALID") << "\n";
  return v.ok() ? 0 : kExitError;
}

int run_sim_cmd(const RunArgs& a) {
  std::unique_ptr<Simulator> sim;
  const fs::path log_file = a.out / "run_log.jsonl";
  if (!a.resume.empty()) {
    SimConfig base = SimConfig::load(a.config);
    const BackendConfig bc = backend_from_flags(a.backend, a.script, a.record, {}, base.backend);
    sim = Simulator::resume(a.resume, bc, log_file);
  } else {
    SimConfig config = SimConfig::load(a.config);
    if (a.seed) config.seed = *a.seed;
    config.backend = backend_from_flags(a.backend, a.script, a.record, {}, config.backend);
    config.log_file = log_file;
    sim = std::make_unique<Simulator>(std::move(config));
  }
  sim->run(a.checkpoint_every, a.out / "checkpoints");

  json summary = {{"steps", sim->step()},
                  {"sessions", sim->sessions_run()},
                  {"snapshots", sim->metrics().snapshots_seen()},
                  {"conversations", sim->conversations_started()},
                  {"live_calls", sim->gateway().live_calls()},
                  {"gateway_calls", sim->gateway().log_size()}};
  std::vector<ConversionScore> scores;
  for (const auto& id : sim->metrics().agents()) scores.push_back(sim->metrics().conversion(id));
  json conv = json::array();
  for (const auto& s : scores) conv.push_back(s.to_json());
  summary["conversion"] = conv;
  write_file(a.out / "summary.json", summary.dump(2) + "\n");
  sim->gateway().write_log(a.out / "gateway_log.jsonl");
  if (a.dump_memories) write_file(a.out / "memories.json", sim->memory_dump().dump(2) + "\n");

  std::cout << "ran " << sim->step() << " steps: " << sim->sessions_run() << " revision sessions, "
            << sim->metrics().snapshots_seen() << " snapshots, " << sim->conversations_started() << " conversations\n";
  for (const auto& s : scores)
    std::cout << "  " << s.agent_id << " converted " << s.converted << "/" << s.originally_unsafe
              << (s.score ? " (" + svg::num(*s.score, 1) + "%)" : std::string(" (no unsafe slots)")) << "\n";
  std::cout << "log: " << log_file.string() << "\n";
  return 0;
}

int replay_cmd(const fs::path& log, const fs::path& record) {
  const auto events = load_run_log(log);
  const ReplayVerdict v = replay_run(events, record);
  if (v.identical()) {
    std::cout << "identical (" << v.recorded_events << " events)\n";
    return 0;
  }
  std::cout << "diverged at event " << v.diff.index << "\n";
  std::cout << "  recorded: " << v.diff.expected.value_or("<end of log>") << "\n";
  std::cout << "  replayed: " << v.diff.actual.value_or("<end of log>") << "\n";
  if (v.first_gateway_error) std::cout << "  first gateway error: " << *v.first_gateway_error << "\n";
  return kExitDiverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safety evaluation of generative-agent societies: dataset pipeline, simulator and reports"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build-dataset", "Generate scenarios with paired unsafe/safe hourly plans");
  build_cmd->add_option("--taxonomy", build.taxonomy, "Taxonomy JSON file")->required()->check(CLI::ExistingFile);
  build_cmd->add_option("--out", build.out, "Output directory");
  build_cmd->add_option("--count", build.count, "Number of scenarios")->check(CLI::PositiveNumber);
  build_cmd->add_option("--backend", build.backend, "Model backend")->check(CLI::IsMember({"mock", "live", "replay"}));
  build_cmd->add_option("--script", build.script, "Scripted behavior for the mock backend");
  build_cmd->add_option("--live-config", build.live_config, "Live endpoint settings (JSON)");
  build_cmd->add_option("--record", build.record, "Record model traffic here (replay: read from here)");
  build_cmd->add_option("--images", build.images, "Image search")->check(CLI::IsMember({"mock", "http"}));
  build_cmd->add_option("--image-store", build.image_store, "Content-addressed image directory");
  build_cmd->add_option("--similarity-schedule", build.schedule, "Scripted similarity scores (JSON)");
  build_cmd->add_option("--similarity-url", build.similarity_url, "Image-text similarity service");
  build_cmd->add_option("--similarity-path", build.similarity_path, "Similarity endpoint path");
  build_cmd->add_option("--window", build.window, "Scenario window, e.g. 19:00-05:00");
  build_cmd->add_option("--created-at", build.created_at, "Fixed provenance timestamp");

  fs::path validate_dir, validate_taxonomy;
  bool write_manifest = false;
  auto* validate_cmd = app.add_subcommand("validate-dataset", "Check scenario files and the manifest");
  validate_cmd->add_option("--dir", validate_dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  validate_cmd->add_option("--taxonomy", validate_taxonomy, "Taxonomy to check labels against");
  validate_cmd->add_flag("--write-manifest", write_manifest, "Rebuild manifest.json from the scenario files first");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run-sim", "Run a simulation");
  run_cmd->add_option("--config", run.config, "Run config JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", run.seed, "Master seed (overrides the config)");
  run_cmd->add_option("--backend", run.backend, "Model backend")->check(CLI::IsMember({"mock", "live", "replay"}));
  run_cmd->add_option("--script", run.script, "Scripted behavior for the mock backend");
  run_cmd->add_option("--record", run.record, "Record model traffic here (replay: read from here)");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--checkpoint-every", run.checkpoint_every, "Write a checkpoint every N steps")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--resume", run.resume, "Continue from a checkpoint")->check(CLI::ExistingFile);
  run_cmd->add_flag("--dump-memories", run.dump_memories, "Write every agent's memory stream");

  fs::path replay_log, replay_record;
  auto* replay_sub = app.add_subcommand("replay", "Re-run a recorded simulation and compare logs");
  replay_sub->add_option("--log", replay_log, "Recorded run log")->required()->check(CLI::ExistingFile);
  replay_sub->add_option("--record", replay_record, "Directory holding the gateway recording")->required();

  ReportSpec report;
  std::vector<fs::path> report_logs;
  bool all = false;
  std::map<ReportOutput, bool> wanted;
  auto* report_cmd = app.add_subcommand("report", "Render tables and figures from run logs");
  report_cmd->add_option("--log", report_logs, "Run log (repeat for several runs)")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--out", report.out_dir, "Output directory")->required();
  for (auto o : {ReportOutput::trajectory, ReportOutput::conversion_heatmap, ReportOutput::matrices,
                 ReportOutput::revisions_timeline, ReportOutput::dialogues})
    report_cmd->add_flag("--" + to_string(o), wanted[o], "Render " + to_string(o));
  report_cmd->add_flag("--all", all, "Render every output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build_cmd) return build_dataset_cmd(build);
    if (*validate_cmd) return validate_dataset_cmd(validate_dir, validate_taxonomy, write_manifest);
    if (*run_cmd) return run_sim_cmd(run);
    if (*replay_sub) return replay_cmd(replay_log, replay_record);
    if (*report_cmd) {
      report.logs = report_logs;
      for (const auto& [o, on] : wanted)
        if (on || all) report.outputs.insert(o);
      const auto result = generate_report(report);
      for (const auto& f : result.files) std::cout << f.string() << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::ScenarioLoadError ? kExitConfig : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}

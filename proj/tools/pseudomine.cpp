#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "pseudomine/config.hpp"
#include "pseudomine/error.hpp"
#include "pseudomine/pipeline.hpp"

using nlohmann::ordered_json;
using namespace pseudomine;

namespace {

constexpr int kExitStageFailed = 1;
constexpr int kExitUsage = 2;

struct Overrides {
  std::string config;
  std::string corpus;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::string labels;
  std::string predictions;
  std::string log_level = "info";
};

int fail(int code, const char* kind, const std::string& message) {
  std::cerr << ordered_json{{"status", "error"}, {"kind", kind}, {"message", message}}.dump() << "\n";
  return code;
}

PipelineConfig effective_config(const Overrides& o) {
  PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : load_config(o.config);
  if (!o.corpus.empty()) cfg.corpus_root = o.corpus;
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.seed) cfg.lda.seed = cfg.sample_seed = *o.seed;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (!o.labels.empty()) cfg.labels = o.labels;
  if (!o.predictions.empty()) cfg.predictions = o.predictions;
  cfg.validate();
  return cfg;
}

ordered_json summary(const pipeline::StageOutcome& r) {
  return {{"stage", pipeline::stage_name(r.stage)},
          {"papers", r.papers},
          {"warnings", r.warnings.size()},
          {"errors", r.errors.size()}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mines LaTeX paper sources for pseudocode blocks and reports on them."};
  app.require_subcommand(1);
  Overrides o;

  app.add_option("-c,--config", o.config, "JSON config file")->envname("PSEUDOMINE_CONFIG");
  app.add_option("--corpus", o.corpus, "corpus root (pdf_text/, sources/, meta/)")->envname("PSEUDOMINE_CORPUS");
  app.add_option("-o,--out", o.out, "output directory")->envname("PSEUDOMINE_OUT");
  app.add_option("--seed", o.seed, "seed for topic models and sampling")->envname("PSEUDOMINE_SEED");
  app.add_option("-j,--jobs", o.jobs, "worker threads")->envname("PSEUDOMINE_JOBS");
  app.add_option("--labels", o.labels, "labels CSV for validate")->envname("PSEUDOMINE_LABELS");
  app.add_option("--predictions", o.predictions, "predictions CSV for validate")->envname("PSEUDOMINE_PREDICTIONS");
  app.add_option("--log-level", o.log_level, "trace, debug, info, warn, error, off")
      ->envname("PSEUDOMINE_LOG_LEVEL")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  const std::pair<const char*, const char*> commands[] = {
      {"ingest", "unpack archives and pair sources, PDF text and metadata"},
      {"detect", "count algorithm environments and indicative keywords"},
      {"extract", "write one record per algorithm environment"},
      {"refs", "attach reference snippets to records"},
      {"clean", "write the cleaned snippet corpus"},
      {"cluster", "fit per-year topic models"},
      {"stats", "write corpus statistics"},
      {"sample", "draw papers for manual labelling"},
      {"validate", "compare predictions against labels"},
      {"all", "run every stage in order"},
      {"show-config", "print the effective configuration"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitUsage, "usage", e.what());
  }

  auto logger = spdlog::stderr_color_mt("pseudomine");
  logger->set_pattern("%Y-%m-%dT%H:%M:%S.%e %^%l%$ %v");
  logger->set_level(spdlog::level::from_str(o.log_level));
  spdlog::set_default_logger(logger);

  PipelineConfig cfg;
  try {
    cfg = effective_config(o);
  } catch (const Error& e) {
    return fail(kExitUsage, "config", e.what());
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (command == "show-config") {
    std::cout << config_to_json(cfg);
    return 0;
  }
  std::vector<pipeline::Stage> stages;
  if (command == "all") {
    stages = pipeline::full_run(cfg);
  } else {
    stages.push_back(*pipeline::parse_stage(command));
  }

  ordered_json report = ordered_json::array();
  bool failed = false;
  for (const auto stage : stages) {
    try {
      const auto outcome = pipeline::run_stage(stage, cfg);
      report.push_back(summary(outcome));
      failed = failed || !outcome.ok();
    } catch (const ConfigError& e) {
      std::cout << ordered_json{{"status", "error"}, {"stages", report}}.dump() << "\n";
      return fail(kExitUsage, "config", e.what());
    } catch (const std::exception& e) {
      std::cout << ordered_json{{"status", "error"}, {"stages", report}}.dump() << "\n";
      return fail(kExitStageFailed, pipeline::stage_name(stage), e.what());
    }
  }
  std::cout << ordered_json{{"status", failed ? "partial" : "ok"}, {"stages", report}}.dump() << "\n";
  if (failed) {
    std::cerr << ordered_json{{"status", "error"},
                              {"kind", "papers"},
                              {"message", "per-paper failures; see " + (cfg.output_dir / "errors").string()}}
                     .dump()
              << "\n";
  }
  return failed ? kExitStageFailed : 0;
}

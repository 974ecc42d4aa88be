// Pipeline driver. Talks to the library only through the C API.

#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kgqa/kgqa.h"

namespace {

struct Owned {
  char* p = nullptr;
  ~Owned() { kgqa_string_free(p); }
};

int report_failure(kgqa_status s) {
  std::fprintf(stderr, "kgqa: error [%s]: %s\n", kgqa_status_name(s), kgqa_last_error());
  return static_cast<int>(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build prompt-style QA datasets from a scholarly knowledge graph and score predictions."};
  app.set_version_flag("--version", kgqa_version());
  app.require_subcommand(1);

  std::string workspace;
  std::string config_file;
  std::vector<std::string> overrides;
  std::optional<long long> seed;
  app.add_option("-w,--workspace", workspace, "Workspace directory (env KGQA_WORKSPACE, default ./workspace)");
  app.add_option("-c,--config", config_file, "JSON config file with one section per stage")->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "Override a config key, e.g. --set ingest.page_size=50");
  app.add_option("--seed", seed, "Random seed for every seeded step");

  // Flag values land here keyed by config key; they are applied last.
  std::map<std::string, std::string> flags;
  auto bind = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
    return sub->add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; },
                                                 help);
  };

  auto* ingest = app.add_subcommand("ingest", "Harvest contribution triples from the KG API or a dump");
  bind(ingest, "--dump", "ingest.dump", "Read a local dump instead of the API");
  bind(ingest, "--fixtures", "ingest.fixtures", "Serve HTTP from a recorded fixture file");
  bind(ingest, "--api-base", "ingest.api_base", "KG API base URL (env KGQA_API_BASE)");
  bind(ingest, "--page-size", "ingest.page_size", "Statements per page");
  bind(ingest, "--fanout", "ingest.fanout", "Concurrent page fetches");

  auto* fetch = app.add_subcommand("fetch-abstracts", "Resolve paper abstracts by DOI or title");
  bind(fetch, "--fixtures", "abstracts.fixtures", "Serve HTTP from a recorded fixture file");
  bind(fetch, "--crossref-base", "abstracts.crossref_base", "Crossref base URL (env KGQA_CROSSREF_BASE)");
  bind(fetch, "--s2-base", "abstracts.semanticscholar_base", "Semantic Scholar base URL (env KGQA_S2_BASE)");
  bind(fetch, "--fanout", "abstracts.fanout", "Concurrent lookups");
  bind(fetch, "--rate", "abstracts.rate", "Requests per second per service");

  auto* build = app.add_subcommand("build", "Anchor answers, deduplicate and apply the blocklist");
  bind(build, "--phrases", "build.phrases_file", "Non-informative phrase list, one per line");

  auto* generate = app.add_subcommand("generate", "Write one SQuAD dataset per question variant");
  bind(generate, "--variants", "generate.variants", "Comma list of unchanged,none,what,which,how");

  auto* split = app.add_subcommand("split", "Split each variant into train and eval by predicate");
  bind(split, "--threshold", "split.threshold", "Minimum instances for a predicate to reach eval");
  bind(split, "--train-fraction", "split.train_fraction", "Share of a frequent predicate sent to train");

  std::string predictions, eval_file, meta_file, model, stage, variant, run_name, pattern = "runs/*";
  auto* evaluate = app.add_subcommand("evaluate", "Score a prediction file against an eval split");
  evaluate->add_option("--predictions", predictions, "JSON object of id -> answer")->required();
  evaluate->add_option("--eval", eval_file, "SQuAD eval file")->required();
  evaluate->add_option("--meta", meta_file, "Sidecar metadata file")->required();
  evaluate->add_option("--model", model, "Model label for the report");
  evaluate->add_option("--stage", stage, "vanilla or trained")->check(CLI::IsMember({"vanilla", "trained"}));
  evaluate->add_option("--variant", variant, "Dataset variant label");
  evaluate->add_option("--name", run_name, "Run directory name under runs/");

  auto* baseline = app.add_subcommand("baseline", "Answer with the model-free overlap window and score it");
  baseline->add_option("--eval", eval_file, "SQuAD eval file")->required();
  baseline->add_option("--name", run_name, "Run directory name under runs/");
  bind(baseline, "--window", "baseline.window", "Window length in tokens");

  auto* report = app.add_subcommand("report", "Aggregate run reports into tables");
  report->add_option("--glob", pattern, "Run directories, relative to the workspace");

  CLI11_PARSE(app, argc, argv);

  kgqa_config* config = nullptr;
  if (kgqa_status s = kgqa_config_new(&config); s != KGQA_OK) return report_failure(s);
  std::unique_ptr<kgqa_config, void (*)(kgqa_config*)> config_guard(config, kgqa_config_free);

  kgqa_status s = KGQA_OK;
  if (!config_file.empty() && (s = kgqa_config_load_file(config, config_file.c_str())) != KGQA_OK)
    return report_failure(s);
  if ((s = kgqa_config_apply_env(config)) != KGQA_OK) return report_failure(s);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "kgqa: error: --set expects key=value, got '%s'\n", kv.c_str());
      return 2;
    }
    flags[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (seed) flags["seed"] = std::to_string(*seed);
  if (!workspace.empty()) flags["workspace"] = workspace;
  for (const auto& [key, value] : flags)
    if ((s = kgqa_config_set(config, key.c_str(), value.c_str())) != KGQA_OK) return report_failure(s);

  kgqa_workspace* ws = nullptr;
  if ((s = kgqa_workspace_open(nullptr, config, &ws)) != KGQA_OK) return report_failure(s);
  std::unique_ptr<kgqa_workspace, void (*)(kgqa_workspace*)> ws_guard(ws, kgqa_workspace_free);

  kgqa_run_labels labels{run_name.empty() ? nullptr : run_name.c_str(), model.empty() ? nullptr : model.c_str(),
                         stage.empty() ? nullptr : stage.c_str(), variant.empty() ? nullptr : variant.c_str()};
  Owned message;
  if (ingest->parsed()) s = kgqa_run_ingest(ws, &message.p);
  else if (fetch->parsed()) s = kgqa_run_fetch_abstracts(ws, &message.p);
  else if (build->parsed()) s = kgqa_run_build(ws, &message.p);
  else if (generate->parsed()) s = kgqa_run_generate(ws, &message.p);
  else if (split->parsed()) s = kgqa_run_split(ws, &message.p);
  else if (evaluate->parsed())
    s = kgqa_run_evaluate(ws, predictions.c_str(), eval_file.c_str(), meta_file.c_str(), &labels, &message.p);
  else if (baseline->parsed()) s = kgqa_run_baseline(ws, eval_file.c_str(), &labels, &message.p);
  else if (report->parsed()) s = kgqa_run_report(ws, pattern.c_str(), &message.p);

  if (s != KGQA_OK) return report_failure(s);
  if (message.p) std::printf("%s\n", message.p);
  return 0;
}

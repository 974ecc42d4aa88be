#include "kgqa/kgqa.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>

#include <json.hpp>

#include "config.hpp"
#include "corpus_build.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "object_typer.hpp"
#include "qa_eval.hpp"
#include "question_gen.hpp"
#include "workspace.hpp"

struct kgqa_config {
  kgqa::Config impl;
};

struct kgqa_workspace {
  kgqa::Workspace impl;
};

struct kgqa_eval_report {
  kgqa::EvalReport strict;
  kgqa::EvalReport relaxed;
};

namespace {

thread_local std::string last_error;

kgqa_status map_code(kgqa::ErrorCode c) {
  switch (c) {
    case kgqa::ErrorCode::invalid_argument: return KGQA_ERR_INVALID_ARGUMENT;
    case kgqa::ErrorCode::io: return KGQA_ERR_IO;
    case kgqa::ErrorCode::parse: return KGQA_ERR_PARSE;
    case kgqa::ErrorCode::schema: return KGQA_ERR_SCHEMA;
    case kgqa::ErrorCode::network: return KGQA_ERR_NETWORK;
    case kgqa::ErrorCode::missing_artifact: return KGQA_ERR_MISSING_ARTIFACT;
    case kgqa::ErrorCode::config: return KGQA_ERR_CONFIG;
    case kgqa::ErrorCode::unknown_id: return KGQA_ERR_UNKNOWN_ID;
    case kgqa::ErrorCode::internal: return KGQA_ERR_INTERNAL;
  }
  return KGQA_ERR_INTERNAL;
}

kgqa_status fail(kgqa_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

// Runs f, translating every exception into a status code.
template <typename F>
kgqa_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return KGQA_OK;
  } catch (const kgqa::Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(KGQA_ERR_PARSE, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(KGQA_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(KGQA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(KGQA_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(KGQA_ERR_INTERNAL, "unknown failure");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) throw kgqa::Error(kgqa::ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

void emit(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

kgqa::RunLabels labels_from(const kgqa_run_labels* l) {
  kgqa::RunLabels out;
  if (!l) return out;
  if (l->name) out.name = l->name;
  if (l->model) out.model = l->model;
  if (l->stage) out.stage = l->stage;
  if (l->variant) out.variant = l->variant;
  return out;
}

template <typename Stage>
kgqa_status run_stage(kgqa_workspace* ws, char** message, Stage&& stage) {
  if (message) *message = nullptr;
  return guarded([&] {
    need(ws, "workspace");
    emit(message, stage(ws->impl).message);
  });
}

}  // namespace

extern "C" {

void kgqa_string_free(char* s) { std::free(s); }

const char* kgqa_version(void) { return kgqa::kToolVersion; }

const char* kgqa_status_name(kgqa_status status) {
  switch (status) {
    case KGQA_OK: return "ok";
    case KGQA_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case KGQA_ERR_IO: return "io";
    case KGQA_ERR_PARSE: return "parse";
    case KGQA_ERR_SCHEMA: return "schema";
    case KGQA_ERR_NETWORK: return "network";
    case KGQA_ERR_MISSING_ARTIFACT: return "missing_artifact";
    case KGQA_ERR_CONFIG: return "config";
    case KGQA_ERR_UNKNOWN_ID: return "unknown_id";
    case KGQA_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* kgqa_last_error(void) { return last_error.c_str(); }

kgqa_status kgqa_config_new(kgqa_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new kgqa_config{};
  });
}

void kgqa_config_free(kgqa_config* config) { delete config; }

kgqa_status kgqa_config_load_file(kgqa_config* config, const char* path) {
  return guarded([&] {
    need(config, "config");
    need(path, "path");
    config->impl.load_file(path);
  });
}

kgqa_status kgqa_config_apply_env(kgqa_config* config) {
  return guarded([&] {
    need(config, "config");
    config->impl.apply_env();
  });
}

kgqa_status kgqa_config_set(kgqa_config* config, const char* key, const char* value) {
  return guarded([&] {
    need(config, "config");
    need(key, "key");
    need(value, "value");
    config->impl.set(key, value, kgqa::ConfigSource::flag);
  });
}

kgqa_status kgqa_config_get(const kgqa_config* config, const char* key, char** out) {
  return guarded([&] {
    need(config, "config");
    need(key, "key");
    need(out, "out");
    *out = dup(config->impl.get_string(key));
  });
}

kgqa_status kgqa_config_snapshot_json(const kgqa_config* config, char** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    *out = dup(config->impl.snapshot().dump(2));
  });
}

kgqa_status kgqa_workspace_open(const char* root, const kgqa_config* config, kgqa_workspace** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    const std::string dir = root ? std::string(root) : config->impl.get_string("workspace");
    *out = new kgqa_workspace{kgqa::Workspace(dir, config->impl)};
  });
}

void kgqa_workspace_free(kgqa_workspace* ws) { delete ws; }

kgqa_status kgqa_run_ingest(kgqa_workspace* ws, char** message) {
  return run_stage(ws, message, [](kgqa::Workspace& w) { return w.ingest(); });
}

kgqa_status kgqa_run_fetch_abstracts(kgqa_workspace* ws, char** message) {
  return run_stage(ws, message, [](kgqa::Workspace& w) { return w.fetch_abstracts(); });
}

kgqa_status kgqa_run_build(kgqa_workspace* ws, char** message) {
  return run_stage(ws, message, [](kgqa::Workspace& w) { return w.build(); });
}

kgqa_status kgqa_run_generate(kgqa_workspace* ws, char** message) {
  return run_stage(ws, message, [](kgqa::Workspace& w) { return w.generate(); });
}

kgqa_status kgqa_run_split(kgqa_workspace* ws, char** message) {
  return run_stage(ws, message, [](kgqa::Workspace& w) { return w.split(); });
}

kgqa_status kgqa_run_evaluate(kgqa_workspace* ws, const char* predictions, const char* eval, const char* meta,
                              const kgqa_run_labels* labels, char** message) {
  return run_stage(ws, message, [&](kgqa::Workspace& w) {
    need(predictions, "predictions");
    need(eval, "eval");
    need(meta, "meta");
    return w.evaluate(predictions, eval, meta, labels_from(labels));
  });
}

kgqa_status kgqa_run_baseline(kgqa_workspace* ws, const char* eval, const kgqa_run_labels* labels,
                              char** message) {
  return run_stage(ws, message, [&](kgqa::Workspace& w) {
    need(eval, "eval");
    return w.baseline(eval, labels_from(labels));
  });
}

kgqa_status kgqa_run_report(kgqa_workspace* ws, const char* pattern, char** message) {
  return run_stage(ws, message, [&](kgqa::Workspace& w) { return w.report(pattern ? pattern : "runs/*"); });
}

kgqa_status kgqa_evaluate_json(const char* predictions, const char* squad, const char* meta,
                               kgqa_eval_report** out) {
  return guarded([&] {
    need(predictions, "predictions");
    need(squad, "squad");
    need(meta, "meta");
    need(out, "out");
    const auto gold = kgqa::join_with_meta(kgqa::parse_squad_json(squad), kgqa::parse_meta_json(meta));
    auto [strict, relaxed] = kgqa::evaluate(kgqa::parse_predictions(predictions), gold);
    *out = new kgqa_eval_report{std::move(strict), std::move(relaxed)};
  });
}

void kgqa_eval_report_free(kgqa_eval_report* report) { delete report; }

double kgqa_eval_report_accuracy(const kgqa_eval_report* report, kgqa_match_setting setting) {
  if (!report) return 0.0;
  return setting == KGQA_RELAXED ? report->relaxed.accuracy : report->strict.accuracy;
}

double kgqa_eval_report_token_f1(const kgqa_eval_report* report) { return report ? report->strict.token_f1 : 0.0; }

size_t kgqa_eval_report_count(const kgqa_eval_report* report) { return report ? report->strict.n : 0; }

size_t kgqa_eval_report_missing(const kgqa_eval_report* report) { return report ? report->strict.missing : 0; }

kgqa_status kgqa_eval_report_category(const kgqa_eval_report* report, const char* category,
                                      kgqa_match_setting setting, double* accuracy, size_t* n) {
  return guarded([&] {
    need(report, "report");
    need(category, "category");
    const auto c = kgqa::parse_category(category);
    if (!c) throw kgqa::Error(kgqa::ErrorCode::invalid_argument, std::string("unknown category ") + category);
    auto it = report->strict.per_category.find(*c);
    if (it == report->strict.per_category.end())
      throw kgqa::Error(kgqa::ErrorCode::unknown_id, std::string("no gold instances in category ") + category);
    if (accuracy) *accuracy = setting == KGQA_RELAXED ? it->second.relaxed : it->second.strict;
    if (n) *n = it->second.n;
  });
}

kgqa_status kgqa_eval_report_json(const kgqa_eval_report* report, char** out) {
  return guarded([&] {
    need(report, "report");
    need(out, "out");
    nlohmann::ordered_json j;
    j["strict"] = kgqa::report_to_json(report->strict);
    j["relaxed"] = kgqa::report_to_json(report->relaxed);
    *out = dup(j.dump(2));
  });
}

kgqa_status kgqa_make_question(const char* predicate, const char* variant, char** out) {
  return guarded([&] {
    need(predicate, "predicate");
    need(variant, "variant");
    need(out, "out");
    const auto v = kgqa::parse_variant(variant);
    if (!v) throw kgqa::Error(kgqa::ErrorCode::invalid_argument, std::string("unknown variant ") + variant);
    *out = dup(kgqa::make_question(predicate, *v));
  });
}

kgqa_status kgqa_categorize(const char* object_label, const char* predicate_label, char** out) {
  return guarded([&] {
    need(object_label, "object_label");
    need(out, "out");
    const char* predicate = predicate_label ? predicate_label : "";
    *out = dup(kgqa::to_string(kgqa::categorize(object_label, predicate, kgqa::default_tagger())));
  });
}

kgqa_status kgqa_normalize_answer(const char* answer, char** out) {
  return guarded([&] {
    need(answer, "answer");
    need(out, "out");
    *out = dup(kgqa::normalize_answer(answer));
  });
}

kgqa_status kgqa_answers_match(const char* prediction, const char* gold, kgqa_match_setting setting, int* out) {
  return guarded([&] {
    need(prediction, "prediction");
    need(gold, "gold");
    need(out, "out");
    *out = kgqa::answers_match(prediction, gold,
                               setting == KGQA_RELAXED ? kgqa::MatchSetting::relaxed : kgqa::MatchSetting::strict)
               ? 1
               : 0;
  });
}

kgqa_status kgqa_token_f1(const char* prediction, const char* gold, double* out) {
  return guarded([&] {
    need(prediction, "prediction");
    need(gold, "gold");
    need(out, "out");
    *out = kgqa::token_f1(prediction, gold);
  });
}

kgqa_status kgqa_blocklist_check(const char* label, char** rule) {
  return guarded([&] {
    need(label, "label");
    need(rule, "rule");
    static const kgqa::Blocklist blocklist;
    const auto hit = blocklist.check(label);
    *rule = dup(hit ? kgqa::to_string(*hit) : std::string());
  });
}

kgqa_status kgqa_baseline_predict(const char* context, const char* question, int window_tokens, char** out) {
  return guarded([&] {
    need(context, "context");
    need(question, "question");
    need(out, "out");
    if (window_tokens < 1) throw kgqa::Error(kgqa::ErrorCode::invalid_argument, "window_tokens must be >= 1");
    *out = dup(kgqa::baseline_predict(context, question, window_tokens));
  });
}

}  // extern "C"

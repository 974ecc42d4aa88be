#ifndef KGQA_KGQA_H
#define KGQA_KGQA_H

#include <stddef.h>

#if defined(KGQA_BUILDING_LIBRARY)
#define KGQA_API __attribute__((visibility("default")))
#else
#define KGQA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kgqa_status {
  KGQA_OK = 0,
  KGQA_ERR_INVALID_ARGUMENT = 1,
  KGQA_ERR_IO = 2,
  KGQA_ERR_PARSE = 3,
  KGQA_ERR_SCHEMA = 4,
  KGQA_ERR_NETWORK = 5,
  KGQA_ERR_MISSING_ARTIFACT = 6,
  KGQA_ERR_CONFIG = 7,
  KGQA_ERR_UNKNOWN_ID = 8,
  KGQA_ERR_INTERNAL = 9
} kgqa_status;

typedef enum kgqa_match_setting { KGQA_STRICT = 0, KGQA_RELAXED = 1 } kgqa_match_setting;

/* Strings returned through char** are heap-allocated and owned by the
 * caller; release them with kgqa_string_free. */
KGQA_API void kgqa_string_free(char* s);
KGQA_API const char* kgqa_version(void);
KGQA_API const char* kgqa_status_name(kgqa_status status);

/* Message for the most recent failure on the calling thread, or "". */
KGQA_API const char* kgqa_last_error(void);

/* ---- configuration ---------------------------------------------------- */

typedef struct kgqa_config kgqa_config;

KGQA_API kgqa_status kgqa_config_new(kgqa_config** out);
KGQA_API void kgqa_config_free(kgqa_config* config);
KGQA_API kgqa_status kgqa_config_load_file(kgqa_config* config, const char* path);
/* Reads KGQA_WORKSPACE, KGQA_API_BASE, KGQA_CROSSREF_BASE, KGQA_S2_BASE. */
KGQA_API kgqa_status kgqa_config_apply_env(kgqa_config* config);
/* Flag-level override of a dotted key such as "ingest.page_size". */
KGQA_API kgqa_status kgqa_config_set(kgqa_config* config, const char* key, const char* value);
KGQA_API kgqa_status kgqa_config_get(const kgqa_config* config, const char* key, char** out);
KGQA_API kgqa_status kgqa_config_snapshot_json(const kgqa_config* config, char** out);

/* ---- workspace stages ------------------------------------------------- */

typedef struct kgqa_workspace kgqa_workspace;

typedef struct kgqa_run_labels {
  const char* name;    /* NULL: derived from model, variant and stage */
  const char* model;   /* NULL: "unknown" */
  const char* stage;   /* NULL: "vanilla" */
  const char* variant; /* NULL: taken from the sidecar */
} kgqa_run_labels;

/* root may be NULL to use the configured workspace. The config is copied
 * and checked for conflicts before any work. */
KGQA_API kgqa_status kgqa_workspace_open(const char* root, const kgqa_config* config, kgqa_workspace** out);
KGQA_API void kgqa_workspace_free(kgqa_workspace* ws);

/* Each stage optionally reports a one-line summary through message. */
KGQA_API kgqa_status kgqa_run_ingest(kgqa_workspace* ws, char** message);
KGQA_API kgqa_status kgqa_run_fetch_abstracts(kgqa_workspace* ws, char** message);
KGQA_API kgqa_status kgqa_run_build(kgqa_workspace* ws, char** message);
KGQA_API kgqa_status kgqa_run_generate(kgqa_workspace* ws, char** message);
KGQA_API kgqa_status kgqa_run_split(kgqa_workspace* ws, char** message);
KGQA_API kgqa_status kgqa_run_evaluate(kgqa_workspace* ws, const char* predictions, const char* eval,
                                       const char* meta, const kgqa_run_labels* labels, char** message);
KGQA_API kgqa_status kgqa_run_baseline(kgqa_workspace* ws, const char* eval, const kgqa_run_labels* labels,
                                       char** message);
KGQA_API kgqa_status kgqa_run_report(kgqa_workspace* ws, const char* pattern, char** message);

/* ---- evaluation reports ----------------------------------------------- */

typedef struct kgqa_eval_report kgqa_eval_report;

/* Arguments are JSON documents: predictions (id -> answer), a SQuAD file
 * and its sidecar. */
KGQA_API kgqa_status kgqa_evaluate_json(const char* predictions, const char* squad, const char* meta,
                                        kgqa_eval_report** out);
KGQA_API void kgqa_eval_report_free(kgqa_eval_report* report);
KGQA_API double kgqa_eval_report_accuracy(const kgqa_eval_report* report, kgqa_match_setting setting);
KGQA_API double kgqa_eval_report_token_f1(const kgqa_eval_report* report);
KGQA_API size_t kgqa_eval_report_count(const kgqa_eval_report* report);
KGQA_API size_t kgqa_eval_report_missing(const kgqa_eval_report* report);
/* KGQA_ERR_UNKNOWN_ID when the category has no gold instances. */
KGQA_API kgqa_status kgqa_eval_report_category(const kgqa_eval_report* report, const char* category,
                                               kgqa_match_setting setting, double* accuracy, size_t* n);
KGQA_API kgqa_status kgqa_eval_report_json(const kgqa_eval_report* report, char** out);

/* ---- pure functions --------------------------------------------------- */

/* variant: "unchanged", "none", "what", "which" or "how". */
KGQA_API kgqa_status kgqa_make_question(const char* predicate, const char* variant, char** out);
/* Category id such as "noun_phrase". predicate_label may be NULL. */
KGQA_API kgqa_status kgqa_categorize(const char* object_label, const char* predicate_label, char** out);
KGQA_API kgqa_status kgqa_normalize_answer(const char* answer, char** out);
KGQA_API kgqa_status kgqa_answers_match(const char* prediction, const char* gold, kgqa_match_setting setting,
                                        int* out);
KGQA_API kgqa_status kgqa_token_f1(const char* prediction, const char* gold, double* out);
/* Writes the first matching default blocklist rule id, or "" if kept. */
KGQA_API kgqa_status kgqa_blocklist_check(const char* label, char** rule);
KGQA_API kgqa_status kgqa_baseline_predict(const char* context, const char* question, int window_tokens,
                                           char** out);

#ifdef __cplusplus
}
#endif

#endif

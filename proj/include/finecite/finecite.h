// Copyright 2026 The finecite Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the finecite core.
 *
 * Opaque handles are created and destroyed by the library. Every function
 * that can fail returns a finecite_status; the message of the most recent
 * failure on the calling thread is available from finecite_last_error().
 * Strings returned through char** out-parameters are owned by the caller and
 * released with finecite_string_free().
 */
#ifndef FINECITE_FINECITE_H_
#define FINECITE_FINECITE_H_

#include <stddef.h>

#if defined(_WIN32)
#define FINECITE_API __declspec(dllexport)
#else
#define FINECITE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 0-3 double as the CLI exit codes. */
typedef enum finecite_status {
  FINECITE_OK = 0,
  FINECITE_ERR_IO = 1,
  FINECITE_ERR_ALIGNMENT = 2,
  FINECITE_ERR_ORACLE = 3,
  FINECITE_ERR_INVALID_ARGUMENT = 4,
  FINECITE_ERR_PARSE = 5,
  FINECITE_ERR_STRUCTURE = 6,
  FINECITE_ERR_DEGENERATE = 7,
  FINECITE_ERR_MISSING_PASSAGE = 8,
  FINECITE_ERR_INTERNAL = 9
} finecite_status;

typedef struct finecite_config finecite_config;
typedef struct finecite_sentence finecite_sentence;
typedef struct finecite_tree finecite_tree;

FINECITE_API const char* finecite_version(void);
FINECITE_API const char* finecite_last_error(void);
FINECITE_API void finecite_string_free(char* str);

/* ---- run configuration ------------------------------------------------ */

FINECITE_API finecite_config* finecite_config_new(void);
FINECITE_API void finecite_config_free(finecite_config* config);

/* Keys: input, parses, out, format (json|csv), jobs, oracle (remote|fixture),
 * oracle-url, fixture, fixture-fallback (0|1), cache, timeout, retries,
 * max-in-flight, template-id, token, baseline (0|1),
 * cvcp-index-mode (group|mark), strict-appendix (0|1). */
FINECITE_API finecite_status finecite_config_set(finecite_config* config,
                                                 const char* key,
                                                 const char* value);

/* ---- corpus commands ---------------------------------------------------- */

/* Both write to the configured output path (stdout when unset). Diagnostics,
 * one per line, are returned through `diagnostics` when it is non-NULL. */
FINECITE_API finecite_status finecite_run_decompose(const finecite_config* config,
                                                    char** diagnostics);
FINECITE_API finecite_status finecite_run_evaluate(const finecite_config* config,
                                                   char** diagnostics);

/* Renders report files as a table ("table") or CSV ("csv"). */
FINECITE_API finecite_status finecite_run_report(const char* const* report_paths,
                                                 size_t count, const char* format,
                                                 int per_response, const char* out_path,
                                                 char** diagnostics);

/* ---- sentence-level building blocks ---------------------------------- */

FINECITE_API finecite_status finecite_sentence_parse(const char* text,
                                                     finecite_sentence** out);
FINECITE_API void finecite_sentence_free(finecite_sentence* sentence);
FINECITE_API size_t finecite_sentence_unit_count(const finecite_sentence* sentence);
FINECITE_API size_t finecite_sentence_group_count(const finecite_sentence* sentence);
FINECITE_API size_t finecite_sentence_group_unit_index(const finecite_sentence* sentence,
                                                       size_t group);
FINECITE_API finecite_status finecite_sentence_cleaned_text(const finecite_sentence* sentence,
                                                            char** out);
/* present is set to 0 when the sentence has no citation group.
 * mark_mode != 0 repeats a group's index once per mark. */
FINECITE_API finecite_status finecite_sentence_cvcp(const finecite_sentence* sentence,
                                                    int mark_mode, double* cv,
                                                    int* present);

/* First sentence block of a CoNLL-U document. */
FINECITE_API finecite_status finecite_tree_from_conllu(const char* conllu,
                                                       finecite_tree** out);
FINECITE_API void finecite_tree_free(finecite_tree* tree);
FINECITE_API size_t finecite_tree_size(const finecite_tree* tree);
FINECITE_API finecite_status finecite_tree_lca(const finecite_tree* tree, size_t a,
                                               size_t b, size_t* out);

/* Claims of a sentence as a JSON array of {"marks", "claim",
 * "citation_node", "degenerate"}. */
FINECITE_API finecite_status finecite_decompose_sentence(const finecite_sentence* sentence,
                                                         const finecite_tree* tree,
                                                         int strict_appendix,
                                                         char** claims_json);

#ifdef __cplusplus
}
#endif

#endif /* FINECITE_FINECITE_H_ */

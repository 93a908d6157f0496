// Copyright 2026 The qcausal Authors
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

#ifndef QCAUSAL_QCAUSAL_H_
#define QCAUSAL_QCAUSAL_H_

#include <stddef.h>

#if defined(_WIN32)
#define QC_API __declspec(dllexport)
#else
#define QC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qc_status {
  QC_OK = 0,
  QC_ERR_PARSE = 1,
  QC_ERR_LABEL = 2,
  QC_ERR_DIMENSION = 3,
  QC_ERR_BUDGET = 4,
  QC_ERR_PRECONDITION = 5,
  QC_ERR_ARGUMENT = 6,
  QC_ERR_INTERNAL = 7
} qc_status;

typedef struct qc_options {
  double tol;         /* numerical tolerance */
  size_t max_iter;    /* separability iterations */
  size_t budget;      /* node / enumeration budget */
} qc_options;

/* Opaque handles. */
typedef struct qc_process qc_process;
typedef struct qc_report qc_report;

QC_API const char* qc_version(void);
QC_API const char* qc_status_name(qc_status status);
/* Message of the last failing call on this thread; never NULL. */
QC_API const char* qc_last_error(void);

/* tol 1e-9, max_iter 5000, budget 8 */
QC_API void qc_options_init(qc_options* options);

QC_API qc_status qc_process_load(const char* path, qc_process** out);
QC_API qc_status qc_process_parse(const char* text, size_t length, qc_process** out);
QC_API qc_status qc_process_save(const qc_process* process, const char* path);
/* Serialized file; release with qc_string_free. */
QC_API qc_status qc_process_dump(const qc_process* process, char** out);
QC_API void qc_process_free(qc_process* process);
QC_API void qc_string_free(char* s);

QC_API int qc_process_is_classical(const qc_process* process);
QC_API size_t qc_process_node_count(const qc_process* process);
QC_API const char* qc_process_node_name(const qc_process* process, size_t i);
/* FNV-1a of the serialized file, 16 hex digits. */
QC_API const char* qc_process_digest(const qc_process* process);

QC_API size_t qc_exemplar_count(void);
QC_API const char* qc_exemplar_name(size_t i);
QC_API qc_status qc_exemplar(const char* name, qc_process** out);

/*
 * Analyses. Each returns a report on QC_OK; the report says whether the
 * checked property holds.
 */
QC_API qc_status qc_validate(const qc_process* p, const qc_options* o, qc_report** out);
QC_API qc_status qc_discover(const qc_process* p, const qc_options* o, qc_report** out);
QC_API qc_status qc_comb_check(const qc_process* p, const char* const* order, size_t n,
                               const qc_options* o, qc_report** out);
QC_API qc_status qc_comb_search(const qc_process* p, const qc_options* o, qc_report** out);
QC_API qc_status qc_separability(const qc_process* p, const qc_options* o, qc_report** out);
QC_API qc_status qc_markov(const qc_process* p, const qc_options* o, qc_report** out);
QC_API qc_status qc_classical_polytope(const qc_process* p, const qc_options* o,
                                       qc_report** out);
QC_API qc_status qc_classical_extend(const qc_process* p, const qc_options* o,
                                     qc_report** out);
QC_API qc_status qc_quantize(const qc_process* p, qc_process** out);

/* 1 holds, 0 fails, -1 inconclusive. */
QC_API int qc_report_verdict(const qc_report* r);
QC_API const char* qc_report_command(const qc_report* r);
/* Deterministic JSON body; runtime lives in its own field. */
QC_API const char* qc_report_json(const qc_report* r);
QC_API const char* qc_report_summary(const qc_report* r);
/* DOT text for discover, NULL otherwise. */
QC_API const char* qc_report_dot(const qc_report* r);
QC_API double qc_report_runtime_ms(const qc_report* r);
QC_API void qc_report_free(qc_report* r);

#ifdef __cplusplus
}
#endif

#endif /* QCAUSAL_QCAUSAL_H_ */

// Copyright 2026 The qsslab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QSSLAB_QSSLAB_H
#define QSSLAB_QSSLAB_H

/* C interface to the qsslab simulator. All strings returned through an
 * out-parameter are heap copies owned by the caller: release them with
 * qss_string_free. Handles are released with their matching *_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QSS_API __declspec(dllexport)
#else
#define QSS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qss_status {
  QSS_OK = 0,
  QSS_INVALID_CONFIG = 1,
  QSS_DETECTION_FAILURE = 2,
  QSS_INVARIANT_VIOLATION = 3,
  QSS_INVALID_ARGUMENT = 4,
  QSS_IO_ERROR = 5
} qss_status;

typedef enum qss_format { QSS_FORMAT_JSON_LINES = 0, QSS_FORMAT_CSV = 1, QSS_FORMAT_TEXT = 2 } qss_format;

typedef struct qss_scenario qss_scenario;
typedef struct qss_report qss_report;

typedef struct qss_summary {
  uint64_t trials;
  int has_attacker_accuracy;
  double attacker_accuracy;
  double ci_low;
  double ci_high;
  double first_detection_pass_rate;
  double recovery_accuracy;
  double max_trace_distance;
  double helstrom_bound;
  uint64_t seed;
  uint64_t check_measurements;
  uint64_t check_failures;
  uint64_t guessed_bits;
  uint64_t correct_guesses;
  double min_check_pass_probability;
  double max_recovery_deviation;
} qss_summary;

QSS_API const char *qss_version(void);

/* Message of the last failing call on this thread ("" if none). */
QSS_API const char *qss_last_error(void);

QSS_API qss_status qss_scenario_parse(const char *text, qss_scenario **out);
QSS_API qss_status qss_scenario_load(const char *path, qss_scenario **out);
QSS_API void qss_scenario_free(qss_scenario *scenario);
QSS_API qss_status qss_scenario_set_seed(qss_scenario *scenario, uint64_t seed);
QSS_API qss_status qss_scenario_set_trials(qss_scenario *scenario, uint64_t trials);
/* 0 selects the hardware thread count. Results do not depend on it. */
QSS_API qss_status qss_scenario_set_threads(qss_scenario *scenario, uint64_t threads);
QSS_API qss_status qss_scenario_serialize(const qss_scenario *scenario, char **out);
/* 1 when no attack is configured. */
QSS_API int qss_scenario_expects_honesty(const qss_scenario *scenario);

QSS_API qss_status qss_run(const qss_scenario *scenario, int keep_transcripts, qss_report **out);
QSS_API void qss_report_free(qss_report *report);
QSS_API qss_status qss_report_summary_get(const qss_report *report, qss_summary *out);
/* With echo_config set, the text format appends the scenario. */
QSS_API qss_status qss_report_format(const qss_report *report, qss_format format, int echo_config, char **out);
QSS_API size_t qss_report_transcript_count(const qss_report *report);
QSS_API qss_status qss_report_transcript(const qss_report *report, size_t index, char **out);
QSS_API int qss_report_detection_failed(const qss_report *report);

/* Exact sweep over the scenario's grid, as CSV. */
QSS_API qss_status qss_sweep(const qss_scenario *scenario, char **out);

/* Built-in fixture suite; one line per fixture. */
QSS_API qss_status qss_verify(char **out, size_t *failed_count);

QSS_API void qss_string_free(char *s);

/* "json-lines", "csv" or "text". */
QSS_API qss_status qss_format_parse(const char *name, qss_format *out);

#ifdef __cplusplus
}
#endif

#endif

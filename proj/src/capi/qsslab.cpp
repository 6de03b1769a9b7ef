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

#include "qsslab/qsslab.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "qss/analysis.hpp"
#include "qss/error.hpp"
#include "qss/scenario.hpp"
#include "qss/verify.hpp"

struct qss_scenario {
  qss::Scenario value;
};

struct qss_report {
  qss::Scenario scenario;
  qss::MonteCarloResult result;
};

namespace {

thread_local std::string g_last_error;

qss_status fail(qss_status status, const std::string &message) {
  g_last_error = message;
  return status;
}

// Maps the core's exception hierarchy onto status codes.
template <typename F>
qss_status guarded(F &&body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const qss::ConfigError &e) {
    return fail(QSS_INVALID_CONFIG, e.what());
  } catch (const qss::InvariantViolation &e) {
    return fail(QSS_INVARIANT_VIOLATION, e.what());
  } catch (const qss::InvalidArgument &e) {
    return fail(QSS_INVALID_ARGUMENT, e.what());
  } catch (const qss::DimensionError &e) {
    return fail(QSS_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc &) {
    return fail(QSS_INVARIANT_VIOLATION, "out of memory");
  } catch (const std::exception &e) {
    return fail(QSS_INVARIANT_VIOLATION, e.what());
  }
}

char *copy_string(const std::string &s) {
  char *out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qss::ReportFormat to_format(qss_format f) {
  switch (f) {
    case QSS_FORMAT_CSV:
      return qss::ReportFormat::Csv;
    case QSS_FORMAT_TEXT:
      return qss::ReportFormat::Text;
    case QSS_FORMAT_JSON_LINES:
      return qss::ReportFormat::JsonLines;
  }
  throw qss::InvalidArgument("unknown report format");
}

}  // namespace

extern "C" {

const char *qss_version(void) { return "1.0.0"; }

const char *qss_last_error(void) { return g_last_error.c_str(); }

qss_status qss_scenario_parse(const char *text, qss_scenario **out) {
  if (!text || !out) return fail(QSS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new qss_scenario{qss::Scenario::parse(text)};
    return QSS_OK;
  });
}

qss_status qss_scenario_load(const char *path, qss_scenario **out) {
  if (!path || !out) return fail(QSS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new qss_scenario{qss::Scenario::load(path)};
    return QSS_OK;
  });
}

void qss_scenario_free(qss_scenario *scenario) { delete scenario; }

qss_status qss_scenario_set_seed(qss_scenario *scenario, uint64_t seed) {
  if (!scenario) return fail(QSS_INVALID_ARGUMENT, "null scenario");
  scenario->value.protocol.seed = seed;
  return QSS_OK;
}

qss_status qss_scenario_set_trials(qss_scenario *scenario, uint64_t trials) {
  if (!scenario) return fail(QSS_INVALID_ARGUMENT, "null scenario");
  if (trials == 0) return fail(QSS_INVALID_ARGUMENT, "trials must be at least 1");
  scenario->value.trials = trials;
  return QSS_OK;
}

qss_status qss_scenario_set_threads(qss_scenario *scenario, uint64_t threads) {
  if (!scenario) return fail(QSS_INVALID_ARGUMENT, "null scenario");
  scenario->value.threads = threads;
  return QSS_OK;
}

qss_status qss_scenario_serialize(const qss_scenario *scenario, char **out) {
  if (!scenario || !out) return fail(QSS_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(scenario->value.serialize());
    return QSS_OK;
  });
}

int qss_scenario_expects_honesty(const qss_scenario *scenario) {
  return scenario && scenario->value.expects_honesty() ? 1 : 0;
}

qss_status qss_run(const qss_scenario *scenario, int keep_transcripts, qss_report **out) {
  if (!scenario || !out) return fail(QSS_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const qss::Scenario &s = scenario->value;
    qss::MonteCarloOptions options;
    options.trials = s.trials;
    options.threads = s.threads;
    options.keep_transcripts = keep_transcripts != 0;
    *out = new qss_report{s, qss::monte_carlo(s.protocol, s.attack, options)};
    return QSS_OK;
  });
}

void qss_report_free(qss_report *report) { delete report; }

qss_status qss_report_summary_get(const qss_report *report, qss_summary *out) {
  if (!report || !out) return fail(QSS_INVALID_ARGUMENT, "null argument");
  const qss::ScenarioReport &r = report->result.report;
  *out = qss_summary{};
  out->trials = r.trials;
  out->has_attacker_accuracy = r.attacker_accuracy.has_value();
  out->attacker_accuracy = r.attacker_accuracy.value_or(0.0);
  out->ci_low = r.attacker_ci ? r.attacker_ci->low : 0.0;
  out->ci_high = r.attacker_ci ? r.attacker_ci->high : 0.0;
  out->first_detection_pass_rate = r.first_detection_pass_rate;
  out->recovery_accuracy = r.recovery_accuracy;
  out->max_trace_distance = r.max_trace_distance;
  out->helstrom_bound = r.helstrom_bound;
  out->seed = r.seed;
  out->check_measurements = r.check_measurements;
  out->check_failures = r.check_failures;
  out->guessed_bits = r.guessed_bits;
  out->correct_guesses = r.correct_guesses;
  out->min_check_pass_probability = r.min_check_pass_probability;
  out->max_recovery_deviation = r.max_recovery_deviation;
  return QSS_OK;
}

qss_status qss_report_format(const qss_report *report, qss_format format, int echo_config, char **out) {
  if (!report || !out) return fail(QSS_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(
        qss::format_report(report->result.report, to_format(format), echo_config ? &report->scenario : nullptr));
    return QSS_OK;
  });
}

size_t qss_report_transcript_count(const qss_report *report) {
  return report ? report->result.transcripts.size() : 0;
}

qss_status qss_report_transcript(const qss_report *report, size_t index, char **out) {
  if (!report || !out) return fail(QSS_INVALID_ARGUMENT, "null argument");
  if (index >= report->result.transcripts.size()) return fail(QSS_INVALID_ARGUMENT, "transcript index out of range");
  return guarded([&] {
    *out = copy_string(report->result.transcripts[index].serialize());
    return QSS_OK;
  });
}

int qss_report_detection_failed(const qss_report *report) {
  return report && qss::detection_failed(report->result.report) ? 1 : 0;
}

qss_status qss_sweep(const qss_scenario *scenario, char **out) {
  if (!scenario || !out) return fail(QSS_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_string(qss::format_sweep_table(qss::sweep(scenario->value.sweep_grid())));
    return QSS_OK;
  });
}

qss_status qss_verify(char **out, size_t *failed_count) {
  if (!out) return fail(QSS_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto results = qss::run_fixtures();
    size_t failed = 0;
    for (const auto &r : results) failed += !r.pass;
    if (failed_count) *failed_count = failed;
    *out = copy_string(qss::format_fixtures(results));
    return QSS_OK;
  });
}

void qss_string_free(char *s) { delete[] s; }

qss_status qss_format_parse(const char *name, qss_format *out) {
  if (!name || !out) return fail(QSS_INVALID_ARGUMENT, "null argument");
  const auto f = qss::parse_report_format(name);
  if (!f) return fail(QSS_INVALID_ARGUMENT, std::string("unknown format '") + name + "'");
  switch (*f) {
    case qss::ReportFormat::JsonLines:
      *out = QSS_FORMAT_JSON_LINES;
      break;
    case qss::ReportFormat::Csv:
      *out = QSS_FORMAT_CSV;
      break;
    case qss::ReportFormat::Text:
      *out = QSS_FORMAT_TEXT;
      break;
  }
  return QSS_OK;
}

}  // extern "C"

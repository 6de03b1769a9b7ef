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

// qsslab command line: run, sweep and verify, on top of the C interface.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qsslab/qsslab.h"

namespace {

enum Exit { kOk = 0, kInvalidConfig = 1, kDetectionFailure = 2, kInvariantViolation = 3 };

int exit_for(qss_status status) {
  switch (status) {
    case QSS_OK:
      return kOk;
    case QSS_INVALID_CONFIG:
    case QSS_INVALID_ARGUMENT:
    case QSS_IO_ERROR:
      return kInvalidConfig;
    case QSS_DETECTION_FAILURE:
      return kDetectionFailure;
    case QSS_INVARIANT_VIOLATION:
      return kInvariantViolation;
  }
  return kInvariantViolation;
}

int report_error(qss_status status) {
  std::cerr << "qsslab: " << qss_last_error() << "\n";
  return exit_for(status);
}

// Takes ownership of a C string from the library.
std::string take(char *s) {
  std::string out(s ? s : "");
  qss_string_free(s);
  return out;
}

bool emit(const std::string &out_path, const std::string &text) {
  if (out_path.empty()) {
    std::cout << text;
    return static_cast<bool>(std::cout.flush());
  }
  std::ofstream f(out_path, std::ios::binary);
  f << text;
  return static_cast<bool>(f.flush());
}

struct ScenarioHandle {
  qss_scenario *ptr = nullptr;
  ~ScenarioHandle() { qss_scenario_free(ptr); }
};

struct ReportHandle {
  qss_report *ptr = nullptr;
  ~ReportHandle() { qss_report_free(ptr); }
};

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> threads;
  std::string out;
  std::string format = "json-lines";
  std::string transcripts;
};

int cmd_run(const RunArgs &a) {
  qss_format format;
  if (qss_status st = qss_format_parse(a.format.c_str(), &format)) return report_error(st);
  ScenarioHandle sc;
  if (qss_status st = qss_scenario_load(a.config.c_str(), &sc.ptr)) return report_error(st);
  if (a.seed) qss_scenario_set_seed(sc.ptr, *a.seed);
  if (a.trials) {
    if (qss_status st = qss_scenario_set_trials(sc.ptr, *a.trials)) return report_error(st);
  }
  if (a.threads) qss_scenario_set_threads(sc.ptr, *a.threads);

  ReportHandle rep;
  if (qss_status st = qss_run(sc.ptr, a.transcripts.empty() ? 0 : 1, &rep.ptr)) return report_error(st);

  char *text = nullptr;
  if (qss_status st = qss_report_format(rep.ptr, format, 1, &text)) return report_error(st);
  if (!emit(a.out, take(text))) {
    std::cerr << "qsslab: cannot write '" << a.out << "'\n";
    return kInvalidConfig;
  }

  if (!a.transcripts.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(a.transcripts, ec);
    const size_t n = qss_report_transcript_count(rep.ptr);
    for (size_t i = 0; i < n; ++i) {
      char *t = nullptr;
      if (qss_status st = qss_report_transcript(rep.ptr, i, &t)) return report_error(st);
      char name[32];
      std::snprintf(name, sizeof name, "trial_%06zu.tsv", i);
      if (!emit((std::filesystem::path(a.transcripts) / name).string(), take(t))) {
        std::cerr << "qsslab: cannot write transcripts to '" << a.transcripts << "'\n";
        return kInvalidConfig;
      }
    }
  }

  if (qss_scenario_expects_honesty(sc.ptr) && qss_report_detection_failed(rep.ptr)) {
    std::cerr << "qsslab: detection failed in an honest run\n";
    return kDetectionFailure;
  }
  return kOk;
}

int cmd_sweep(const std::string &config, const std::string &out, std::optional<std::uint64_t> seed) {
  ScenarioHandle sc;
  if (qss_status st = qss_scenario_load(config.c_str(), &sc.ptr)) return report_error(st);
  if (seed) qss_scenario_set_seed(sc.ptr, *seed);
  char *text = nullptr;
  if (qss_status st = qss_sweep(sc.ptr, &text)) return report_error(st);
  if (!emit(out, take(text))) {
    std::cerr << "qsslab: cannot write '" << out << "'\n";
    return kInvalidConfig;
  }
  return kOk;
}

int cmd_verify() {
  char *text = nullptr;
  size_t failed = 0;
  if (qss_status st = qss_verify(&text, &failed)) return report_error(st);
  std::cout << take(text);
  return failed ? kInvariantViolation : kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Few-qubit secret sharing and entangling-attack lab"};
  app.set_version_flag("--version", std::string(qss_version()));
  app.require_subcommand(1);

  RunArgs run;
  auto *run_cmd = app.add_subcommand("run", "Monte Carlo over seeded protocol runs");
  run_cmd->add_option("config", run.config, "Scenario file (JSON)")->required();
  run_cmd->add_option("--seed", run.seed, "Override protocol.seed");
  run_cmd->add_option("--trials", run.trials, "Override run.trials");
  run_cmd->add_option("--threads", run.threads, "Worker threads (0 = all cores)");
  run_cmd->add_option("--out", run.out, "Write the report here instead of stdout");
  run_cmd->add_option("--format", run.format, "json-lines, csv or text")->capture_default_str();
  run_cmd->add_option("--transcripts", run.transcripts, "Directory for per-trial transcripts");

  std::string sweep_config, sweep_out;
  std::optional<std::uint64_t> sweep_seed;
  auto *sweep_cmd = app.add_subcommand("sweep", "Exact trace-distance sweep over (theta', |alpha|^2, theta)");
  sweep_cmd->add_option("config", sweep_config, "Scenario file (JSON)")->required();
  sweep_cmd->add_option("--out", sweep_out, "Write the CSV here instead of stdout");
  sweep_cmd->add_option("--seed", sweep_seed, "Accepted for symmetry with run; the sweep is exact");

  auto *verify_cmd = app.add_subcommand("verify", "Run the built-in fixture suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kInvalidConfig;
  }

  if (*run_cmd) return cmd_run(run);
  if (*sweep_cmd) return cmd_sweep(sweep_config, sweep_out, sweep_seed);
  if (*verify_cmd) return cmd_verify();
  return kInvalidConfig;
}

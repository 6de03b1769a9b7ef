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

#include "qss/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "qss/error.hpp"

namespace qss {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Best-effort line lookup: first line mentioning "key".
int line_of_key(std::string_view text, const std::string &key) {
  const std::string needle = "\"" + key + "\"";
  const auto pos = text.find(needle);
  if (pos == std::string_view::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string &path, const std::string &message) const {
    const auto leaf = path.substr(path.rfind('.') + 1);
    throw ConfigError(path + ": " + message, path, line_of_key(text_, leaf));
  }

  void only_keys(const json &obj, const std::string &section, std::initializer_list<const char *> allowed) const {
    if (!obj.is_object()) fail(section, "expected an object");
    for (const auto &item : obj.items()) {
      const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char *k) { return item.key() == k; });
      if (!known) fail(section + "." + item.key(), "unknown key");
    }
  }

  std::uint64_t uint(const json &v, const std::string &path) const {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      fail(path, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  double real(const json &v, const std::string &path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "expected a finite number");
    return x;
  }

  std::string str(const json &v, const std::string &path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  Complex complex(const json &v, const std::string &path) const {
    if (!v.is_array() || v.size() != 2) fail(path, "expected a complex pair [re, im]");
    return {real(v[0], path), real(v[1], path)};
  }

  StateVector state(const json &v, const std::string &path) const {
    if (!v.is_array() || v.size() < 2) fail(path, "expected a list of at least two [re, im] amplitudes");
    const std::size_t n = v.size();
    if ((n & (n - 1)) != 0) fail(path, "amplitude count must be a power of two");
    std::vector<Complex> amps;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      amps.push_back(complex(v[i], path + "[" + std::to_string(i) + "]"));
      norm2 += std::norm(amps.back());
    }
    if (norm2 == 0.0) fail(path, "degenerate (zero) state");
    if (std::fabs(std::sqrt(norm2) - 1.0) > 1e-6) fail(path, "state is not normalized");
    std::size_t qubits = 0;
    while ((std::size_t{1} << qubits) < n) ++qubits;
    return StateVector::normalized(qubits, std::move(amps));
  }

  std::vector<double> reals(const json &v, const std::string &path) const {
    if (!v.is_array()) fail(path, "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(real(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

 private:
  std::string_view text_;
};

ordered_json complex_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json state_json(const StateVector &s) {
  ordered_json out = ordered_json::array();
  for (const auto &z : s.amplitudes()) out.push_back(complex_json(z));
  return out;
}

ordered_json angles_json(const std::vector<RotationAngle> &angles) {
  ordered_json out = ordered_json::array();
  for (const auto &a : angles) out.push_back(a.radians());
  return out;
}

std::vector<RotationAngle> to_angles(const std::vector<double> &v) {
  std::vector<RotationAngle> out;
  for (double x : v) out.emplace_back(x);
  return out;
}

EntanglerSpec default_template() { return EntanglerSpec{}; }

void parse_protocol(const Reader &rd, const json &p, ProtocolConfig &cfg) {
  rd.only_keys(p, "protocol",
               {"agents", "message_bits", "message_length", "check_fraction_first", "second_checks",
                "angle_distribution", "seed", "adversary_position", "withheld_agents"});
  if (!p.contains("agents")) rd.fail("protocol.agents", "missing required key");
  cfg.num_agents = rd.uint(p["agents"], "protocol.agents");

  if (p.contains("message_bits") && p.contains("message_length")) {
    rd.fail("protocol.message_bits", "give either message_bits or message_length, not both");
  }
  if (p.contains("message_bits")) {
    const auto &m = p["message_bits"];
    Bits bits;
    if (m.is_string()) {
      for (char c : m.get<std::string>()) {
        if (c != '0' && c != '1') rd.fail("protocol.message_bits", "bit string may only contain 0 and 1");
        bits.push_back(c - '0');
      }
    } else if (m.is_array()) {
      for (const auto &b : m) {
        const auto v = rd.uint(b, "protocol.message_bits");
        if (v > 1) rd.fail("protocol.message_bits", "bits must be 0 or 1");
        bits.push_back(static_cast<int>(v));
      }
    } else {
      rd.fail("protocol.message_bits", "expected a bit string or a list of bits");
    }
    cfg.message = std::move(bits);
  }
  if (p.contains("message_length")) cfg.message_length = rd.uint(p["message_length"], "protocol.message_length");
  if (p.contains("check_fraction_first")) {
    cfg.check_fraction_first = rd.real(p["check_fraction_first"], "protocol.check_fraction_first");
  }
  if (p.contains("second_checks")) {
    cfg.num_second_detection_checks = rd.uint(p["second_checks"], "protocol.second_checks");
  }
  if (p.contains("angle_distribution")) {
    const auto d = rd.str(p["angle_distribution"], "protocol.angle_distribution");
    if (d == "continuous") {
      cfg.angle_distribution = AngleDistribution::Continuous;
    } else if (d == "discrete") {
      cfg.angle_distribution = AngleDistribution::Discrete;
    } else {
      rd.fail("protocol.angle_distribution", "expected \"continuous\" or \"discrete\"");
    }
  }
  if (p.contains("seed")) cfg.seed = rd.uint(p["seed"], "protocol.seed");
  if (p.contains("adversary_position")) {
    cfg.adversary_position = rd.uint(p["adversary_position"], "protocol.adversary_position");
  }
  if (p.contains("withheld_agents")) {
    const auto &w = p["withheld_agents"];
    if (!w.is_array()) rd.fail("protocol.withheld_agents", "expected a list of agent indices");
    for (const auto &a : w) cfg.withheld_agents.push_back(rd.uint(a, "protocol.withheld_agents"));
  }
  try {
    cfg.validate();
  } catch (const InvalidArgument &e) {
    rd.fail("protocol", e.what());
  }
}

std::optional<AttackConfig> parse_attack(const Reader &rd, const json &a) {
  rd.only_keys(a, "attack",
               {"kind", "ancilla_state", "ancilla_dim", "epsilon", "epsilon_perp", "prepared", "alpha", "beta",
                "theta_prime", "announcement", "guess_rule"});
  const std::string kind = a.contains("kind") ? rd.str(a["kind"], "attack.kind") : "none";
  if (kind == "none") {
    for (const auto &item : a.items()) {
      if (item.key() != "kind") rd.fail("attack." + item.key(), "not allowed when attack.kind is none");
    }
    return std::nullopt;
  }
  AttackConfig cfg;
  cfg.kind = kind;
  const auto forbid = [&](std::initializer_list<const char *> keys) {
    for (const char *k : keys)
      if (a.contains(k)) rd.fail(std::string("attack.") + k, "not allowed for attack.kind " + kind);
  };
  try {
    if (kind == "qgwz") {
      forbid({"ancilla_dim", "epsilon", "epsilon_perp", "prepared", "alpha", "beta", "theta_prime"});
      if (!a.contains("ancilla_state")) rd.fail("attack.ancilla_state", "missing required key");
      const StateVector s = rd.state(a["ancilla_state"], "attack.ancilla_state");
      if (s.num_qubits() != 2) rd.fail("attack.ancilla_state", "expected four amplitudes (two qubits)");
      cfg.spec = qgwz_spec(s);
    } else if (kind == "general") {
      forbid({"ancilla_state"});
      for (const char *k : {"epsilon", "epsilon_perp", "alpha", "beta", "theta_prime"}) {
        if (!a.contains(k)) rd.fail(std::string("attack.") + k, "missing required key");
      }
      EntanglerSpec spec;
      spec.epsilon = rd.state(a["epsilon"], "attack.epsilon");
      spec.epsilon_perp = rd.state(a["epsilon_perp"], "attack.epsilon_perp");
      spec.ancilla_dim = a.contains("ancilla_dim") ? rd.uint(a["ancilla_dim"], "attack.ancilla_dim") : spec.epsilon.dim();
      if (a.contains("prepared")) spec.prepared = rd.state(a["prepared"], "attack.prepared");
      spec.alpha = rd.complex(a["alpha"], "attack.alpha");
      spec.beta = rd.complex(a["beta"], "attack.beta");
      spec.theta_prime = RotationAngle(rd.real(a["theta_prime"], "attack.theta_prime"));
      spec.validate();
      cfg.spec = std::move(spec);
    } else {
      rd.fail("attack.kind", "expected \"none\", \"qgwz\" or \"general\"");
    }
  } catch (const InvalidArgument &e) {
    rd.fail("attack", e.what());
  } catch (const InvariantViolation &e) {
    rd.fail("attack", e.what());
  }

  if (a.contains("announcement")) {
    const auto m = rd.str(a["announcement"], "attack.announcement");
    if (m == "adaptive") {
      cfg.mode = AnnouncementMode::Adaptive;
    } else if (m == "naive") {
      cfg.mode = AnnouncementMode::Naive;
    } else {
      rd.fail("attack.announcement", "expected \"adaptive\" or \"naive\"");
    }
  }
  if (a.contains("guess_rule")) {
    const auto &g = a["guess_rule"];
    if (g.is_string()) {
      const auto rule = GuessRule::named(g.get<std::string>());
      if (!rule) rd.fail("attack.guess_rule", "unknown rule name");
      cfg.rule = *rule;
    } else {
      rd.only_keys(g, "attack.guess_rule", {"epsilon", "epsilon_perp"});
      for (const char *k : {"epsilon", "epsilon_perp"}) {
        if (!g.contains(k)) rd.fail(std::string("attack.guess_rule.") + k, "missing required key");
        if (rd.uint(g[k], std::string("attack.guess_rule.") + k) > 1) {
          rd.fail(std::string("attack.guess_rule.") + k, "bit must be 0 or 1");
        }
      }
      cfg.rule = GuessRule{g["epsilon"].get<int>(), g["epsilon_perp"].get<int>()};
    }
  }
  return cfg;
}

void parse_run(const Reader &rd, const json &r, Scenario &s) {
  rd.only_keys(r, "run", {"trials", "threads", "expect_honest", "sweep"});
  if (r.contains("trials")) {
    s.trials = rd.uint(r["trials"], "run.trials");
    if (s.trials == 0) rd.fail("run.trials", "must be at least 1");
  }
  if (r.contains("threads")) s.threads = rd.uint(r["threads"], "run.threads");
  if (r.contains("expect_honest")) {
    if (!r["expect_honest"].is_boolean()) rd.fail("run.expect_honest", "expected true or false");
    s.expect_honest = r["expect_honest"].get<bool>();
  }
  if (r.contains("sweep")) {
    const auto &g = r["sweep"];
    rd.only_keys(g, "run.sweep", {"theta_prime", "alpha_sq", "theta"});
    SweepGrid grid = SweepGrid::default_grid();
    if (g.contains("theta_prime")) grid.theta_prime = to_angles(rd.reals(g["theta_prime"], "run.sweep.theta_prime"));
    if (g.contains("alpha_sq")) grid.alpha_sq = rd.reals(g["alpha_sq"], "run.sweep.alpha_sq");
    if (g.contains("theta")) grid.theta = to_angles(rd.reals(g["theta"], "run.sweep.theta"));
    try {
      grid.validate();
    } catch (const InvalidArgument &e) {
      rd.fail("run.sweep", e.what());
    }
    s.sweep = std::move(grid);
  }
}

std::string fmt(const char *spec, double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

}  // namespace

Scenario Scenario::parse(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw ConfigError("syntax error at line " + std::to_string(line) + ": " + e.what(), "", line);
  }
  const Reader rd(text);
  rd.only_keys(doc, "config", {"protocol", "attack", "run"});
  if (!doc.contains("protocol")) rd.fail("protocol", "missing required section");

  Scenario s;
  parse_protocol(rd, doc["protocol"], s.protocol);
  if (doc.contains("attack")) s.attack = parse_attack(rd, doc["attack"]);
  if (doc.contains("run")) parse_run(rd, doc["run"], s);
  return s;
}

Scenario Scenario::load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'", "", 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string Scenario::serialize() const {
  ordered_json doc;
  ordered_json p;
  p["agents"] = protocol.num_agents;
  if (protocol.message) {
    std::string bits;
    for (int b : *protocol.message) bits += static_cast<char>('0' + b);
    p["message_bits"] = bits;
  } else {
    p["message_length"] = protocol.message_length;
  }
  p["check_fraction_first"] = protocol.check_fraction_first;
  p["second_checks"] = protocol.num_second_detection_checks;
  p["angle_distribution"] =
      protocol.angle_distribution == AngleDistribution::Continuous ? "continuous" : "discrete";
  p["seed"] = protocol.seed;
  if (protocol.adversary_position) p["adversary_position"] = *protocol.adversary_position;
  p["withheld_agents"] = protocol.withheld_agents;
  doc["protocol"] = p;

  ordered_json a;
  if (!attack) {
    a["kind"] = "none";
  } else {
    a["kind"] = attack->kind;
    const EntanglerSpec &spec = attack->spec;
    if (attack->kind == "qgwz") {
      a["ancilla_state"] = state_json(spec.input_state());
    } else {
      a["ancilla_dim"] = spec.ancilla_dim;
      a["epsilon"] = state_json(spec.epsilon);
      a["epsilon_perp"] = state_json(spec.epsilon_perp);
      if (spec.prepared) a["prepared"] = state_json(*spec.prepared);
      a["alpha"] = complex_json(spec.alpha);
      a["beta"] = complex_json(spec.beta);
      a["theta_prime"] = spec.theta_prime.radians();
    }
    a["announcement"] = attack->mode == AnnouncementMode::Adaptive ? "adaptive" : "naive";
    const std::string rule = attack->rule.name();
    if (rule == "custom") {
      a["guess_rule"] = {{"epsilon", attack->rule.on_epsilon}, {"epsilon_perp", attack->rule.on_epsilon_perp}};
    } else {
      a["guess_rule"] = rule;
    }
  }
  doc["attack"] = a;

  ordered_json r;
  r["trials"] = trials;
  r["threads"] = threads;
  if (expect_honest) r["expect_honest"] = *expect_honest;
  if (sweep) {
    ordered_json g;
    g["theta_prime"] = angles_json(sweep->theta_prime);
    g["alpha_sq"] = sweep->alpha_sq;
    g["theta"] = angles_json(sweep->theta);
    r["sweep"] = g;
  }
  doc["run"] = r;
  return doc.dump(2) + "\n";
}

SweepGrid Scenario::sweep_grid() const {
  SweepGrid g = sweep ? *sweep : SweepGrid::default_grid();
  g.spec_template = attack ? attack->spec : default_template();
  return g;
}

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "json-lines" || name == "jsonl") return ReportFormat::JsonLines;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "text") return ReportFormat::Text;
  return std::nullopt;
}

std::string format_report(const ScenarioReport &r, ReportFormat format, const Scenario *echo) {
  const bool has_ci = r.attacker_ci.has_value();
  const Interval ci = r.attacker_ci.value_or(Interval{});
  const auto opt = [](bool present, double x, const char *missing) {
    return present ? format_real(x) : std::string(missing);
  };
  const bool has_acc = r.attacker_accuracy.has_value();
  const double acc = r.attacker_accuracy.value_or(0.0);

  std::ostringstream out;
  switch (format) {
    case ReportFormat::JsonLines:
      out << "{\"trials\":" << r.trials << ",\"attacker_accuracy\":" << opt(has_acc, acc, "null")
          << ",\"ci_low\":" << opt(has_ci, ci.low, "null") << ",\"ci_high\":" << opt(has_ci, ci.high, "null")
          << ",\"first_detection_pass_rate\":" << format_real(r.first_detection_pass_rate)
          << ",\"recovery_accuracy\":" << format_real(r.recovery_accuracy)
          << ",\"max_trace_distance\":" << format_real(r.max_trace_distance)
          << ",\"helstrom_bound\":" << format_real(r.helstrom_bound) << ",\"seed\":" << r.seed << "}\n";
      break;
    case ReportFormat::Csv:
      for (std::size_t i = 0; i < std::size(kReportFields); ++i) out << (i ? "," : "") << kReportFields[i];
      out << "\n"
          << r.trials << ',' << opt(has_acc, acc, "") << ',' << opt(has_ci, ci.low, "") << ',' << opt(has_ci, ci.high, "") << ','
          << format_real(r.first_detection_pass_rate) << ',' << format_real(r.recovery_accuracy) << ','
          << format_real(r.max_trace_distance) << ',' << format_real(r.helstrom_bound) << ',' << r.seed << "\n";
      break;
    case ReportFormat::Text: {
      const auto g6 = [](double x) { return fmt("%.6g", x); };
      out << "scenario report\n";
      out << "  trials                      " << r.trials << "\n";
      out << "  seed                        " << r.seed << "\n";
      if (has_acc) {
        out << "  attacker accuracy           " << g6(acc) << "  (95% CI " << g6(ci.low) << " .. " << g6(ci.high) << ", "
            << r.guessed_bits << " bits)\n";
      } else {
        out << "  attacker accuracy           n/a (no attack)\n";
      }
      out << "  first detection pass rate   " << g6(r.first_detection_pass_rate) << "  (" << r.first_detection_passes
          << "/" << r.trials << ")\n";
      out << "  check photon failures       " << r.check_failures << "/" << r.check_measurements << "\n";
      out << "  second detection passes     " << r.second_detection_passes << "/" << r.decoded_trials << "\n";
      out << "  recovery accuracy           " << g6(r.recovery_accuracy) << "  (" << r.correct_decodes << "/"
          << r.decoded_bits << " bits)\n";
      out << "  max trace distance          " << g6(r.max_trace_distance) << "\n";
      out << "  helstrom bound              " << g6(r.helstrom_bound) << "\n";
      if (echo) out << "config:\n" << echo->serialize();
      break;
    }
  }
  return out.str();
}

std::string format_sweep_table(const std::vector<SweepRow> &rows) {
  std::ostringstream out;
  out << "theta_prime,alpha_sq,theta,trace_distance,helstrom\n";
  for (const auto &row : rows) {
    out << format_real(row.theta_prime.radians()) << ',' << format_real(row.alpha_sq) << ','
        << format_real(row.theta.radians()) << ',' << format_real(row.trace_distance) << ','
        << format_real(row.helstrom) << '\n';
  }
  return out.str();
}

bool detection_failed(const ScenarioReport &r) {
  return r.first_detection_passes < r.trials || r.second_detection_passes < r.decoded_trials;
}

}  // namespace qss

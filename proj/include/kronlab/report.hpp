#pragma once

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace kronlab {

enum class Status { kPass, kFail, kNotDeskFeasible };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::kPass: return "pass";
    case Status::kFail: return "fail";
    case Status::kNotDeskFeasible: return "not-desk-feasible";
  }
  return "?";
}

struct ReportStep {
  std::string description;
  std::vector<std::pair<std::string, std::string>> values;  // exact, as text
  Status verdict = Status::kPass;
  double wall_ms = 0.0;

  ReportStep& set(std::string key, std::string value) {
    values.emplace_back(std::move(key), std::move(value));
    return *this;
  }
};

/// Structured outcome of a certificate check. status is pass iff every step
/// passed; any failing step makes it fail; otherwise it is not-desk-feasible.
struct VerificationReport {
  std::string claim;
  Status status = Status::kPass;
  std::vector<ReportStep> steps;

  void finalize() {
    bool failed = false, infeasible = false;
    for (const auto& s : steps) {
      failed |= s.verdict == Status::kFail;
      infeasible |= s.verdict == Status::kNotDeskFeasible;
    }
    status = failed ? Status::kFail : infeasible ? Status::kNotDeskFeasible : Status::kPass;
  }

  const ReportStep* find_step(std::string_view prefix) const {
    for (const auto& s : steps)
      if (s.description.starts_with(prefix)) return &s;
    return nullptr;
  }
};

/// Times a step body; the body fills in values and verdict.
template <class Body>
ReportStep timed_step(std::string description, Body&& body) {
  ReportStep step;
  step.description = std::move(description);
  auto start = std::chrono::steady_clock::now();
  body(step);
  step.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return step;
}

inline std::string format_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

/// Key/value tree; numerics are strings, wall-clock data sits under "timing".
inline nlohmann::ordered_json to_json(const VerificationReport& report) {
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const auto& s : report.steps) {
    nlohmann::ordered_json values = nlohmann::ordered_json::object();
    for (const auto& [k, v] : s.values) values[k] = v;
    steps.push_back({{"description", s.description},
                     {"values", values},
                     {"verdict", status_name(s.verdict)},
                     {"timing", {{"wall_ms", format_ms(s.wall_ms)}}}});
  }
  return {{"claim", report.claim}, {"status", status_name(report.status)}, {"steps", steps}};
}

inline std::string render_plain(const VerificationReport& report) {
  std::ostringstream out;
  out << report.claim << ": " << status_name(report.status) << '\n';
  int i = 1;
  for (const auto& s : report.steps) {
    out << "  [" << status_name(s.verdict) << "] " << i++ << ". " << s.description << '\n';
    for (const auto& [k, v] : s.values) out << "        " << k << " = " << v << '\n';
  }
  return out.str();
}

}  // namespace kronlab

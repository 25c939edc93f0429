#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fqt/engine.hpp"
#include "fqt/theta.hpp"

namespace fqt {

using json = nlohmann::ordered_json;

constexpr int kReportSchemaVersion = 1;

struct Assertion {
  std::string name;
  json predicted, computed;
  bool pass = false;
  bool binding = true;
};

struct CaseReport {
  std::string case_name;
  int k = 1, q = 0;
  bool binding = true;  // strictness of this (case, q) cell
  std::vector<Assertion> assertions;
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage, in run order
  std::vector<CacheEvent> cache;
  std::vector<std::string> notes;

  void check(const std::string& name, const json& predicted, const json& computed);
  void check(const std::string& name, const json& predicted, const json& computed, bool pass);
  bool binding_pass() const;
  int failures(bool binding_only) const;
};

json to_json(const CaseReport& r, bool with_timings = true);
json to_json(const std::vector<CaseReport>& rs, bool with_timings = true);
std::string to_text(const CaseReport& r);
std::string to_csv(const std::vector<CaseReport>& rs);

json to_json(const MultTable& t);
std::string to_csv(const MultTable& t);
std::string to_text(const MultTable& t);

}  // namespace fqt

#include "fqt/report.hpp"

#include <sstream>

namespace fqt {

void CaseReport::check(const std::string& name, const json& predicted, const json& computed) {
  check(name, predicted, computed, predicted == computed);
}

void CaseReport::check(const std::string& name, const json& predicted, const json& computed, bool pass) {
  assertions.push_back({name, predicted, computed, pass, binding});
}

int CaseReport::failures(bool binding_only) const {
  int n = 0;
  for (const auto& a : assertions)
    if (!a.pass && (a.binding || !binding_only)) ++n;
  return n;
}

bool CaseReport::binding_pass() const { return failures(true) == 0; }

namespace {

json assertion_json(const Assertion& a) {
  json o;
  o["name"] = a.name;
  o["predicted"] = a.predicted;
  o["computed"] = a.computed;
  o["pass"] = a.pass;
  o["binding"] = a.binding;
  return o;
}

json timings_json(const CaseReport& r) {
  json t = json::object();
  for (const auto& [stage, s] : r.timings) t[stage] = s;
  return t;
}

std::string key_of(const CaseReport& r) {
  return r.case_name + "/k" + std::to_string(r.k) + "/q" + std::to_string(r.q);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + "\"";
}

}  // namespace

json to_json(const CaseReport& r, bool with_timings) {
  json o;
  o["schema_version"] = kReportSchemaVersion;
  o["case"] = r.case_name;
  o["k"] = r.k;
  o["q"] = r.q;
  o["strictness"] = r.binding ? "binding" : "informative";
  json as = json::array();
  for (const auto& a : r.assertions) as.push_back(assertion_json(a));
  o["assertions"] = as;
  o["passed"] = static_cast<int>(r.assertions.size()) - r.failures(false);
  o["failed"] = r.failures(false);
  o["binding_pass"] = r.binding_pass();
  json notes = json::array();
  for (const auto& n : r.notes) notes.push_back(n);
  o["notes"] = notes;
  json cache = json::array();
  int hits = 0;
  for (const auto& e : r.cache) {
    cache.push_back({{"key", e.key}, {"hit", e.hit}});
    hits += e.hit;
  }
  o["cache_hits"] = hits;
  o["cache"] = cache;
  if (with_timings) o["timings"] = timings_json(r);
  return o;
}

json to_json(const std::vector<CaseReport>& rs, bool with_timings) {
  json o;
  o["schema_version"] = kReportSchemaVersion;
  json reps = json::array();
  bool ok = true;
  for (const auto& r : rs) {
    reps.push_back(to_json(r, false));
    ok = ok && r.binding_pass();
  }
  o["reports"] = reps;
  o["binding_pass"] = ok;
  if (with_timings) {
    json t = json::object();
    for (const auto& r : rs) t[key_of(r)] = timings_json(r);
    o["timings"] = t;
  }
  return o;
}

std::string to_text(const CaseReport& r) {
  std::ostringstream s;
  s << "== " << key_of(r) << " (" << (r.binding ? "binding" : "informative") << ")\n";
  for (const auto& a : r.assertions) {
    s << (a.pass ? "PASS " : (a.binding ? "FAIL " : "warn ")) << a.name;
    if (!a.pass) s << "  predicted " << a.predicted.dump() << " computed " << a.computed.dump();
    s << "\n";
  }
  for (const auto& n : r.notes) s << "note: " << n << "\n";
  s << (r.binding_pass() ? "case passes" : "case FAILS") << ": " << r.assertions.size() - r.failures(false) << "/"
    << r.assertions.size() << " assertions hold\n";
  return s.str();
}

std::string to_csv(const std::vector<CaseReport>& rs) {
  std::ostringstream s;
  s << "case,k,q,name,predicted,computed,pass,binding\n";
  for (const auto& r : rs)
    for (const auto& a : r.assertions)
      s << r.case_name << ',' << r.k << ',' << r.q << ',' << csv_field(a.name) << ',' << csv_field(a.predicted.dump())
        << ',' << csv_field(a.computed.dump()) << ',' << (a.pass ? 1 : 0) << ',' << (a.binding ? 1 : 0) << '\n';
  return s.str();
}

json to_json(const MultTable& t) {
  json o;
  o["schema_version"] = kReportSchemaVersion;
  o["pair"] = t.pair;
  o["q"] = t.q;
  o["rows"] = t.rows;
  o["cols"] = t.cols;
  o["m"] = t.m;
  return o;
}

std::string to_csv(const MultTable& t) {
  std::ostringstream s;
  s << csv_field(t.pair + " q=" + std::to_string(t.q));
  for (const auto& c : t.cols) s << ',' << csv_field(c);
  s << '\n';
  for (size_t i = 0; i < t.rows.size(); ++i) {
    s << csv_field(t.rows[i]);
    for (long long v : t.m[i]) s << ',' << v;
    s << '\n';
  }
  return s.str();
}

std::string to_text(const MultTable& t) {
  std::ostringstream s;
  s << t.pair << " over F_" << t.q << "\n";
  size_t w = 4;
  for (const auto& r : t.rows) w = std::max(w, r.size());
  s << std::string(w, ' ');
  for (const auto& c : t.cols) s << "  " << c;
  s << '\n';
  for (size_t i = 0; i < t.rows.size(); ++i) {
    s << t.rows[i] << std::string(w - t.rows[i].size(), ' ');
    for (size_t j = 0; j < t.cols.size(); ++j) {
      std::string v = std::to_string(t.m[i][j]);
      s << "  " << std::string(t.cols[j].size() > v.size() ? t.cols[j].size() - v.size() : 0, ' ') << v;
    }
    s << '\n';
  }
  return s.str();
}

}  // namespace fqt

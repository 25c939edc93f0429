// fqtheta: verification driver, multiplicity tables, cache maintenance.
// Exit codes: 0 binding pass, 1 binding failure, 2 configuration error, 3 resource refusal.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "fqt/descent.hpp"
#include "fqt/transfer.hpp"

namespace {

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kRefused = 3 };

struct Config {
  std::string case_name = "all";
  int k = 1;
  std::vector<int> qs{3, 5};
  std::string cache_dir;
  int threads = 1;
  double order_bound = 2e7;
  long long carrier_bound = 4096;
  std::string format = "text";
  bool strict = false;
  std::string out;
  std::string pair;
  std::string cache_action;
};

void emit(const Config& c, const std::string& body) {
  if (c.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw fqt::ConfigError("cannot write " + c.out);
  f << body;
}

fqt::Engine make_engine(const Config& c) {
  fqt::RealizeOptions opt;
  opt.order_bound = c.order_bound;
  opt.cache_dir = c.cache_dir;
  return fqt::Engine(opt, c.carrier_bound, c.threads);
}

void check_qs(const Config& c) {
  for (int q : c.qs) {
    if (q != 3 && q != 5) {
      // any odd prime power is accepted by the field code; desk scale is q in {3, 5}
      fqt::make_field(q);
    }
  }
}

int cmd_verify(const Config& c) {
  check_qs(c);
  std::vector<fqt::Case> cases;
  if (c.case_name == "all")
    cases = {fqt::Case::BOdd, fqt::Case::BEven, fqt::Case::FJ};
  else
    cases = {fqt::parse_case(c.case_name)};
  fqt::Engine E = make_engine(c);
  std::vector<fqt::CaseReport> reports;
  for (int q : c.qs) {
    for (fqt::Case cs : cases) reports.push_back(fqt::verify_descent_case(E, cs, c.k, q, c.strict));
    if (c.case_name == "all") reports.push_back(fqt::verify_identities(E, q));
    E.release();
  }
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.binding_pass();
  if (c.format == "json") {
    emit(c, fqt::to_json(reports).dump(2) + "\n");
  } else if (c.format == "csv") {
    emit(c, fqt::to_csv(reports));
  } else {
    std::string s;
    for (const auto& r : reports) s += fqt::to_text(r) + "\n";
    s += ok ? "PASS: all binding assertions hold\n" : "FAIL: binding assertions failed\n";
    emit(c, s);
  }
  return ok ? kPass : kFail;
}

int cmd_table(const Config& c) {
  check_qs(c);
  fqt::Engine E = make_engine(c);
  fqt::json all = fqt::json::array();
  std::string text;
  for (int q : c.qs) {
    fqt::MultTable t = fqt::pair_table(E, fqt::table_spec(E, c.pair, q));
    all.push_back(fqt::to_json(t));
    text += c.format == "csv" ? fqt::to_csv(t) : fqt::to_text(t);
    E.release();
  }
  emit(c, c.format == "json" ? (c.qs.size() == 1 ? all[0] : all).dump(2) + "\n" : text);
  return kPass;
}

int cmd_cache(const Config& c) {
  if (c.cache_dir.empty()) throw fqt::ConfigError("no cache directory: pass --cache-dir or set FQT_CACHE_DIR");
  if (c.cache_action == "clear") {
    int n = fqt::clear_cache(c.cache_dir);
    emit(c, "removed " + std::to_string(n) + " cache files\n");
    return kPass;
  }
  auto entries = fqt::scan_cache(c.cache_dir);
  if (c.cache_action == "list") {
    if (c.format == "json") {
      fqt::json a = fqt::json::array();
      for (const auto& e : entries)
        a.push_back({{"file", e.file}, {"kind", e.kind}, {"version", e.version}, {"bytes", e.bytes}, {"stale", e.stale}});
      emit(c, a.dump(2) + "\n");
    } else {
      std::string s;
      for (const auto& e : entries)
        s += e.file + "  " + e.kind + "  v" + std::to_string(e.version) + "  " + std::to_string(e.bytes) + " bytes" +
             (e.stale ? "  STALE" : "") + "\n";
      emit(c, s);
    }
    return kPass;
  }
  // stat
  int groups = 0, pairs = 0, other = 0, stale = 0;
  unsigned long long bytes = 0;
  for (const auto& e : entries) {
    (e.kind == "group" ? groups : e.kind == "pair" ? pairs : other)++;
    stale += e.stale;
    bytes += e.bytes;
  }
  if (c.format == "json") {
    fqt::json o{{"dir", c.cache_dir}, {"groups", groups}, {"pairs", pairs}, {"other", other},
                {"stale", stale},     {"bytes", bytes}};
    emit(c, o.dump(2) + "\n");
  } else {
    emit(c, c.cache_dir + ": " + std::to_string(groups) + " groups, " + std::to_string(pairs) + " pair tables, " +
                std::to_string(other) + " other, " + std::to_string(stale) + " stale, " + std::to_string(bytes) +
                " bytes\n");
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  Config c;
  CLI::App app{"finite-field theta correspondence and descent checks"};
  app.require_subcommand(1);
  app.add_option("--cache-dir", c.cache_dir, "group and pair-table cache")->envname("FQT_CACHE_DIR");
  app.add_option("--threads", c.threads)->check(CLI::PositiveNumber);
  app.add_option("--order-bound", c.order_bound, "refuse groups larger than this")->check(CLI::PositiveNumber);
  app.add_option("--carrier-bound", c.carrier_bound, "largest explicit Weil carrier")->check(CLI::PositiveNumber);
  app.add_option("--format", c.format)->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--q", c.qs, "field sizes, comma separated")->delimiter(',');
  app.add_option("--out", c.out, "write the report here instead of stdout");

  auto* verify = app.add_subcommand("verify", "run the descent cases and identity suites");
  verify->add_option("--case", c.case_name)->check(CLI::IsMember({"b-odd", "b-even", "fj", "all"}));
  verify->add_option("--k", c.k)->check(CLI::PositiveNumber);
  verify->add_flag("--strict", c.strict, "treat informative cells as binding");

  auto* table = app.add_subcommand("table", "multiplicity table of a small dual pair");
  table->add_option("--pair", c.pair)->required()->check(CLI::IsMember({"sp4:o2minus", "sl2:o1plus"}));

  auto* cache = app.add_subcommand("cache", "inspect or clear the disk cache");
  cache->add_option("action", c.cache_action)->required()->check(CLI::IsMember({"list", "clear", "stat"}));

  for (auto* s : {verify, table, cache}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? kPass : kConfig;
  }

  try {
    if (*verify) return cmd_verify(c);
    if (*table) return cmd_table(c);
    return cmd_cache(c);
  } catch (const fqt::ResourceRefusal& e) {
    std::cerr << "refused, beyond desk scale: " << e.what() << "\n";
    return kRefused;
  } catch (const fqt::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const fqt::WeilGateFailure& e) {
    std::cerr << e.what() << "\n";
    return kFail;
  }
}

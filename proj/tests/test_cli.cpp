#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  double seconds = 0;
};

Run run(const std::string& args) {
  Run r;
  auto t0 = std::chrono::steady_clock::now();
  FILE* p = popen((std::string(FQT_CLI) + " " + args + " 2>/dev/null").c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

struct TempDir {
  fs::path p;
  explicit TempDir(const std::string& tag) {
    p = fs::temp_directory_path() / ("fqt-cli-" + tag + "-" + std::to_string(getpid()));
    fs::remove_all(p);
  }
  ~TempDir() { fs::remove_all(p); }
  std::string str() const { return p.string(); }
};

nlohmann::json without_timings(const std::string& s) {
  auto j = nlohmann::json::parse(s);
  j.erase("timings");
  return j;
}

}  // namespace

TEST_CASE("k = 2 is refused quickly with exit code 3") {
  for (const char* c : {"b-odd", "b-even", "fj"}) {
    auto r = run(std::string("verify --case ") + c + " --k 2 --q 3");
    CAPTURE(c);
    CHECK(r.code == 3);
    CHECK(r.seconds < 1.0);
  }
}

TEST_CASE("configuration errors exit 2") {
  CHECK(run("verify --case bessel").code == 2);
  CHECK(run("verify --k 0").code == 2);
  CHECK(run("verify --q 4").code == 2);
  CHECK(run("verify --format xml").code == 2);
  CHECK(run("table --pair sp6:o3 --q 3").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("cache list").code == 2);  // no directory given
  CHECK(run("--help").code == 0);
}

TEST_CASE("verify passes at q=3 and the JSON report is deterministic") {
  TempDir a("a"), b("b");
  auto r1 = run("verify --case all --q 3 --format json --cache-dir " + a.str());
  auto r2 = run("verify --case all --q 3 --format json --cache-dir " + b.str());
  CHECK(r1.code == 0);
  CHECK(r2.code == 0);
  auto j1 = without_timings(r1.out), j2 = without_timings(r2.out);
  CHECK(j1 == j2);
  CHECK(j1["schema_version"] == 1);
  CHECK(j1["binding_pass"] == true);
  for (const auto& rep : j1["reports"]) {
    CHECK(rep.contains("assertions"));
    CHECK_FALSE(rep.contains("timings"));
    for (const auto& a : rep["assertions"]) {
      CHECK(a.contains("name"));
      CHECK(a.contains("predicted"));
      CHECK(a.contains("computed"));
      CHECK(a.contains("pass"));
    }
  }
  CHECK(nlohmann::json::parse(r1.out).contains("timings"));

  // warm cache: same outcomes, every lookup a hit
  auto w = run("verify --case all --q 3 --format json --cache-dir " + a.str());
  CHECK(w.code == 0);
  auto jw = without_timings(w.out);
  REQUIRE(jw["reports"].size() == j1["reports"].size());
  for (size_t i = 0; i < jw["reports"].size(); ++i) {
    CHECK(jw["reports"][i]["assertions"] == j1["reports"][i]["assertions"]);
    for (const auto& e : jw["reports"][i]["cache"]) CHECK(e["hit"] == true);
  }
}

TEST_CASE("strict mode turns the informative q=3 cell into a failure") {
  TempDir d("strict");
  CHECK(run("verify --case fj --q 3 --cache-dir " + d.str()).code == 0);
  CHECK(run("verify --case fj --q 3 --strict --cache-dir " + d.str()).code == 1);
}

TEST_CASE("text and csv formats") {
  TempDir d("fmt");
  auto t = run("verify --case b-even --q 3 --cache-dir " + d.str());
  CHECK(t.code == 0);
  CHECK(t.out.find("PASS: all binding assertions hold") != std::string::npos);
  auto c = run("verify --case b-even --q 3 --format csv --cache-dir " + d.str());
  CHECK(c.out.rfind("case,k,q,name,predicted,computed,pass,binding\n", 0) == 0);
}

TEST_CASE("cache list, stat, stale entries, clear, environment variable") {
  TempDir d("cache");
  fs::create_directories(d.p);
  CHECK(run("cache list --cache-dir " + d.str()).out.empty());
  REQUIRE(run("verify --case all --q 3 --cache-dir " + d.str()).code == 0);
  auto l = run("cache list --cache-dir " + d.str());
  for (const char* f : {"sp-d4-q3-isometry.grp", "o-odd-plus-d5-q3-isometry.grp", "o-even-minus-d2-q3-isometry.grp"})
    CHECK(l.out.find(f) != std::string::npos);
  CHECK(l.out.find("STALE") == std::string::npos);
  CHECK(run("cache list --cache-dir " + d.str()).out == l.out);

  // a group file from a future format version
  {
    std::ofstream f(d.p / "sp-d2-q7-isometry.grp", std::ios::binary);
    uint32_t v = 99;
    f.write("FQTGROUP", 8);
    f.write(reinterpret_cast<const char*>(&v), 4);
    std::string pad(28, '\0');
    f.write(pad.data(), static_cast<std::streamsize>(pad.size()));
  }
  auto l2 = run("cache list --cache-dir " + d.str());
  CHECK(l2.out.find("sp-d2-q7-isometry.grp  group  v99") != std::string::npos);
  CHECK(l2.out.find("STALE") != std::string::npos);
  auto st = nlohmann::json::parse(run("cache stat --format json --cache-dir " + d.str()).out);
  CHECK(st["stale"] == 1);
  CHECK(st["groups"].get<int>() >= 3);

  setenv("FQT_CACHE_DIR", d.str().c_str(), 1);
  CHECK(run("cache list").out == l2.out);
  CHECK(run("cache clear").code == 0);
  unsetenv("FQT_CACHE_DIR");
  CHECK(run("cache list --cache-dir " + d.str()).out.empty());
}

TEST_CASE("table subcommand") {
  auto t = run("table --pair sp4:o2minus --q 3 --format json");
  REQUIRE(t.code == 0);
  auto j = nlohmann::json::parse(t.out);
  auto rows = j["rows"].get<std::vector<std::string>>();
  auto cols = j["cols"].get<std::vector<std::string>>();
  size_t s = std::find(rows.begin(), rows.end(), "sgn") - rows.begin();
  REQUIRE(s < rows.size());
  for (size_t c = 0; c < cols.size(); ++c) CHECK(j["m"][s][c] == (cols[c] == "Theta(sgn)" ? 1 : 0));
  auto c = run("table --pair sl2:o1plus --q 5 --format csv");
  CHECK(c.code == 0);
  CHECK(c.out.find("omega_psi.odd,0,1") != std::string::npos);
}

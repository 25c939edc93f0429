// Recomputes every oracle value and writes the snapshot.  --check compares instead of writing.
#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "fqt/snapshot.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pin brute-force oracle values"};
  std::string out = "tests/data/oracle_snapshot.json";
  std::string cache;
  bool check = false;
  app.add_option("--out", out, "snapshot path");
  app.add_option("--cache-dir", cache, "group cache directory");
  app.add_flag("--check", check, "compare against the existing snapshot, write nothing");
  CLI11_PARSE(app, argc, argv);
  if (cache.empty())
    if (const char* env = std::getenv("FQT_CACHE_DIR")) cache = env;

  fqt::RealizeOptions opt;
  opt.cache_dir = cache;
  fqt::Engine E(opt);
  fqt::Snapshot fresh = fqt::compute_snapshot(E);
  if (!check) {
    fresh.save(out);
    std::cout << "pinned " << fresh.keys().size() << " entries to " << out << "\n";
    return 0;
  }
  auto bad = fqt::snapshot_mismatches(fqt::Snapshot::load(out), fresh);
  for (const auto& k : bad) std::cout << "mismatch " << k << "\n";
  std::cout << (bad.empty() ? "snapshot reproduces" : "snapshot differs") << " (" << fresh.keys().size()
            << " entries)\n";
  return bad.empty() ? 0 : 1;
}

#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fqt/weil.hpp"

namespace fqt {

struct CacheEvent {
  std::string key;
  bool hit = false;
};

struct WeilGateFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Owns fields, realized groups and pair tables for a run, backed by the disk cache.
class Engine {
 public:
  explicit Engine(RealizeOptions opt = {}, long long carrier_bound = 4096, int threads = 1);

  const FieldCtx& field(int q);
  GroupPtr group(const FormedSpace& V, bool special = false);
  GroupPtr group(int q, Tower t, int dim, bool special = false);
  // pair character table, orthogonal factor first in the result
  const PairTable& pair(GroupPtr a, GroupPtr b, const AddChar& psi);
  // runs the Weil validation gate once; throws WeilGateFailure if the fixed convention fails
  const GateResult& gate();
  // drops in-memory groups and tables (disk cache untouched)
  void release();

  RealizeOptions opt;
  long long carrier_bound;
  int threads;
  std::vector<CacheEvent> events;

 private:
  std::map<int, std::unique_ptr<FieldCtx>> fields_;
  std::map<std::string, GroupPtr> groups_;
  std::map<std::string, PairTable> pairs_;
  std::unique_ptr<GateResult> gate_;
};

// One file of the disk cache, classified from its header.
struct CacheEntry {
  std::string file;
  std::string kind;  // "group", "pair", or "unknown"
  uint32_t version = 0;
  bool stale = false;  // written by another format version
  uint64_t bytes = 0;
  uint64_t order = 0;  // group order (groups only)
};
std::vector<CacheEntry> scan_cache(const std::string& dir);
// removes cache files (and leftover .tmp files); returns the number removed
int clear_cache(const std::string& dir);

}  // namespace fqt

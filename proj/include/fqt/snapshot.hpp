#pragma once

#include <string>
#include <vector>

#include "fqt/engine.hpp"
#include "fqt/report.hpp"

namespace fqt {

constexpr int kSnapshotVersion = 1;

// Pinned oracle values.  File layout: {"format", "version", "pinned", "entries": {key:
// {"method", "value"}}}, keys sorted.
struct Snapshot {
  nlohmann::json data;
  static Snapshot load(const std::string& path);  // throws on missing file or wrong version
  void save(const std::string& path) const;
  bool has(const std::string& key) const;
  const nlohmann::json& value(const std::string& key) const;
  std::string method(const std::string& key) const;
  std::vector<std::string> keys() const;
};

// Runs every oracle.  Takes a few seconds; uses the engine for group enumeration only.
Snapshot compute_snapshot(Engine& E);

// keys whose values differ (or are missing on either side); pin dates are ignored
std::vector<std::string> snapshot_mismatches(const Snapshot& pinned, const Snapshot& fresh);

}  // namespace fqt

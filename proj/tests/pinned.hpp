#pragma once

#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <string>

// Values pinned by the oracle pass.  Tests compare against these and never re-pin.
inline const nlohmann::json& pinned(const std::string& key) {
  static const nlohmann::json snap = [] {
    std::ifstream in(FQT_SNAPSHOT);
    if (!in) throw std::runtime_error("missing snapshot " FQT_SNAPSHOT);
    return nlohmann::json::parse(in);
  }();
  const auto& e = snap.at("entries");
  if (!e.contains(key)) throw std::runtime_error("snapshot has no entry " + key);
  return e.at(key).at("value");
}

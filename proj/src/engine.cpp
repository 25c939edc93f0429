#include "fqt/engine.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace fqt {

Engine::Engine(RealizeOptions o, long long cb, int t) : opt(std::move(o)), carrier_bound(cb), threads(t) {}

const FieldCtx& Engine::field(int q) {
  auto& f = fields_[q];
  if (!f) f = std::make_unique<FieldCtx>(make_field(q));
  return *f;
}

GroupPtr Engine::group(const FormedSpace& V, bool special) {
  std::string key = group_cache_name(V, special);
  auto it = groups_.find(key);
  if (it != groups_.end()) return it->second;
  RealizeStats st;
  GroupPtr G = realize(V, special, opt, &st);
  if (!opt.cache_dir.empty()) events.push_back({key, st.cache_hit});
  groups_[key] = G;
  return G;
}

GroupPtr Engine::group(int q, Tower t, int dim, bool special) {
  return group(standard_space(field(q), t, dim), special);
}

const GateResult& Engine::gate() {
  if (!gate_) {
    gate_ = std::make_unique<GateResult>(weil_gate());
    if (std::find(gate_->passing.begin(), gate_->passing.end(), kWeilScale) == gate_->passing.end() ||
        gate_->worst_model_error > 1e-9)
      throw WeilGateFailure("Weil character validation gate failed; refusing theta computations");
  }
  return *gate_;
}

const PairTable& Engine::pair(GroupPtr a, GroupPtr b, const AddChar& psi) {
  gate();
  if (a->space.symplectic()) std::swap(a, b);
  if (a->space.symplectic() || !b->space.symplectic())
    throw ConfigError("dual pair needs one orthogonal and one symplectic factor: " + a->name + ", " + b->name);
  std::string key = pair_cache_name(*a, *b, psi.a(), kWeilScale);
  auto it = pairs_.find(key);
  if (it != pairs_.end()) return it->second;
  const FieldCtx& F = *a->F;
  PairTable T;
  T.orth = a;
  T.sp = b;
  T.psi_a = psi.a();
  T.scale = kWeilScale;
  std::string path;
  if (!opt.cache_dir.empty()) path = (std::filesystem::path(opt.cache_dir) / key).string();
  if (path.empty() || !load_pair_table(T, path)) {
    T = dual_pair_restrict(WeilCharacter(F, psi), a, b, threads);
    if (!path.empty()) save_pair_table(T, path);
  }
  if (!path.empty()) events.push_back({key, T.from_cache});
  return pairs_[key] = std::move(T);
}

void Engine::release() {
  groups_.clear();
  pairs_.clear();
}

std::vector<CacheEntry> scan_cache(const std::string& dir) {
  namespace fs = std::filesystem;
  std::vector<CacheEntry> out;
  if (dir.empty() || !fs::is_directory(dir)) return out;
  for (const auto& de : fs::directory_iterator(dir)) {
    if (!de.is_regular_file()) continue;
    CacheEntry e;
    e.file = de.path().filename().string();
    e.bytes = de.file_size();
    char head[24] = {};
    std::ifstream in(de.path(), std::ios::binary);
    in.read(head, sizeof head);
    std::memcpy(&e.version, head + 8, 4);
    if (std::memcmp(head, "FQTGROUP", 8) == 0) {
      e.kind = "group";
      e.stale = e.version != kGroupCacheVersion;
      // header: magic, six uint32 fields, then the order
      char more[40] = {};
      in.seekg(0);
      in.read(more, sizeof more);
      if (in) std::memcpy(&e.order, more + 32, 8);
    } else if (std::memcmp(head, "FQTPAIRS", 8) == 0) {
      e.kind = "pair";
      e.stale = e.version != kPairCacheVersion;
    } else {
      e.kind = "unknown";
      e.stale = true;
    }
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const CacheEntry& a, const CacheEntry& b) { return a.file < b.file; });
  return out;
}

int clear_cache(const std::string& dir) {
  namespace fs = std::filesystem;
  int n = 0;
  if (dir.empty() || !fs::is_directory(dir)) return 0;
  for (const auto& de : fs::directory_iterator(dir)) {
    auto ext = de.path().extension().string();
    if (de.is_regular_file() && (ext == ".grp" || ext == ".tab" || ext == ".tmp")) {
      fs::remove(de.path());
      ++n;
    }
  }
  return n;
}

}  // namespace fqt

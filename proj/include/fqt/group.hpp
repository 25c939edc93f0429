#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fqt/forms.hpp"

namespace fqt {

struct ResourceRefusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Classical order of Sp / O / SO of a standard space, as a long double so
// that oversized requests can be refused without overflow.
long double projected_order(const FormedSpace& V, bool special);

// Open-addressing set of 64-bit keys storing indices into an external array.
class KeyIndex {
 public:
  void reset(uint64_t expected);
  // returns index of key, inserting it as `next` if absent; `inserted` reports which
  uint32_t insert(uint64_t key, uint32_t next, const std::vector<uint64_t>& keys, bool& inserted);
  int64_t find(uint64_t key, const std::vector<uint64_t>& keys) const;

 private:
  static uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }
  std::vector<uint32_t> slots_;
  uint64_t mask_ = 0;
};

// Packs n x n matrices over F_q into base-q integers, row-major, entry 0 least significant.
class Packer {
 public:
  Packer() = default;
  Packer(const FieldCtx& F, int n);
  uint64_t pack(const Elt* m) const;
  void unpack(uint64_t key, Elt* m) const;
  uint64_t pack(const Mat& M) const { return pack(M.a.data()); }
  Mat unpack(uint64_t key) const;
  // C = A B on raw buffers
  void mul(const Elt* A, const Elt* B, Elt* C) const;
  int n = 0;

 private:
  const FieldCtx* F_ = nullptr;
  std::vector<uint64_t> pow_;
  int chunk_ = 1;
  uint64_t chunk_mod_ = 1;
  std::vector<Elt> chunk_digits_;
  std::vector<Elt> red_;  // reduction of small sums mod p
};

class Group {
 public:
  const FieldCtx* F = nullptr;
  FormedSpace space;
  bool special = false;
  std::string name;
  int n = 0;
  Packer packer;
  std::vector<Mat> gens;
  std::vector<uint64_t> elems;
  std::vector<uint32_t> cls;
  std::vector<uint32_t> rep_index;
  std::vector<uint64_t> class_size;
  bool from_cache = false;

  uint64_t order() const { return elems.size(); }
  int num_classes() const { return static_cast<int>(rep_index.size()); }
  int64_t index_of(uint64_t key) const { return index_.find(key, elems); }
  int64_t index_of(const Mat& M) const { return index_of(packer.pack(M)); }
  int class_of(const Mat& M) const;  // throws if M is not in the group
  int class_of_key(uint64_t key) const;
  Mat element(uint64_t i) const { return packer.unpack(elems[i]); }
  Mat rep(int c) const { return element(rep_index[c]); }
  bool contains(const Mat& M) const { return index_of(M) >= 0; }
  bool rep_is_special(int c) const;  // det of the class representative is 1

  // internal construction steps
  void closure(uint64_t expected, uint64_t seed);
  void compute_classes();
  void rebuild_index();
  void finish_classes();

 private:
  KeyIndex index_;
};

using GroupPtr = std::shared_ptr<const Group>;

struct RealizeOptions {
  long double order_bound = 2e7L;
  std::string cache_dir;  // empty: no disk cache
};

struct RealizeStats {
  bool cache_hit = false;
  bool cache_rebuilt = false;
};

GroupPtr realize(const FormedSpace& V, bool special, const RealizeOptions& opt, RealizeStats* stats = nullptr);

std::string group_cache_name(const FormedSpace& V, bool special);
bool save_group(const Group& G, const std::string& path);
// returns null on missing, corrupt, or version-mismatched file
std::shared_ptr<Group> load_group(const FormedSpace& V, bool special, const std::string& path);

constexpr uint32_t kGroupCacheVersion = 1;

// FNV-1a, used as the checksum of every cache file
uint64_t fnv(const void* data, size_t len, uint64_t h = 1469598103934665603ULL);

}  // namespace fqt

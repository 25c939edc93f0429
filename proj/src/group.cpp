#include "fqt/group.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

namespace fqt {

long double projected_order(const FormedSpace& V, bool special) {
  long double q = V.F->q;
  int n = V.dim;
  long double ord = 1;
  auto prod = [&](int m) {
    long double p = 1;
    for (int i = 1; i <= m; ++i) p *= std::pow(q, 2 * i) - 1;
    return p;
  };
  if (n == 0) return 1;
  switch (V.tower) {
    case Tower::Sp: {
      int m = n / 2;
      return std::pow(q, m * m) * prod(m);
    }
    case Tower::OOddPlus:
    case Tower::OOddMinus: {
      int m = n / 2;
      ord = 2 * std::pow(q, m * m) * prod(m);
      break;
    }
    case Tower::OEvenPlus:
    case Tower::OEvenMinus: {
      int m = n / 2;
      long double sgn = V.tower == Tower::OEvenPlus ? 1 : -1;
      ord = 2 * std::pow(q, m * (m - 1)) * (std::pow(q, m) - sgn) * prod(m - 1);
      break;
    }
  }
  return special ? ord / 2 : ord;
}

void KeyIndex::reset(uint64_t expected) {
  uint64_t cap = 16;
  while (cap * 3 < expected * 4 + 4) cap <<= 1;
  slots_.assign(cap, UINT32_MAX);
  mask_ = cap - 1;
}

uint32_t KeyIndex::insert(uint64_t key, uint32_t next, const std::vector<uint64_t>& keys, bool& inserted) {
  uint64_t h = mix(key) & mask_;
  while (true) {
    uint32_t s = slots_[h];
    if (s == UINT32_MAX) {
      slots_[h] = next;
      inserted = true;
      return next;
    }
    if (keys[s] == key) {
      inserted = false;
      return s;
    }
    h = (h + 1) & mask_;
  }
}

int64_t KeyIndex::find(uint64_t key, const std::vector<uint64_t>& keys) const {
  if (slots_.empty()) return -1;
  uint64_t h = mix(key) & mask_;
  while (true) {
    uint32_t s = slots_[h];
    if (s == UINT32_MAX) return -1;
    if (keys[s] == key) return s;
    h = (h + 1) & mask_;
  }
}

Packer::Packer(const FieldCtx& F, int n_) : n(n_), F_(&F) {
  int cells = n * n;
  long double cap = std::pow(static_cast<long double>(F.q), cells);
  if (cap > 1.8e19L) throw ResourceRefusal("matrix keys exceed 64 bits for n=" + std::to_string(n) + ", q=" + std::to_string(F.q));
  pow_.resize(cells + 1);
  pow_[0] = 1;
  for (int i = 1; i <= cells; ++i) pow_[i] = pow_[i - 1] * static_cast<uint64_t>(F.q);
  chunk_ = 1;
  while (chunk_ + 1 <= cells && pow_[chunk_ + 1] <= 4096) ++chunk_;
  chunk_mod_ = 1;
  for (int i = 0; i < chunk_; ++i) chunk_mod_ *= F.q;
  chunk_digits_.resize(chunk_mod_ * chunk_);
  for (uint64_t v = 0; v < chunk_mod_; ++v) {
    uint64_t x = v;
    for (int d = 0; d < chunk_; ++d) {
      chunk_digits_[v * chunk_ + d] = static_cast<Elt>(x % F.q);
      x /= F.q;
    }
  }
  int maxsum = n * (F.p - 1) * (F.p - 1) + 1;
  red_.resize(maxsum);
  for (int s = 0; s < maxsum; ++s) red_[s] = static_cast<Elt>(s % F.p);
}

uint64_t Packer::pack(const Elt* m) const {
  uint64_t k = 0;
  for (int i = n * n - 1; i >= 0; --i) k = k * F_->q + m[i];
  return k;
}

void Packer::unpack(uint64_t key, Elt* m) const {
  int cells = n * n;
  for (int base = 0; base < cells; base += chunk_) {
    uint64_t v = key % chunk_mod_;
    key /= chunk_mod_;
    int lim = std::min(chunk_, cells - base);
    std::memcpy(m + base, &chunk_digits_[v * chunk_], lim);
  }
}

Mat Packer::unpack(uint64_t key) const {
  Mat M(n, n);
  unpack(key, M.a.data());
  return M;
}

void Packer::mul(const Elt* A, const Elt* B, Elt* C) const {
  if (F_->is_prime()) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int s = 0;
        for (int k = 0; k < n; ++k) s += A[i * n + k] * B[k * n + j];
        C[i * n + j] = red_[s];
      }
    return;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Elt s = 0;
      for (int k = 0; k < n; ++k) s = F_->add(s, F_->mul(A[i * n + k], B[k * n + j]));
      C[i * n + j] = s;
    }
}

int Group::class_of_key(uint64_t key) const {
  int64_t i = index_of(key);
  if (i < 0) throw std::out_of_range("element not in " + name);
  return static_cast<int>(cls[i]);
}

int Group::class_of(const Mat& M) const { return class_of_key(packer.pack(M)); }

bool Group::rep_is_special(int c) const { return det(*F, rep(c)) == 1; }

namespace {

Vec random_vector(const FieldCtx& F, int n, std::mt19937_64& rng) {
  Vec v(n);
  for (auto& x : v) x = static_cast<Elt>(rng() % F.q);
  return v;
}

// x -> x - 2 (x,v)/(v,v) v
Mat reflection(const FieldCtx& F, const Mat& G, const Vec& v) {
  int n = G.r;
  Elt c = F.div(F.from_int(2), bilinear(F, G, v, v));
  Vec gv = apply(F, G, v);
  Mat R = Mat::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R(i, j) = F.sub(R(i, j), F.mul(c, F.mul(v[i], gv[j])));
  return R;
}

// x -> x + a (x,v) v
Mat transvection(const FieldCtx& F, const Mat& G, const Vec& v, Elt a) {
  int n = G.r;
  Vec fv = apply(F, G, v);  // (x,v) = sum_j x_j (G v)_j
  Mat T = Mat::identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) T(i, j) = F.add(T(i, j), F.mul(a, F.mul(v[i], fv[j])));
  return T;
}

Mat random_generator(const FormedSpace& V, bool special, std::mt19937_64& rng, int salt) {
  const FieldCtx& F = *V.F;
  int n = V.dim;
  Mat g = Mat::identity(n);
  if (V.symplectic()) {
    for (int k = 0; k < 2 * n + 1; ++k) {
      Vec v = random_vector(F, n, rng);
      Elt a = static_cast<Elt>(1 + rng() % (F.q - 1));
      g = mul(F, g, transvection(F, V.gram, v, a));
    }
    return g;
  }
  int count = n + 1 + (salt % 2);
  if (special && count % 2) ++count;
  for (int k = 0; k < count; ++k) {
    Vec v;
    do v = random_vector(F, n, rng);
    while (bilinear(F, V.gram, v, v) == 0);
    g = mul(F, g, reflection(F, V.gram, v));
  }
  return g;
}

bool preserves(const FieldCtx& F, const Mat& G, const Mat& g) {
  return mul(F, mul(F, transpose(g), G), g) == G;
}

}  // namespace

uint64_t fnv(const void* data, size_t len, uint64_t h) {
  auto p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) h = (h ^ p[i]) * 1099511628211ULL;
  return h;
}

void Group::closure(uint64_t expected, uint64_t seed) {
  std::mt19937_64 rng(seed);
  elems.clear();
  elems.reserve(expected);
  index_.reset(expected);
  bool ins = false;
  uint64_t id = packer.pack(Mat::identity(n));
  index_.insert(id, 0, elems, ins);
  elems.push_back(id);
  std::vector<size_t> done;
  std::vector<Elt> a(n * n), c(n * n);
  int salt = 0;
  while (elems.size() < expected) {
    if (gens.size() > 8 + static_cast<size_t>(n)) throw std::logic_error("generation failed for " + name);
    Mat g = random_generator(space, special, rng, salt++);
    if (!preserves(*F, space.gram, g)) throw std::logic_error("generator does not preserve the form");
    if (special && det(*F, g) != 1) throw std::logic_error("generator not special");
    gens.push_back(g);
    done.push_back(0);
    if (gens.size() < 2 && expected > 2) continue;
    bool progress = true;
    while (progress) {
      progress = false;
      for (size_t j = 0; j < gens.size(); ++j) {
        const Elt* gb = gens[j].a.data();
        while (done[j] < elems.size()) {
          packer.unpack(elems[done[j]++], a.data());
          packer.mul(a.data(), gb, c.data());
          uint64_t k = packer.pack(c.data());
          bool inserted = false;
          index_.insert(k, static_cast<uint32_t>(elems.size()), elems, inserted);
          if (inserted) elems.push_back(k);
          progress = true;
          if (elems.size() > expected) throw std::logic_error(name + " exceeds its classical order");
        }
      }
    }
  }
}

void Group::compute_classes() {
  size_t N = elems.size();
  cls.assign(N, UINT32_MAX);
  std::vector<Mat> ginv;
  for (auto& g : gens) ginv.push_back(inverse_or_throw(*F, g));
  std::vector<Elt> x(n * n), t(n * n), y(n * n);
  std::vector<uint32_t> stack;
  uint32_t next = 0;
  for (size_t i = 0; i < N; ++i) {
    if (cls[i] != UINT32_MAX) continue;
    cls[i] = next;
    stack.push_back(static_cast<uint32_t>(i));
    while (!stack.empty()) {
      uint32_t e = stack.back();
      stack.pop_back();
      packer.unpack(elems[e], x.data());
      for (size_t j = 0; j < gens.size(); ++j) {
        packer.mul(ginv[j].a.data(), x.data(), t.data());
        packer.mul(t.data(), gens[j].a.data(), y.data());
        int64_t idx = index_.find(packer.pack(y.data()), elems);
        if (idx < 0) throw std::logic_error("conjugate escaped the group");
        if (cls[idx] == UINT32_MAX) {
          cls[idx] = next;
          stack.push_back(static_cast<uint32_t>(idx));
        }
      }
    }
    ++next;
  }
  finish_classes();
}

void Group::finish_classes() {
  uint32_t nc = 0;
  for (uint32_t c : cls) nc = std::max(nc, c + 1);
  rep_index.assign(nc, UINT32_MAX);
  class_size.assign(nc, 0);
  for (size_t i = 0; i < cls.size(); ++i) {
    if (rep_index[cls[i]] == UINT32_MAX) rep_index[cls[i]] = static_cast<uint32_t>(i);
    ++class_size[cls[i]];
  }
}

void Group::rebuild_index() {
  index_.reset(elems.size());
  for (size_t i = 0; i < elems.size(); ++i) {
    bool ins = false;
    index_.insert(elems[i], static_cast<uint32_t>(i), elems, ins);
    if (!ins) throw std::runtime_error("duplicate element in cache");
  }
}

std::string group_cache_name(const FormedSpace& V, bool special) {
  return tower_name(V.tower) + "-d" + std::to_string(V.dim) + "-q" + std::to_string(V.F->q) +
         (special ? "-special" : "-isometry") + ".grp";
}

namespace {
constexpr char kMagic[8] = {'F', 'Q', 'T', 'G', 'R', 'O', 'U', 'P'};

struct Header {
  char magic[8];
  uint32_t version, q, dim, tower, special, classes;
  uint64_t order;
};
}  // namespace

bool save_group(const Group& G, const std::string& path) {
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  std::string tmp = path + ".tmp";
  std::ofstream out(tmp, std::ios::binary);
  if (!out) return false;
  Header h{};
  std::memcpy(h.magic, kMagic, 8);
  h.version = kGroupCacheVersion;
  h.q = G.F->q;
  h.dim = G.n;
  h.tower = static_cast<uint32_t>(G.space.tower);
  h.special = G.special;
  h.classes = G.num_classes();
  h.order = G.order();
  out.write(reinterpret_cast<const char*>(&h), sizeof h);
  out.write(reinterpret_cast<const char*>(G.elems.data()), G.elems.size() * 8);
  out.write(reinterpret_cast<const char*>(G.cls.data()), G.cls.size() * 4);
  uint64_t sum = fnv(G.elems.data(), G.elems.size() * 8);
  sum = fnv(G.cls.data(), G.cls.size() * 4, sum);
  out.write(reinterpret_cast<const char*>(&sum), 8);
  out.close();
  if (!out) return false;
  std::filesystem::rename(tmp, path);
  return true;
}

std::shared_ptr<Group> load_group(const FormedSpace& V, bool special, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return nullptr;
  Header h{};
  in.read(reinterpret_cast<char*>(&h), sizeof h);
  if (!in || std::memcmp(h.magic, kMagic, 8) != 0 || h.version != kGroupCacheVersion) return nullptr;
  if (h.q != static_cast<uint32_t>(V.F->q) || h.dim != static_cast<uint32_t>(V.dim) ||
      h.tower != static_cast<uint32_t>(V.tower) || h.special != static_cast<uint32_t>(special))
    return nullptr;
  auto G = std::make_shared<Group>();
  G->F = V.F;
  G->space = V;
  G->special = special;
  G->n = V.dim;
  G->packer = Packer(*V.F, V.dim);
  G->elems.resize(h.order);
  G->cls.resize(h.order);
  in.read(reinterpret_cast<char*>(G->elems.data()), h.order * 8);
  in.read(reinterpret_cast<char*>(G->cls.data()), h.order * 4);
  uint64_t sum = 0;
  in.read(reinterpret_cast<char*>(&sum), 8);
  if (!in) return nullptr;
  uint64_t expect = fnv(G->elems.data(), G->elems.size() * 8);
  expect = fnv(G->cls.data(), G->cls.size() * 4, expect);
  if (expect != sum) return nullptr;
  G->rebuild_index();
  G->finish_classes();
  if (static_cast<uint32_t>(G->num_classes()) != h.classes) return nullptr;
  G->from_cache = true;
  return G;
}

GroupPtr realize(const FormedSpace& V, bool special, const RealizeOptions& opt, RealizeStats* stats) {
  long double ord = projected_order(V, special);
  std::string nm = (special ? "S" : "") + V.name() + "(" + std::to_string(V.F->q) + ")";
  if (ord > opt.order_bound) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4Lg", ord);
    throw ResourceRefusal(nm + ": projected order " + buf + " exceeds the order bound");
  }
  std::string path;
  if (!opt.cache_dir.empty()) {
    path = (std::filesystem::path(opt.cache_dir) / group_cache_name(V, special)).string();
    bool existed = std::filesystem::exists(path);
    if (auto G = load_group(V, special, path)) {
      G->name = nm;
      if (stats) stats->cache_hit = true;
      return G;
    }
    if (existed) {
      std::fprintf(stderr, "warning: cache file %s unreadable or stale, rebuilding\n", path.c_str());
      if (stats) stats->cache_rebuilt = true;
    }
  }
  auto G = std::make_shared<Group>();
  G->F = V.F;
  G->space = V;
  G->special = special;
  G->name = nm;
  G->n = V.dim;
  G->packer = Packer(*V.F, V.dim);
  uint64_t expected = static_cast<uint64_t>(std::llround(ord));
  uint64_t seed = 0x5eed0000ULL ^ (static_cast<uint64_t>(V.F->q) << 32) ^ (static_cast<uint64_t>(V.tower) << 16) ^
                  (static_cast<uint64_t>(V.dim) << 8) ^ (special ? 1u : 0u);
  G->closure(expected, seed);
  G->compute_classes();
  if (!path.empty()) save_group(*G, path);
  return G;
}

}  // namespace fqt

#include "fqt/weil.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "fqt/parallel.hpp"

namespace fqt {

const char* const kWeilScaleNames[kWeilScaleCount] = {"1", "-1", "2", "-2", "1/2", "-1/2"};

CMat CMat::identity(int size) {
  CMat I(size);
  for (int i = 0; i < size; ++i) I(i, i) = 1;
  return I;
}

cplx CMat::trace() const {
  cplx s = 0;
  for (int i = 0; i < n; ++i) s += (*this)(i, i);
  return s;
}

CMat operator*(const CMat& A, const CMat& B) {
  CMat C(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int k = 0; k < A.n; ++k) {
      cplx x = A(i, k);
      if (x == cplx(0)) continue;
      for (int j = 0; j < A.n; ++j) C(i, j) += x * B(k, j);
    }
  return C;
}

CMat adjoint(const CMat& A) {
  CMat B(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) B(j, i) = std::conj(A(i, j));
  return B;
}

double max_abs_diff(const CMat& A, const CMat& B) {
  double m = 0;
  for (size_t i = 0; i < A.a.size(); ++i) m = std::max(m, std::abs(A.a[i] - B.a[i]));
  return m;
}

Mat symplectic_basis(const FieldCtx& F, const Mat& omega) {
  int n = omega.r;
  if (n % 2) throw std::invalid_argument("alternating form of odd dimension");
  int N = n / 2;
  std::vector<Vec> pool;
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    pool.push_back(e);
  }
  Mat T(n, n);
  auto nonzero = [](const Vec& v) {
    for (Elt x : v)
      if (x) return true;
    return false;
  };
  for (int i = 0; i < N; ++i) {
    size_t ie = 0;
    while (ie < pool.size() && !nonzero(pool[ie])) ++ie;
    if (ie == pool.size()) throw std::invalid_argument("degenerate alternating form");
    Vec e = pool[ie];
    size_t jf = 0;
    while (jf < pool.size() && bilinear(F, omega, e, pool[jf]) == 0) ++jf;
    if (jf == pool.size()) throw std::invalid_argument("degenerate alternating form");
    Vec f = pool[jf];
    Elt s = F.inv(bilinear(F, omega, e, f));
    for (auto& x : f) x = F.mul(x, s);
    for (auto& v : pool) {
      Elt a = F.neg(bilinear(F, omega, v, f)), b = bilinear(F, omega, v, e);
      for (int k = 0; k < n; ++k) v[k] = F.add(v[k], F.add(F.mul(a, e[k]), F.mul(b, f[k])));
    }
    for (int k = 0; k < n; ++k) {
      T(k, i) = e[k];
      T(k, N + i) = f[k];
    }
  }
  return T;
}

WeilModel::WeilModel(const FieldCtx& F, const Mat& omega, const AddChar& psi, long long carrier_bound)
    : N(omega.r / 2), F_(&F), omega_(omega), psi_(psi) {
  double carrier = std::pow(static_cast<double>(F.q), N);
  if (carrier > static_cast<double>(carrier_bound))
    throw ResourceRefusal("Weil carrier of dimension " + std::to_string(F.q) + "^" + std::to_string(N) +
                          " exceeds the carrier bound " + std::to_string(carrier_bound));
  T_ = symplectic_basis(F, omega);
  Tinv_ = inverse_or_throw(F, T_);
  size_ = static_cast<int>(count_vectors(F, N));
  for (int i = 0; i < size_; ++i) pts_.push_back(vector_at(F, N, i));
  // (D F)^3 = lambda I for the unnormalised one-variable operators; then c1 = q chi(-1) / lambda
  int q = F.q;
  CMat D(q), Fo(q);
  Elt half = F.half();
  for (int u = 0; u < q; ++u) {
    D(u, u) = psi(F.mul(half, F.mul(static_cast<Elt>(u), static_cast<Elt>(u))));
    for (int v = 0; v < q; ++v) Fo(u, v) = psi(F.mul(static_cast<Elt>(u), static_cast<Elt>(v)));
  }
  CMat X = D * Fo;
  CMat X3 = X * X * X;
  cplx lambda = X3(0, 0);
  CMat L = CMat::identity(q);
  for (auto& x : L.a) x *= lambda;
  if (max_abs_diff(X3, L) > 1e-9) throw std::logic_error("Weil normalisation is not scalar");
  c1_ = static_cast<double>(q) * static_cast<double>(F.legendre(F.neg(1))) / lambda;
}

int WeilModel::index(const Vec& u) const {
  int idx = 0;
  for (int k = N - 1; k >= 0; --k) idx = idx * F_->q + u[k];
  return idx;
}

CMat WeilModel::m_of(const Mat& A) const {
  const FieldCtx& F = *F_;
  CMat M(size_);
  double chi = N ? F.legendre(det(F, A)) : 1;
  Mat Ai = inverse_or_throw(F, A);
  for (int u = 0; u < size_; ++u) M(u, index(apply(F, Ai, pts_[u]))) = chi;
  return M;
}

CMat WeilModel::lower_of(const Mat& C) const {
  const FieldCtx& F = *F_;
  CMat M(size_);
  Elt mh = F.neg(F.half());
  for (int u = 0; u < size_; ++u) M(u, u) = psi_(F.mul(mh, bilinear(F, C, pts_[u], pts_[u])));
  return M;
}

CMat WeilModel::weyl(const std::vector<int>& S) const {
  const FieldCtx& F = *F_;
  std::vector<char> in(N, 0);
  for (int i : S) in[i] = 1;
  cplx c = std::pow(c1_, static_cast<int>(S.size()));
  CMat M(size_);
  for (int u = 0; u < size_; ++u)
    for (int v = 0; v < size_; ++v) {
      bool ok = true;
      Elt s = 0;
      for (int k = 0; k < N && ok; ++k) {
        if (in[k]) s = F.add(s, F.mul(pts_[u][k], pts_[v][k]));
        else ok = pts_[u][k] == pts_[v][k];
      }
      if (ok) M(u, v) = c * psi_(s);
    }
  return M;
}

CMat WeilModel::matrix(const Mat& g) const {
  const FieldCtx& F = *F_;
  if (N == 0) return CMat::identity(1);
  Mat gs = mul(F, mul(F, Tinv_, g), T_);
  for (int mask = 0; mask < (1 << N); ++mask) {
    Mat h = gs;
    std::vector<int> S;
    for (int i = 0; i < N; ++i) {
      if (!(mask >> i & 1)) continue;
      S.push_back(i);
      for (int j = 0; j < 2 * N; ++j) {
        h(i, j) = gs(N + i, j);
        h(N + i, j) = F.neg(gs(i, j));
      }
    }
    auto Ainv = inverse(F, submatrix(h, 0, 0, N, N));
    if (!Ainv) continue;
    Mat A = submatrix(h, 0, 0, N, N), B = submatrix(h, 0, N, N, N), C = submatrix(h, N, 0, N, N);
    Mat X = mul(F, C, *Ainv), Y = mul(F, *Ainv, B);
    std::vector<int> all(N);
    for (int i = 0; i < N; ++i) all[i] = i;
    CMat W = weyl(all);
    return adjoint(weyl(S)) * lower_of(X) * m_of(A) * adjoint(W) * lower_of(scale(F, F.neg(1), Y)) * W;
  }
  throw std::logic_error("no Bruhat cell found");
}

CMat WeilModel::parity() const {
  CMat P(size_);
  for (int u = 0; u < size_; ++u) {
    Vec m = pts_[u];
    for (auto& x : m) x = F_->neg(x);
    P(u, index(m)) = 1;
  }
  return P;
}

CMat WeilModel::heisenberg(const Vec& w, Elt t) const {
  const FieldCtx& F = *F_;
  Vec s = apply(F, Tinv_, w);
  Vec x(s.begin(), s.begin() + N), y(s.begin() + N, s.end());
  Elt xy = 0;
  for (int k = 0; k < N; ++k) xy = F.add(xy, F.mul(x[k], y[k]));
  Elt base = F.add(t, F.mul(F.half(), xy));
  CMat M(size_);
  for (int u = 0; u < size_; ++u) {
    Elt uy = 0;
    Vec ux(N);
    for (int k = 0; k < N; ++k) {
      uy = F.add(uy, F.mul(pts_[u][k], y[k]));
      ux[k] = F.add(pts_[u][k], x[k]);
    }
    M(u, index(ux)) = psi_(F.add(base, uy));
  }
  return M;
}

namespace {
Elt scale_element(const FieldCtx& F, int s) {
  switch (s) {
    case 0: return 1;
    case 1: return F.neg(1);
    case 2: return F.from_int(2);
    case 3: return F.neg(F.from_int(2));
    case 4: return F.half();
    case 5: return F.neg(F.half());
  }
  throw std::invalid_argument("unknown Weil scale");
}
}  // namespace

WeilCharacter::WeilCharacter(const FieldCtx& F, const AddChar& psi, int scale)
    : F_(&F), psi_(psi), scale_(scale), c_(scale_element(F, scale)) {
  cplx s = 0;
  for (int x = 0; x < F.q; ++x) s += psi(F.mul(static_cast<Elt>(x), static_cast<Elt>(x)));
  gamma_ = s / std::sqrt(static_cast<double>(F.q));
}

cplx WeilCharacter::operator()(const Mat& g, const Mat& omega) const {
  const FieldCtx& F = *F_;
  int n = g.r;
  Mat M = sub(F, g, Mat::identity(n));
  auto piv = pivot_columns(F, M);
  int r = static_cast<int>(piv.size()), d = n - r;
  // b_i = (g-1) y_i with y_i = e_{piv_i}; beta(b_i, b_k) = <y_i, b_k> is well defined and nondegenerate
  Mat om = mul(F, omega, M);
  Mat B(r, r);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < r; ++k) B(i, k) = om(piv[i], piv[k]);
  Elt dB = det(F, fqt::scale(F, c_, B));
  if (r && dB == 0) throw std::logic_error("degenerate form on the image of g - 1");
  double chi = r ? F.legendre(dB) : 1;
  return std::pow(static_cast<double>(F.q), d / 2.0) * std::pow(gamma_, r) * chi;
}

cplx WeilCharacter::pair(const Mat& g, const Mat& BV, const Mat& h, const Mat& J) const {
  return (*this)(kron(*F_, g, h), kron(*F_, BV, J));
}

PairTable dual_pair_restrict(const WeilCharacter& chi, GroupPtr G, GroupPtr H, int threads) {
  if (G->space.symplectic() == H->space.symplectic())
    throw ConfigError("dual pair needs one orthogonal and one symplectic factor: " + G->name + ", " + H->name);
  if (G->space.symplectic()) std::swap(G, H);
  PairTable T;
  T.orth = G;
  T.sp = H;
  T.psi_a = chi.psi().a();
  T.scale = chi.scale();
  int na = G->num_classes(), nb = H->num_classes();
  T.val.assign(static_cast<size_t>(na) * nb, 0.0);
  std::vector<Mat> reps_b;
  for (int b = 0; b < nb; ++b) reps_b.push_back(H->rep(b));
  parallel_for(na, threads, [&](size_t a) {
    Mat g = G->rep(static_cast<int>(a));
    for (int b = 0; b < nb; ++b) T.val[a * nb + b] = chi.pair(g, G->space.gram, reps_b[b], H->space.gram);
  });
  return T;
}

std::string pair_cache_name(const Group& orth, const Group& sp, Elt psi_a, int scale) {
  auto stem = [](const Group& g) {
    std::string n = group_cache_name(g.space, g.special);
    return n.substr(0, n.size() - 4);
  };
  return "pair-" + stem(orth) + "-" + stem(sp) + "-psi" + std::to_string(psi_a) + "-c" + std::to_string(scale) + ".tab";
}

namespace {
constexpr char kPairMagic[8] = {'F', 'Q', 'T', 'P', 'A', 'I', 'R', 'S'};
struct PairHeader {
  char magic[8];
  uint32_t version, q, psi_a, scale, na, nb;
  uint64_t order_a, order_b;
};
}  // namespace

bool save_pair_table(const PairTable& T, const std::string& path) {
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  std::string tmp = path + ".tmp";
  std::ofstream out(tmp, std::ios::binary);
  if (!out) return false;
  PairHeader h{};
  std::memcpy(h.magic, kPairMagic, 8);
  h.version = kPairCacheVersion;
  h.q = T.orth->F->q;
  h.psi_a = T.psi_a;
  h.scale = T.scale;
  h.na = T.orth->num_classes();
  h.nb = T.sp->num_classes();
  h.order_a = T.orth->order();
  h.order_b = T.sp->order();
  out.write(reinterpret_cast<const char*>(&h), sizeof h);
  out.write(reinterpret_cast<const char*>(T.val.data()), T.val.size() * sizeof(cplx));
  uint64_t sum = fnv(T.val.data(), T.val.size() * sizeof(cplx));
  out.write(reinterpret_cast<const char*>(&sum), 8);
  out.close();
  if (!out) return false;
  std::filesystem::rename(tmp, path);
  return true;
}

bool load_pair_table(PairTable& T, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  PairHeader h{};
  in.read(reinterpret_cast<char*>(&h), sizeof h);
  if (!in || std::memcmp(h.magic, kPairMagic, 8) != 0 || h.version != kPairCacheVersion) return false;
  if (h.q != static_cast<uint32_t>(T.orth->F->q) || h.psi_a != T.psi_a || h.scale != static_cast<uint32_t>(T.scale) ||
      h.na != static_cast<uint32_t>(T.orth->num_classes()) || h.nb != static_cast<uint32_t>(T.sp->num_classes()) ||
      h.order_a != T.orth->order() || h.order_b != T.sp->order())
    return false;
  std::vector<cplx> v(static_cast<size_t>(h.na) * h.nb);
  in.read(reinterpret_cast<char*>(v.data()), v.size() * sizeof(cplx));
  uint64_t sum = 0;
  in.read(reinterpret_cast<char*>(&sum), 8);
  if (!in || sum != fnv(v.data(), v.size() * sizeof(cplx))) return false;
  T.val = std::move(v);
  T.from_cache = true;
  return true;
}

GateResult weil_gate(unsigned seed) {
  GateResult res;
  std::vector<int> ok(kWeilScaleCount, 1);
  std::mt19937 rng(seed);
  for (auto [q, dim] : {std::pair{3, 2}, {5, 2}, {3, 4}}) {
    FieldCtx F = make_field(q);
    FormedSpace V = standard_space(F, Tower::Sp, dim);
    GroupPtr G = realize(V, false, RealizeOptions{});
    auto [p1, p2] = psi_pair(F);
    for (const AddChar& psi : {p1, p2}) {
      WeilModel W(F, V.gram, psi);
      for (int c = 0; c < G->num_classes(); ++c) {
        cplx tr = W.matrix(G->rep(c)).trace();
        ++res.checked;
        for (int s = 0; s < kWeilScaleCount; ++s)
          if (std::abs(WeilCharacter(F, psi, s)(G->rep(c), V.gram) - tr) > 1e-7) ok[s] = 0;
      }
      std::uniform_int_distribution<uint64_t> pick(0, G->order() - 1);
      for (int t = 0; t < 8; ++t) {
        Mat a = G->element(pick(rng)), b = G->element(pick(rng));
        res.worst_model_error = std::max(res.worst_model_error, max_abs_diff(W.matrix(mul(F, a, b)), W.matrix(a) * W.matrix(b)));
        Vec w = vector_at(F, dim, static_cast<long long>(pick(rng) % count_vectors(F, dim)));
        Elt tc = static_cast<Elt>(pick(rng) % q);
        CMat lhs = W.matrix(a) * W.heisenberg(w, tc) * adjoint(W.matrix(a));
        res.worst_model_error = std::max(res.worst_model_error, max_abs_diff(lhs, W.heisenberg(apply(F, a, w), tc)));
      }
    }
  }
  for (int s = 0; s < kWeilScaleCount; ++s)
    if (ok[s]) res.passing.push_back(s);
  return res;
}

}  // namespace fqt

#include "fqt/parabolic.hpp"

#include <numeric>

namespace fqt {

Levels flag_levels(const FormedSpace& V, const std::vector<int>& comp) {
  Levels lv;
  int r = static_cast<int>(comp.size());
  int L = std::accumulate(comp.begin(), comp.end(), 0);
  if (L > V.witt) throw std::invalid_argument("flag exceeds Witt index");
  lv.level.assign(V.dim, r);
  int o = 0;
  for (int i = 0; i < r; ++i) {
    for (int k = 0; k < comp[i]; ++k) {
      lv.level[o + k] = i;
      lv.level[V.dim - 1 - o - k] = 2 * r - i;
    }
    o += comp[i];
  }
  lv.count = 2 * r + 1;
  return lv;
}

std::vector<Mat> unipotent_radical(const FormedSpace& V, const Levels& lv) {
  const FieldCtx& F = *V.F;
  int n = V.dim;
  std::vector<std::pair<int, int>> vars;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (lv.level[i] < lv.level[j]) vars.push_back({i, j});
  int nv = static_cast<int>(vars.size());
  // X^T G + G X = 0, one equation per entry (a,b)
  Mat E(n * n, nv);
  for (int v = 0; v < nv; ++v) {
    auto [i, j] = vars[v];
    for (int b = 0; b < n; ++b) {
      int a = j;
      E(a * n + b, v) = F.add(E(a * n + b, v), V.gram(i, b));
    }
    for (int a = 0; a < n; ++a) {
      int b = j;
      E(a * n + b, v) = F.add(E(a * n + b, v), V.gram(a, i));
    }
  }
  Mat B = nv ? nullspace(F, E) : Mat(0, 0);
  int k = B.c;
  long long total = count_vectors(F, k);
  Elt half = F.half();
  Mat I = Mat::identity(n);
  std::vector<Mat> out;
  out.reserve(total);
  for (long long idx = 0; idx < total; ++idx) {
    Vec c = vector_at(F, k, idx);
    Mat X(n, n);
    for (int v = 0; v < nv; ++v) {
      Elt s = 0;
      for (int t = 0; t < k; ++t) s = F.add(s, F.mul(c[t], B(v, t)));
      X(vars[v].first, vars[v].second) = s;
    }
    Mat Xh = scale(F, half, X);
    out.push_back(mul(F, add(F, I, Xh), inverse_or_throw(F, sub(F, I, Xh))));
  }
  return out;
}

int Parabolic::block_start(int i) const {
  int o = 0;
  for (int k = 0; k < i; ++k) o += comp[k];
  return o;
}

namespace {

// d = A^{-1} a^{-T} A for the pairing A between an e-block and its dual block
Mat dual_block(const FieldCtx& F, const Mat& gram, int start, int size, const Mat& a) {
  int n = gram.r;
  Mat A(size, size);
  for (int r = 0; r < size; ++r)
    for (int s = 0; s < size; ++s) A(r, s) = gram(start + r, n - start - size + s);
  Mat ainvT = transpose(inverse_or_throw(F, a));
  return mul(F, mul(F, inverse_or_throw(F, A), ainvT), A);
}

void put_block(Mat& M, int r0, const Mat& B) {
  for (int i = 0; i < B.r; ++i)
    for (int j = 0; j < B.c; ++j) M(r0 + i, r0 + j) = B(i, j);
}

// embeds a in GL_L on the first L basis vectors (identity elsewhere)
Mat gl_embed(const FormedSpace& V, const Mat& a) {
  Mat M = Mat::identity(V.dim);
  put_block(M, 0, a);
  put_block(M, V.dim - a.r, dual_block(*V.F, V.gram, 0, a.r, a));
  return M;
}

}  // namespace

Mat Parabolic::levi_embed(const std::vector<Mat>& gl_blocks, const Mat& h) const {
  const FormedSpace& V = G->space;
  const FieldCtx& F = *V.F;
  Mat M = Mat::identity(V.dim);
  for (size_t i = 0; i < comp.size(); ++i) {
    int o = block_start(static_cast<int>(i));
    const Mat& a = gl_blocks[i];
    put_block(M, o, a);
    put_block(M, V.dim - o - comp[i], dual_block(F, V.gram, o, comp[i], a));
  }
  if (h.r) put_block(M, L, h);
  return M;
}

Mat Parabolic::levi_part(const Mat& p) const {
  Mat M(p.r, p.c);
  for (int i = 0; i < p.r; ++i)
    for (int j = 0; j < p.c; ++j)
      if (lv.level[i] == lv.level[j]) M(i, j) = p(i, j);
  return M;
}

Mat Parabolic::gl_block(const Mat& m, int i) const {
  int o = block_start(i);
  return submatrix(m, o, o, comp[i], comp[i]);
}

Mat Parabolic::complement_block(const Mat& m) const { return submatrix(m, L, L, complement.dim, complement.dim); }

Parabolic parabolic(GroupPtr G, std::vector<int> comp) {
  Parabolic P;
  P.G = G;
  P.comp = std::move(comp);
  P.L = std::accumulate(P.comp.begin(), P.comp.end(), 0);
  const FormedSpace& V = G->space;
  if (P.L > V.witt) throw std::invalid_argument("parabolic flag exceeds Witt index");
  P.lv = flag_levels(V, P.comp);
  P.complement = standard_space(*V.F, V.tower, V.dim - 2 * P.L);
  P.N = unipotent_radical(V, P.lv);
  return P;
}

std::vector<Mat> gl_elements(const FieldCtx& F, int k) {
  std::vector<Mat> out;
  long long total = count_vectors(F, k * k);
  for (long long i = 0; i < total; ++i) {
    Vec v = vector_at(F, k * k, i);
    Mat a(k, k);
    a.a = v;
    if (det(F, a) != 0) out.push_back(a);
  }
  return out;
}

std::vector<Mat> levi_elements(const Parabolic& P, const Group& H) {
  const FieldCtx& F = *P.G->F;
  std::vector<std::vector<Mat>> gls;
  for (int c : P.comp) gls.push_back(gl_elements(F, c));
  std::vector<Mat> out;
  std::vector<size_t> idx(gls.size(), 0);
  while (true) {
    std::vector<Mat> blocks;
    for (size_t i = 0; i < gls.size(); ++i) blocks.push_back(gls[i][idx[i]]);
    for (uint64_t h = 0; h < H.order(); ++h) out.push_back(P.levi_embed(blocks, H.n ? H.element(h) : Mat()));
    size_t i = 0;
    while (i < gls.size() && ++idx[i] == gls[i].size()) idx[i++] = 0;
    if (i == gls.size()) break;
  }
  return out;
}

Mat BesselData::embed(const Mat& h) const {
  const FieldCtx& F = *P.G->F;
  int c = P.complement.dim;
  Mat hw = Mat::identity(c);
  for (int i = 0; i < h.r; ++i)
    for (int j = 0; j < h.c; ++j) hw(i, j) = h(i, j);
  Mat hc = mul(F, mul(F, C, hw), Cinv);
  std::vector<Mat> ones(P.comp.size(), Mat::identity(1));
  return P.levi_embed(ones, hc);
}

BesselData bessel_data(GroupPtr G, int ell, SquareClass v0_class, const AddChar& psi, const Realizer& realize_w,
                       int representative) {
  const FormedSpace& V = G->space;
  const FieldCtx& F = *V.F;
  BesselData B;
  B.D = flag_decomposition(V, ell, v0_class, representative);
  B.P = parabolic(G, std::vector<int>(ell, 1));
  B.OW = realize_w(*B.D.W);
  int c = B.D.complement.dim;
  B.C = Mat(c, c);
  for (int j = 0; j < c - 1; ++j)
    for (int i = 0; i < c; ++i) B.C(i, j) = B.D.W_basis(i, j);
  for (int i = 0; i < c; ++i) B.C(i, c - 1) = (*B.D.v0)[i];
  B.Cinv = inverse_or_throw(F, B.C);
  const Vec& v0 = *B.D.v0;
  for (const Mat& n : B.P.N) {
    Elt s = 0;
    for (int i = 0; i + 1 < ell; ++i) s = F.add(s, n(i, i + 1));
    if (ell > 0)
      for (int j = 0; j < c; ++j) s = F.add(s, F.mul(n(ell - 1, ell + j), v0[j]));
    B.nu.push_back(psi(s));
  }
  return B;
}

HeisenbergPoint heis_mul(const FieldCtx& F, const Mat& omega, const HeisenbergPoint& a, const HeisenbergPoint& b) {
  HeisenbergPoint r;
  r.w.resize(a.w.size());
  for (size_t i = 0; i < a.w.size(); ++i) r.w[i] = F.add(a.w[i], b.w[i]);
  r.t = F.add(F.add(a.t, b.t), F.mul(F.half(), bilinear(F, omega, a.w, b.w)));
  return r;
}

Mat FJData::embed(const Mat& h) const {
  std::vector<Mat> ones(P.comp.size(), Mat::identity(1));
  return P.levi_embed(ones, h);
}

FJData fj_data(GroupPtr G, int ell, const AddChar& psi, const Realizer& realize_w) {
  const FormedSpace& V = G->space;
  const FieldCtx& F = *V.F;
  if (!V.symplectic()) throw std::invalid_argument("Fourier-Jacobi data needs a symplectic group");
  FJData D;
  D.P = parabolic(G, std::vector<int>(ell, 1));
  D.SpSmall = realize_w(D.P.complement);
  int c = D.P.complement.dim, n = V.dim;
  Mat omegaT = transpose(D.P.complement.gram);
  Elt half = F.half();
  for (const Mat& m : D.P.N) {
    Elt s = 0;
    for (int i = 0; i + 1 < ell; ++i) s = F.add(s, m(i, i + 1));
    D.psi_ell.push_back(psi(s));
    HeisenbergPoint hp;
    hp.w.assign(c, 0);
    hp.t = 0;
    if (ell > 0) {
      Mat z = submatrix(m, 0, 0, ell, ell);
      Mat np = mul(F, inverse_or_throw(F, gl_embed(V, z)), m);
      Mat y(c, 1);
      for (int j = 0; j < c; ++j) y(j, 0) = np(ell - 1, ell + j);
      // w with (w, v) = y(v) for all v: Omega^T w = y
      Mat w = c ? mul(F, inverse_or_throw(F, omegaT), y) : Mat(0, 1);
      Elt yw = 0;
      for (int j = 0; j < c; ++j) {
        hp.w[j] = w(j, 0);
        yw = F.add(yw, F.mul(y(j, 0), w(j, 0)));
      }
      Elt x = np(ell - 1, n - ell);
      hp.t = F.mul(half, F.sub(x, F.mul(half, yw)));
    }
    D.heis.push_back(hp);
  }
  return D;
}

}  // namespace fqt

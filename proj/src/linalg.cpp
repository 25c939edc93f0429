#include "fqt/linalg.hpp"

#include <stdexcept>

namespace fqt {

Mat Mat::identity(int n) {
  Mat I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1;
  return I;
}

Mat mul(const FieldCtx& F, const Mat& A, const Mat& B) {
  if (A.c != B.r) throw std::invalid_argument("mul: shape");
  Mat C(A.r, B.c);
  if (F.is_prime()) {
    for (int i = 0; i < A.r; ++i)
      for (int j = 0; j < B.c; ++j) {
        int s = 0;
        for (int k = 0; k < A.c; ++k) s += A(i, k) * B(k, j);
        C(i, j) = static_cast<Elt>(s % F.p);
      }
    return C;
  }
  for (int i = 0; i < A.r; ++i)
    for (int j = 0; j < B.c; ++j) {
      Elt s = 0;
      for (int k = 0; k < A.c; ++k) s = F.add(s, F.mul(A(i, k), B(k, j)));
      C(i, j) = s;
    }
  return C;
}

Vec apply(const FieldCtx& F, const Mat& A, const Vec& v) {
  Vec out(A.r, 0);
  for (int i = 0; i < A.r; ++i) {
    Elt s = 0;
    for (int k = 0; k < A.c; ++k) s = F.add(s, F.mul(A(i, k), v[k]));
    out[i] = s;
  }
  return out;
}

Mat add(const FieldCtx& F, const Mat& A, const Mat& B) {
  Mat C(A.r, A.c);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = F.add(A.a[i], B.a[i]);
  return C;
}

Mat sub(const FieldCtx& F, const Mat& A, const Mat& B) {
  Mat C(A.r, A.c);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = F.sub(A.a[i], B.a[i]);
  return C;
}

Mat scale(const FieldCtx& F, Elt s, const Mat& A) {
  Mat C(A.r, A.c);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = F.mul(s, A.a[i]);
  return C;
}

Mat transpose(const Mat& A) {
  Mat T(A.c, A.r);
  for (int i = 0; i < A.r; ++i)
    for (int j = 0; j < A.c; ++j) T(j, i) = A(i, j);
  return T;
}

Mat kron(const FieldCtx& F, const Mat& A, const Mat& B) {
  Mat K(A.r * B.r, A.c * B.c);
  for (int i = 0; i < A.r; ++i)
    for (int j = 0; j < A.c; ++j)
      for (int k = 0; k < B.r; ++k)
        for (int l = 0; l < B.c; ++l) K(i * B.r + k, j * B.c + l) = F.mul(A(i, j), B(k, l));
  return K;
}

Mat block_diag(const std::vector<Mat>& blocks) {
  int n = 0;
  for (auto& b : blocks) n += b.r;
  Mat M(n, n);
  int o = 0;
  for (auto& b : blocks) {
    for (int i = 0; i < b.r; ++i)
      for (int j = 0; j < b.c; ++j) M(o + i, o + j) = b(i, j);
    o += b.r;
  }
  return M;
}

Mat submatrix(const Mat& A, int r0, int c0, int rows, int cols) {
  Mat S(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) S(i, j) = A(r0 + i, c0 + j);
  return S;
}

namespace {

// In-place row echelon form; returns pivot columns.  Optionally tracks det.
std::vector<int> echelon(const FieldCtx& F, Mat& A, Elt* det_out = nullptr) {
  std::vector<int> piv;
  Elt d = 1;
  int row = 0;
  for (int col = 0; col < A.c && row < A.r; ++col) {
    int sel = -1;
    for (int i = row; i < A.r; ++i)
      if (A(i, col)) { sel = i; break; }
    if (sel < 0) { d = 0; continue; }
    if (sel != row) {
      for (int j = 0; j < A.c; ++j) std::swap(A(sel, j), A(row, j));
      d = F.neg(d);
    }
    Elt pv = A(row, col);
    d = F.mul(d, pv);
    Elt ip = F.inv(pv);
    for (int j = 0; j < A.c; ++j) A(row, j) = F.mul(A(row, j), ip);
    for (int i = 0; i < A.r; ++i) {
      if (i == row || !A(i, col)) continue;
      Elt f = A(i, col);
      for (int j = 0; j < A.c; ++j) A(i, j) = F.sub(A(i, j), F.mul(f, A(row, j)));
    }
    piv.push_back(col);
    ++row;
  }
  if (det_out) *det_out = (static_cast<int>(piv.size()) == A.r && A.r == A.c) ? d : Elt{0};
  return piv;
}

}  // namespace

Elt det(const FieldCtx& F, Mat A) {
  if (A.r != A.c) throw std::invalid_argument("det: not square");
  Elt d = 0;
  echelon(F, A, &d);
  return d;
}

int rank(const FieldCtx& F, Mat A) { return static_cast<int>(echelon(F, A).size()); }

std::vector<int> pivot_columns(const FieldCtx& F, Mat A) { return echelon(F, A); }

std::optional<Mat> inverse(const FieldCtx& F, const Mat& A) {
  int n = A.r;
  if (n == 0) return Mat(0, 0);
  Mat M(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) M(i, j) = A(i, j);
    M(i, n + i) = 1;
  }
  auto piv = echelon(F, M);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) return std::nullopt;
  return submatrix(M, 0, n, n, n);
}

Mat inverse_or_throw(const FieldCtx& F, const Mat& A) {
  auto r = inverse(F, A);
  if (!r) throw std::domain_error("singular matrix");
  return *r;
}

Mat nullspace(const FieldCtx& F, Mat A) {
  auto piv = echelon(F, A);
  std::vector<char> is_piv(A.c, 0);
  for (int p : piv) is_piv[p] = 1;
  std::vector<int> free;
  for (int j = 0; j < A.c; ++j)
    if (!is_piv[j]) free.push_back(j);
  Mat N(A.c, static_cast<int>(free.size()));
  for (size_t k = 0; k < free.size(); ++k) {
    int fj = free[k];
    N(fj, static_cast<int>(k)) = 1;
    for (size_t i = 0; i < piv.size(); ++i) N(piv[i], static_cast<int>(k)) = F.neg(A(static_cast<int>(i), fj));
  }
  return N;
}

Elt bilinear(const FieldCtx& F, const Mat& G, const Vec& u, const Vec& w) {
  Elt s = 0;
  for (int i = 0; i < G.r; ++i) {
    if (!u[i]) continue;
    Elt t = 0;
    for (int j = 0; j < G.c; ++j) t = F.add(t, F.mul(G(i, j), w[j]));
    s = F.add(s, F.mul(u[i], t));
  }
  return s;
}

long long count_vectors(const FieldCtx& F, int n) {
  long long c = 1;
  for (int i = 0; i < n; ++i) c *= F.q;
  return c;
}

Vec vector_at(const FieldCtx& F, int n, long long i) {
  Vec v(n);
  for (int k = 0; k < n; ++k) { v[k] = static_cast<Elt>(i % F.q); i /= F.q; }
  return v;
}

}  // namespace fqt

#pragma once

#include <optional>
#include <vector>

#include "fqt/field.hpp"

namespace fqt {

// Dense matrix over F_q, row-major.
struct Mat {
  int r = 0, c = 0;
  std::vector<Elt> a;

  Mat() = default;
  Mat(int rows, int cols) : r(rows), c(cols), a(static_cast<size_t>(rows) * cols, 0) {}
  Elt& operator()(int i, int j) { return a[static_cast<size_t>(i) * c + j]; }
  Elt operator()(int i, int j) const { return a[static_cast<size_t>(i) * c + j]; }
  bool operator==(const Mat&) const = default;

  static Mat identity(int n);
};

using Vec = std::vector<Elt>;

Mat mul(const FieldCtx& F, const Mat& A, const Mat& B);
Vec apply(const FieldCtx& F, const Mat& A, const Vec& v);
Mat add(const FieldCtx& F, const Mat& A, const Mat& B);
Mat sub(const FieldCtx& F, const Mat& A, const Mat& B);
Mat scale(const FieldCtx& F, Elt s, const Mat& A);
Mat transpose(const Mat& A);
Mat kron(const FieldCtx& F, const Mat& A, const Mat& B);
Mat block_diag(const std::vector<Mat>& blocks);
Mat submatrix(const Mat& A, int r0, int c0, int rows, int cols);

Elt det(const FieldCtx& F, Mat A);
int rank(const FieldCtx& F, Mat A);
std::optional<Mat> inverse(const FieldCtx& F, const Mat& A);
Mat inverse_or_throw(const FieldCtx& F, const Mat& A);

// basis of {x : A x = 0}, as columns of the returned matrix
Mat nullspace(const FieldCtx& F, Mat A);
// indices of pivot columns of A (a maximal independent set of columns)
std::vector<int> pivot_columns(const FieldCtx& F, Mat A);

// u^T G w
Elt bilinear(const FieldCtx& F, const Mat& G, const Vec& u, const Vec& w);

// Decode the i-th vector of F_q^n in canonical enumeration (first coordinate fastest).
Vec vector_at(const FieldCtx& F, int n, long long i);
long long count_vectors(const FieldCtx& F, int n);

}  // namespace fqt

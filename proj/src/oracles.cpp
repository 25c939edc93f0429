#include "fqt/oracles.hpp"

#include <map>
#include <set>

namespace fqt::oracle {

EMat to_eigen(const CMat& m) {
  EMat A(m.n, m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) A(i, j) = m(i, j);
  return A;
}

int numeric_rank(const EMat& A, double tol) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<EMat> svd(A);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) r += svd.singularValues()(i) > tol;
  return r;
}

EMat projector(const std::vector<EMat>& mats, const std::vector<cplx>& chi, double dim) {
  EMat P = EMat::Zero(mats.at(0).rows(), mats.at(0).cols());
  for (size_t i = 0; i < mats.size(); ++i) P += std::conj(chi[i]) * mats[i];
  return P * (dim / static_cast<double>(mats.size()));
}

EMat image_basis(const EMat& P, double tol) {
  Eigen::JacobiSVD<EMat> svd(P, Eigen::ComputeThinU);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) r += svd.singularValues()(i) > tol;
  return svd.matrixU().leftCols(r);
}

namespace {
EMat ekron(const EMat& A, const EMat& B) {
  EMat K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}
}  // namespace

int hom_dimension(const std::vector<EMat>& A, const std::vector<EMat>& B) {
  if (A.size() != B.size() || A.empty()) throw std::invalid_argument("hom_dimension: generator lists differ");
  const Eigen::Index da = A[0].rows(), db = B[0].rows();
  // vec(X A) = (A^T (x) I) vec X, vec(B X) = (I (x) B) vec X, column-major
  EMat S(static_cast<Eigen::Index>(A.size()) * da * db, da * db);
  EMat Ib = EMat::Identity(db, db), Ia = EMat::Identity(da, da);
  for (size_t g = 0; g < A.size(); ++g) {
    EMat K = ekron(A[g].transpose(), Ib) - ekron(Ia, B[g]);
    S.middleRows(static_cast<Eigen::Index>(g) * da * db, da * db) = K;
  }
  return static_cast<int>(da * db) - numeric_rank(S);
}

unsigned long long count_isometries(const FieldCtx& F, const Mat& gram) {
  const int n = gram.r;
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= F.q;
  std::vector<Vec> all;
  for (long long i = 0; i < total; ++i) all.push_back(vector_at(F, n, i));
  // column j of M must satisfy (M e_i, M e_j) = G_ij for i <= j
  std::vector<const Vec*> cols(n);
  unsigned long long count = 0;
  auto rec = [&](auto&& self, int j) -> void {
    if (j == n) {
      ++count;
      return;
    }
    for (const Vec& v : all) {
      bool ok = true;
      for (int i = 0; i <= j && ok; ++i) ok = bilinear(F, gram, i == j ? v : *cols[i], v) == gram(i, j);
      if (!ok) continue;
      cols[j] = &v;
      self(self, j + 1);
    }
  };
  rec(rec, 0);
  return count;
}

int count_classes(const FieldCtx& F, const std::vector<Mat>& elems) {
  std::set<std::vector<Elt>> seen;
  int classes = 0;
  for (const Mat& x : elems) {
    if (seen.count(x.a)) continue;
    ++classes;
    for (const Mat& g : elems) seen.insert(mul(F, mul(F, g, x), inverse_or_throw(F, g)).a);
  }
  return classes;
}

PairModel::PairModel(const FieldCtx& F, GroupPtr o, GroupPtr s, const AddChar& psi, long long carrier_bound)
    : orth(std::move(o)), sp(std::move(s)), W(F, kron(F, orth->space.gram, sp->space.gram), psi, carrier_bound), F_(&F) {}

EMat PairModel::orth_matrix(const Mat& g) const { return to_eigen(W.matrix(kron(*F_, g, Mat::identity(sp->n)))); }
EMat PairModel::sp_matrix(const Mat& h) const { return to_eigen(W.matrix(kron(*F_, Mat::identity(orth->n), h))); }

namespace {

cplx trace_product(const EMat& P, const EMat& M) { return P.transpose().cwiseProduct(M).sum(); }

std::vector<EMat> all_matrices(const Group& G, const std::function<EMat(const Mat&)>& f) {
  std::vector<EMat> out;
  out.reserve(G.order());
  for (uint64_t i = 0; i < G.order(); ++i) out.push_back(f(G.element(i)));
  return out;
}

std::vector<cplx> values(const ClassFunction& chi) {
  std::vector<cplx> v;
  for (uint64_t i = 0; i < chi.G->order(); ++i) v.push_back(chi.v[chi.G->cls[i]]);
  return v;
}

double dim_of(const ClassFunction& chi) { return chi.v[chi.G->cls[0]].real(); }

IsotypicResult isotypic(const EMat& P, double dim, const Group& other, const std::function<EMat(const Mat&)>& f) {
  IsotypicResult r;
  r.rank = numeric_rank(P);
  for (int c = 0; c < other.num_classes(); ++c) r.traces.push_back(trace_product(P, f(other.rep(c))) / dim);
  return r;
}

}  // namespace

IsotypicResult isotypic_on_orth_factor(const PairModel& M, const ClassFunction& chi_orth) {
  auto om = [&](const Mat& g) { return M.orth_matrix(g); };
  auto sm = [&](const Mat& h) { return M.sp_matrix(h); };
  EMat P = projector(all_matrices(*M.orth, om), values(chi_orth), dim_of(chi_orth));
  return isotypic(P, dim_of(chi_orth), *M.sp, sm);
}

IsotypicResult isotypic_on_sp_factor(const PairModel& M, const ClassFunction& chi_sp) {
  auto om = [&](const Mat& g) { return M.orth_matrix(g); };
  auto sm = [&](const Mat& h) { return M.sp_matrix(h); };
  EMat P = projector(all_matrices(*M.sp, sm), values(chi_sp), dim_of(chi_sp));
  return isotypic(P, dim_of(chi_sp), *M.orth, om);
}

long long pair_multiplicity(const PairModel& M, const ClassFunction& r_sp, const ClassFunction& c_orth) {
  auto om = [&](const Mat& g) { return M.orth_matrix(g); };
  auto sm = [&](const Mat& h) { return M.sp_matrix(h); };
  EMat P = projector(all_matrices(*M.sp, sm), values(r_sp), dim_of(r_sp)) *
           projector(all_matrices(*M.orth, om), values(c_orth), dim_of(c_orth));
  double d = dim_of(r_sp) * dim_of(c_orth);
  double m = numeric_rank(P) / d;
  long long r = std::llround(m);
  if (std::abs(m - r) > 1e-9) throw NumericError("pair_multiplicity: rank not divisible by dimension");
  return r;
}

}  // namespace fqt::oracle

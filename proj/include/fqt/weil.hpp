#pragma once

#include <string>
#include <vector>

#include "fqt/group.hpp"

namespace fqt {

// Dense complex matrix, row-major.
struct CMat {
  int n = 0;
  std::vector<cplx> a;
  CMat() = default;
  explicit CMat(int size) : n(size), a(static_cast<size_t>(size) * size, 0.0) {}
  cplx& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  cplx operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
  static CMat identity(int size);
  cplx trace() const;
};
CMat operator*(const CMat& A, const CMat& B);
CMat adjoint(const CMat& A);
double max_abs_diff(const CMat& A, const CMat& B);

// Columns T with T^T omega T = [[0, I], [-I, 0]] for an alternating nondegenerate omega.
Mat symplectic_basis(const FieldCtx& F, const Mat& omega);

// Schrodinger model of the Weil representation of Sp(omega) attached to psi,
// on functions F_q^N -> C.  Heisenberg law (w,t)(w',t') = (w+w', t+t'+<w,w'>/2).
class WeilModel {
 public:
  WeilModel(const FieldCtx& F, const Mat& omega, const AddChar& psi, long long carrier_bound = 4096);
  int N = 0;
  int dim() const { return size_; }
  CMat matrix(const Mat& g) const;                // g preserves omega
  CMat heisenberg(const Vec& w, Elt t) const;     // w in omega coordinates
  cplx c1() const { return c1_; }
  CMat parity() const;  // f(u) -> f(-u), the image of -1 in O_1 up to chi(-1)

 private:
  const FieldCtx* F_;
  Mat omega_, T_, Tinv_;
  AddChar psi_;
  int size_ = 1;
  cplx c1_;
  std::vector<Vec> pts_;

  CMat m_of(const Mat& A) const;
  CMat lower_of(const Mat& C) const;  // [[I,0],[C,I]]
  CMat weyl(const std::vector<int>& S) const;
  int index(const Vec& u) const;
};

// Closed-form Weil character: q^{d/2} gamma^r chi(det(c B)), d = dim ker(g-1),
// r = rank(g-1), B the form beta((g-1)y, x) = <y, x> on the image of g-1.  The scalar c is a
// convention among kWeilScales, selected once by weil_gate().
inline constexpr int kWeilScaleCount = 6;
extern const char* const kWeilScaleNames[kWeilScaleCount];
inline constexpr int kWeilScale = 3;  // c = -2; -1/2 agrees with it on every square class

class WeilCharacter {
 public:
  WeilCharacter(const FieldCtx& F, const AddChar& psi, int scale = kWeilScale);
  cplx operator()(const Mat& g, const Mat& omega) const;
  // character of the pair (g on an orthogonal space with Gram BV, h symplectic with Gram J)
  cplx pair(const Mat& g, const Mat& BV, const Mat& h, const Mat& J) const;
  int scale() const { return scale_; }
  const AddChar& psi() const { return psi_; }
  cplx gamma() const { return gamma_; }

 private:
  const FieldCtx* F_;
  AddChar psi_;
  int scale_;
  Elt c_;
  cplx gamma_;
};

// Restriction of the Weil character to a dual pair: values chi(g (x) h) on class pairs,
// the orthogonal factor first.
struct PairTable {
  GroupPtr orth, sp;
  Elt psi_a = 1;
  int scale = kWeilScale;
  std::vector<cplx> val;  // [orth class * sp classes + sp class]
  bool from_cache = false;
  cplx operator()(int a, int b) const { return val[static_cast<size_t>(a) * sp->num_classes() + b]; }
};

// G and H in either order; throws ConfigError if both have the same kind
PairTable dual_pair_restrict(const WeilCharacter& chi, GroupPtr G, GroupPtr H, int threads = 1);

constexpr uint32_t kPairCacheVersion = 1;
std::string pair_cache_name(const Group& orth, const Group& sp, Elt psi_a, int scale);
bool save_pair_table(const PairTable& T, const std::string& path);
// fills T.val from the file if it matches T's groups, psi and scale
bool load_pair_table(PairTable& T, const std::string& path);

struct GateResult {
  std::vector<int> passing;  // scale indices agreeing with the model everywhere checked
  int checked = 0;           // number of (group, psi, class) comparisons
  double worst_model_error = 0;  // homomorphism defect of the explicit model
};

// Compares every convention against explicit traces on all classes of Sp_2(3), Sp_2(5)
// and Sp_4(3), for both additive-character classes, and checks the model is a
// representation on random pairs.
GateResult weil_gate(unsigned seed = 1);

}  // namespace fqt

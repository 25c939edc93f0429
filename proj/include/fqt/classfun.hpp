#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fqt/parabolic.hpp"

namespace fqt {

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// rounds to the nearest integer, asserting |x - round| < 1e-6 and a negligible imaginary part
long long round_checked(cplx x, const std::string& what);

struct ClassFunction {
  GroupPtr G;
  std::vector<cplx> v;
  std::string label;

  ClassFunction() = default;
  ClassFunction(GroupPtr g, std::string l = {}) : G(std::move(g)), v(G->num_classes(), 0.0), label(std::move(l)) {}
  cplx operator[](int c) const { return v[c]; }
  cplx at(const Mat& g) const { return v[G->class_of(g)]; }
  cplx at_identity() const { return v[G->cls[0]]; }
  long long degree() const { return round_checked(at_identity(), label + " degree"); }
  bool is_zero(double tol = 1e-6) const;
};

ClassFunction operator+(const ClassFunction& a, const ClassFunction& b);
ClassFunction operator-(const ClassFunction& a, const ClassFunction& b);
ClassFunction operator*(const ClassFunction& a, const ClassFunction& b);
ClassFunction operator*(cplx s, const ClassFunction& a);
ClassFunction conj(const ClassFunction& a);

ClassFunction trivial(GroupPtr G);
ClassFunction determinant_char(GroupPtr G);  // sgn = det on orthogonal groups
ClassFunction regular(GroupPtr G);
ClassFunction from_function(GroupPtr G, const std::function<cplx(const Mat&)>& f, const std::string& label = {});

// (1/|G|) sum_g f(g) conj(h(g))
cplx inner_raw(const ClassFunction& f, const ClassFunction& h);
long long inner(const ClassFunction& f, const ClassFunction& h);
// inner product over the determinant-one classes only, normalised by |G|/2
cplx inner_special_raw(const ClassFunction& f, const ClassFunction& h);
long long inner_special(const ClassFunction& f, const ClassFunction& h);

struct Decomposition {
  std::vector<long long> mult;
  long long residual = 0;  // <f,f> - sum m_i^2
};
Decomposition decompose(const ClassFunction& f, const std::vector<ClassFunction>& candidates);

// Ind_P^G of delta inflated across N.  delta is evaluated on Levi elements.
ClassFunction induce_parabolic(const Parabolic& P, const Group& complement_group,
                               const std::function<cplx(const Mat&)>& delta, const std::string& label = {});

// (1/|N|) sum_n conj(chi(n)) pi(l n)
cplx jacquet_value(const ClassFunction& pi, const std::vector<Mat>& N, const std::vector<cplx>* chi, const Mat& l);

// Twisted Jacquet module as a class function on a subgroup realized separately,
// embedded into pi's group by `embed`.  Checks that the subgroup fixes chi.
ClassFunction jacquet_twisted(const ClassFunction& pi, const std::vector<Mat>& N, const std::vector<cplx>* chi,
                              GroupPtr L, const std::function<Mat(const Mat&)>& embed, const std::string& label = {});

// vanishing of every proper maximal-parabolic Jacquet module
bool is_cuspidal(const ClassFunction& pi);

// Complete irreducible characters of O_1 and O_2^{+-}.
std::vector<ClassFunction> irr_small(GroupPtr G);

// Multiplicative characters of F_q^x: tau_k(g^j) = exp(2 pi i k j / (q-1)), g the least primitive root.
struct MultChar {
  const FieldCtx* F = nullptr;
  int k = 0;
  std::vector<cplx> val;  // indexed by field element
  cplx operator()(Elt a) const { return val[a]; }
  bool selfdual() const;
};
MultChar mult_char(const FieldCtx& F, int k);
Elt primitive_root(const FieldCtx& F);
MultChar legendre_char(const FieldCtx& F);

// Characters of GL_2(F_q), evaluated on matrices.
// Cuspidal: from a character theta(x) = exp(2 pi i m log x / (q^2-1)) of F_{q^2}^x with theta^q != theta.
std::function<cplx(const Mat&)> gl2_cuspidal(const FieldCtx& F, int m);
// Principal series Ind(t1 x t2) (irreducible when t1 != t2)
std::function<cplx(const Mat&)> gl2_principal(const MultChar& t1, const MultChar& t2);

}  // namespace fqt

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fqt {

using cplx = std::complex<double>;
using Elt = std::uint8_t;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite field F_q, q odd, stored as full operation tables.
// Prime fields use residues 0..p-1.  For q = p^f, f > 1, an element
// c_0 + c_1 t + ... + c_{f-1} t^{f-1} is coded as sum c_i p^i, with t a
// root of the first monic irreducible polynomial found in coefficient order.
class FieldCtx {
 public:
  int q = 0, p = 0, f = 0;
  std::vector<int> modulus;  // low coefficients of the defining polynomial

  Elt add(Elt a, Elt b) const { return add_[a * q + b]; }
  Elt sub(Elt a, Elt b) const { return add_[a * q + neg_[b]]; }
  Elt mul(Elt a, Elt b) const { return mul_[a * q + b]; }
  Elt neg(Elt a) const { return neg_[a]; }
  Elt inv(Elt a) const;
  Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }
  Elt from_int(long long v) const;  // image of an integer in the prime field
  int trace(Elt a) const { return trace_[a]; }  // Tr to F_p, as 0..p-1
  int legendre(Elt a) const { return leg_[a]; }
  bool is_prime() const { return f == 1; }
  Elt half() const { return inv(from_int(2)); }
  std::vector<Elt> elements() const;

  // exhaustive axiom check; throws on failure
  void self_check() const;

 private:
  friend FieldCtx make_field(int, int);
  std::vector<Elt> add_, mul_, neg_, inv_;
  std::vector<int> trace_;
  std::vector<signed char> leg_;
};

FieldCtx make_field(int q, int bound = 9);

inline int legendre(const FieldCtx& F, Elt x) { return F.legendre(x); }

// Square class in F_q^x / (F_q^x)^2, written as +1 / -1.
struct SquareClass {
  int s = 1;
  SquareClass() = default;
  constexpr explicit SquareClass(int v) : s(v >= 0 ? 1 : -1) {}
  SquareClass operator*(SquareClass o) const { return SquareClass(s * o.s); }
  bool operator==(const SquareClass&) const = default;
  char sign() const { return s > 0 ? '+' : '-'; }
};

inline SquareClass class_of(const FieldCtx& F, Elt a) {
  if (a == 0) throw std::invalid_argument("square class of 0");
  return SquareClass(F.legendre(a));
}
inline SquareClass eps_k(int k) { return SquareClass(k % 2 == 0 ? 1 : -1); }
SquareClass eps_minus_one(const FieldCtx& F);

// least non-square in canonical element order
Elt least_nonsquare(const FieldCtx& F);

// psi_a(x) = exp(2 pi i Tr(a x) / p)
class AddChar {
 public:
  AddChar() = default;
  AddChar(const FieldCtx& F, Elt a);
  cplx operator()(Elt x) const { return tab_[x]; }
  Elt a() const { return a_; }
  SquareClass cls() const { return cls_; }
  const std::vector<cplx>& table() const { return tab_; }

 private:
  Elt a_ = 1;
  SquareClass cls_;
  std::vector<cplx> tab_;
};

std::pair<AddChar, AddChar> psi_pair(const FieldCtx& F);

// twist parameter for a square class: 1 for +, least non-square for -
Elt class_rep(const FieldCtx& F, SquareClass c);

}  // namespace fqt

#include "fqt/field.hpp"

#include <cmath>
#include <numbers>

namespace fqt {

namespace {

bool prime_power(int q, int& p, int& f) {
  if (q < 2) return false;
  p = 0;
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) { p = d; break; }
  if (p == 0) p = q;
  f = 0;
  int r = q;
  while (r % p == 0) { r /= p; ++f; }
  return r == 1;
}

// polynomial helpers over F_p on coefficient vectors, low degree first
std::vector<int> poly_mulmod(const std::vector<int>& a, const std::vector<int>& b,
                             const std::vector<int>& mod, int p) {
  int f = static_cast<int>(mod.size());
  std::vector<int> r(2 * f, 0);
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < f; ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  // t^f = -sum mod[i] t^i
  for (int d = 2 * f - 1; d >= f; --d) {
    int c = r[d];
    if (!c) continue;
    r[d] = 0;
    for (int i = 0; i < f; ++i) r[d - f + i] = ((r[d - f + i] - c * mod[i]) % p + p) % p;
  }
  r.resize(f);
  return r;
}

bool irreducible(const std::vector<int>& mod, int p) {
  // brute force: no root-free factorisation needed for f <= 3; test all monic
  // divisors of degree <= f/2 by checking that t^(p^k) - t has no common factor
  // via exhaustive product search on small sizes
  int f = static_cast<int>(mod.size());
  int total = 1;
  for (int i = 0; i < f; ++i) total *= p;
  // field test: every nonzero element has an inverse in F_p[t]/(mod)
  for (int x = 1; x < total; ++x) {
    std::vector<int> a(f);
    int v = x;
    for (int i = 0; i < f; ++i) { a[i] = v % p; v /= p; }
    bool found = false;
    for (int y = 1; y < total && !found; ++y) {
      std::vector<int> b(f);
      int w = y;
      for (int i = 0; i < f; ++i) { b[i] = w % p; w /= p; }
      auto c = poly_mulmod(a, b, mod, p);
      bool one = c[0] == 1;
      for (int i = 1; i < f && one; ++i) one = c[i] == 0;
      found = one;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

Elt FieldCtx::inv(Elt a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  return inv_[a];
}

Elt FieldCtx::from_int(long long v) const {
  long long r = ((v % p) + p) % p;
  return static_cast<Elt>(r);
}

std::vector<Elt> FieldCtx::elements() const {
  std::vector<Elt> e(q);
  for (int i = 0; i < q; ++i) e[i] = static_cast<Elt>(i);
  return e;
}

void FieldCtx::self_check() const {
  for (int a = 0; a < q; ++a) {
    if (add(a, 0) != a || mul(a, 1) != a) throw std::logic_error("field identity");
    if (add(a, neg(a)) != 0) throw std::logic_error("field negation");
    if (a && mul(a, inv(a)) != 1) throw std::logic_error("field inverse");
    for (int b = 0; b < q; ++b) {
      if (add(a, b) != add(b, a) || mul(a, b) != mul(b, a)) throw std::logic_error("commutativity");
      for (int c = 0; c < q; ++c) {
        if (add(add(a, b), c) != add(a, add(b, c))) throw std::logic_error("add assoc");
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) throw std::logic_error("mul assoc");
        if (mul(a, add(b, c)) != add(mul(a, b), mul(a, c))) throw std::logic_error("distributivity");
      }
      if ((trace(add(a, b)) - trace(a) - trace(b)) % p != 0) throw std::logic_error("trace additivity");
    }
  }
  bool onto = false;
  for (int a = 0; a < q; ++a) onto = onto || trace(a) != 0;
  if (!onto) throw std::logic_error("trace not surjective");
}

FieldCtx make_field(int q, int bound) {
  int p = 0, f = 0;
  if (q > bound) throw ConfigError("q = " + std::to_string(q) + " exceeds the field bound " + std::to_string(bound));
  if (!prime_power(q, p, f)) throw ConfigError("q = " + std::to_string(q) + " is not a prime power");
  if (p == 2) throw ConfigError("q = " + std::to_string(q) + " has characteristic 2");
  if (q > 255) throw ConfigError("q too large for byte elements");
  FieldCtx F;
  F.q = q; F.p = p; F.f = f;
  F.add_.assign(q * q, 0);
  F.mul_.assign(q * q, 0);
  F.neg_.assign(q, 0);
  F.inv_.assign(q, 0);
  F.trace_.assign(q, 0);
  F.leg_.assign(q, 0);

  auto digits = [&](int x) {
    std::vector<int> d(f);
    for (int i = 0; i < f; ++i) { d[i] = x % p; x /= p; }
    return d;
  };
  auto code = [&](const std::vector<int>& d) {
    int x = 0;
    for (int i = f - 1; i >= 0; --i) x = x * p + d[i];
    return x;
  };

  if (f == 1) {
    F.modulus = {0};
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) {
        F.add_[a * q + b] = static_cast<Elt>((a + b) % q);
        F.mul_[a * q + b] = static_cast<Elt>((a * b) % q);
      }
  } else {
    std::vector<int> mod(f, 0);
    int total = 1;
    for (int i = 0; i < f; ++i) total *= p;
    bool ok = false;
    for (int m = 0; m < total && !ok; ++m) {
      int v = m;
      for (int i = 0; i < f; ++i) { mod[i] = v % p; v /= p; }
      if (mod[0] != 0 && irreducible(mod, p)) ok = true;
    }
    if (!ok) throw std::logic_error("no irreducible polynomial");
    F.modulus = mod;
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) {
        auto da = digits(a), db = digits(b);
        std::vector<int> s(f);
        for (int i = 0; i < f; ++i) s[i] = (da[i] + db[i]) % p;
        F.add_[a * q + b] = static_cast<Elt>(code(s));
        F.mul_[a * q + b] = static_cast<Elt>(code(poly_mulmod(da, db, mod, p)));
      }
  }
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      if (F.add_[a * q + b] == 0) F.neg_[a] = static_cast<Elt>(b);
      if (F.mul_[a * q + b] == 1) F.inv_[a] = static_cast<Elt>(b);
    }
  }
  // trace: sum of Frobenius conjugates, lands in the prime field
  for (int a = 0; a < q; ++a) {
    int x = a, s = 0;
    for (int i = 0; i < f; ++i) {
      s = F.add_[s * q + x];
      int y = 1;
      for (int j = 0; j < p; ++j) y = F.mul_[y * q + x];
      x = y;
    }
    F.trace_[a] = s;  // codes below p are prime-field elements
  }
  std::vector<char> sq(q, 0);
  for (int a = 1; a < q; ++a) sq[F.mul_[a * q + a]] = 1;
  for (int a = 1; a < q; ++a) F.leg_[a] = sq[a] ? 1 : -1;
  F.self_check();
  return F;
}

SquareClass eps_minus_one(const FieldCtx& F) { return SquareClass(F.legendre(F.neg(1))); }

Elt least_nonsquare(const FieldCtx& F) {
  for (int a = 1; a < F.q; ++a)
    if (F.legendre(static_cast<Elt>(a)) < 0) return static_cast<Elt>(a);
  throw std::logic_error("no non-square");
}

Elt class_rep(const FieldCtx& F, SquareClass c) { return c.s > 0 ? Elt{1} : least_nonsquare(F); }

AddChar::AddChar(const FieldCtx& F, Elt a) : a_(a), cls_(class_of(F, a)), tab_(F.q) {
  for (int x = 0; x < F.q; ++x) {
    double t = 2.0 * std::numbers::pi * F.trace(F.mul(a, static_cast<Elt>(x))) / F.p;
    tab_[x] = cplx(std::cos(t), std::sin(t));
  }
}

std::pair<AddChar, AddChar> psi_pair(const FieldCtx& F) {
  return {AddChar(F, 1), AddChar(F, least_nonsquare(F))};
}

}  // namespace fqt

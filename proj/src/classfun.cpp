#include "fqt/classfun.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

namespace fqt {

long long round_checked(cplx x, const std::string& what) {
  double r = std::round(x.real());
  if (std::abs(x.real() - r) > 1e-6 || std::abs(x.imag()) > 1e-6) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: value %.9g%+.9gi is not an integer", what.c_str(), x.real(), x.imag());
    throw NumericError(buf);
  }
  return static_cast<long long>(r);
}

bool ClassFunction::is_zero(double tol) const {
  for (auto x : v)
    if (std::abs(x) > tol) return false;
  return true;
}

ClassFunction operator+(const ClassFunction& a, const ClassFunction& b) {
  ClassFunction r = a;
  for (size_t i = 0; i < r.v.size(); ++i) r.v[i] += b.v[i];
  return r;
}

ClassFunction operator-(const ClassFunction& a, const ClassFunction& b) {
  ClassFunction r = a;
  for (size_t i = 0; i < r.v.size(); ++i) r.v[i] -= b.v[i];
  return r;
}

ClassFunction operator*(const ClassFunction& a, const ClassFunction& b) {
  ClassFunction r = a;
  for (size_t i = 0; i < r.v.size(); ++i) r.v[i] *= b.v[i];
  r.label = a.label + "*" + b.label;
  return r;
}

ClassFunction operator*(cplx s, const ClassFunction& a) {
  ClassFunction r = a;
  for (auto& x : r.v) x *= s;
  return r;
}

ClassFunction conj(const ClassFunction& a) {
  ClassFunction r = a;
  for (auto& x : r.v) x = std::conj(x);
  return r;
}

ClassFunction trivial(GroupPtr G) {
  ClassFunction f(G, "triv");
  for (auto& x : f.v) x = 1;
  return f;
}

ClassFunction determinant_char(GroupPtr G) {
  ClassFunction f(G, "sgn");
  for (int c = 0; c < G->num_classes(); ++c) f.v[c] = G->rep_is_special(c) ? 1.0 : -1.0;
  return f;
}

ClassFunction regular(GroupPtr G) {
  ClassFunction f(G, "reg");
  f.v[G->cls[0]] = static_cast<double>(G->order());
  return f;
}

ClassFunction from_function(GroupPtr G, const std::function<cplx(const Mat&)>& fn, const std::string& label) {
  ClassFunction f(G, label);
  for (int c = 0; c < G->num_classes(); ++c) f.v[c] = fn(G->rep(c));
  return f;
}

cplx inner_raw(const ClassFunction& f, const ClassFunction& h) {
  if (f.G != h.G && f.G->name != h.G->name) throw std::invalid_argument("inner product across groups");
  cplx s = 0;
  for (size_t c = 0; c < f.v.size(); ++c) s += static_cast<double>(f.G->class_size[c]) * f.v[c] * std::conj(h.v[c]);
  return s / static_cast<double>(f.G->order());
}

long long inner(const ClassFunction& f, const ClassFunction& h) {
  return round_checked(inner_raw(f, h), "<" + f.label + ", " + h.label + ">");
}

cplx inner_special_raw(const ClassFunction& f, const ClassFunction& h) {
  cplx s = 0;
  uint64_t ord = 0;
  for (size_t c = 0; c < f.v.size(); ++c) {
    if (!f.G->rep_is_special(static_cast<int>(c))) continue;
    ord += f.G->class_size[c];
    s += static_cast<double>(f.G->class_size[c]) * f.v[c] * std::conj(h.v[c]);
  }
  return s / static_cast<double>(ord);
}

long long inner_special(const ClassFunction& f, const ClassFunction& h) {
  return round_checked(inner_special_raw(f, h), "<" + f.label + ", " + h.label + ">_SO");
}

Decomposition decompose(const ClassFunction& f, const std::vector<ClassFunction>& candidates) {
  Decomposition d;
  long long sq = 0;
  for (auto& c : candidates) {
    long long m = inner(f, c);
    if (m < 0) throw NumericError("negative multiplicity of " + c.label + " in " + f.label);
    d.mult.push_back(m);
    sq += m * m;
  }
  d.residual = (f.is_zero() ? 0 : inner(f, f)) - sq;
  return d;
}

ClassFunction induce_parabolic(const Parabolic& P, const Group& H, const std::function<cplx(const Mat&)>& delta,
                               const std::string& label) {
  const Group& G = *P.G;
  const FieldCtx& F = *G.F;
  auto L = levi_elements(P, H);
  std::vector<cplx> acc(G.num_classes(), 0.0);
  for (const Mat& m : L) {
    cplx d = delta(m);
    if (d == cplx(0)) continue;
    for (const Mat& n : P.N) acc[G.class_of(mul(F, m, n))] += d;
  }
  ClassFunction f(P.G, label);
  double Psize = static_cast<double>(L.size()) * static_cast<double>(P.N.size());
  for (int c = 0; c < G.num_classes(); ++c)
    f.v[c] = static_cast<double>(G.order()) / (Psize * static_cast<double>(G.class_size[c])) * acc[c];
  return f;
}

cplx jacquet_value(const ClassFunction& pi, const std::vector<Mat>& N, const std::vector<cplx>* chi, const Mat& l) {
  const FieldCtx& F = *pi.G->F;
  cplx s = 0;
  for (size_t i = 0; i < N.size(); ++i) {
    cplx w = chi ? std::conj((*chi)[i]) : cplx(1);
    s += w * pi.at(mul(F, l, N[i]));
  }
  return s / static_cast<double>(N.size());
}

ClassFunction jacquet_twisted(const ClassFunction& pi, const std::vector<Mat>& N, const std::vector<cplx>* chi,
                              GroupPtr L, const std::function<Mat(const Mat&)>& embed, const std::string& label) {
  const FieldCtx& F = *pi.G->F;
  // stabilisation check: l N l^{-1} = N with chi preserved
  std::unordered_map<uint64_t, size_t> nidx;
  Packer pk(F, pi.G->n);
  for (size_t i = 0; i < N.size(); ++i) nidx[pk.pack(N[i])] = i;
  bool all = static_cast<double>(L->order()) * static_cast<double>(N.size()) <= 2e6;
  uint64_t count = all ? L->order() : static_cast<uint64_t>(L->num_classes());
  for (uint64_t k = 0; k < count; ++k) {
    Mat l = embed(all ? L->element(k) : L->rep(static_cast<int>(k)));
    Mat li = inverse_or_throw(F, l);
    for (size_t i = 0; i < N.size(); ++i) {
      auto it = nidx.find(pk.pack(mul(F, mul(F, l, N[i]), li)));
      if (it == nidx.end()) throw std::invalid_argument("subgroup does not normalise N");
      if (chi && std::abs((*chi)[it->second] - (*chi)[i]) > 1e-9)
        throw std::invalid_argument("subgroup does not fix the character of N");
    }
  }
  ClassFunction f(L, label);
  for (int c = 0; c < L->num_classes(); ++c) f.v[c] = jacquet_value(pi, N, chi, embed(L->rep(c)));
  return f;
}

bool is_cuspidal(const ClassFunction& pi) {
  const Group& G = *pi.G;
  for (int j = 1; j <= G.space.witt; ++j) {
    auto P = parabolic(pi.G, {j});
    if (std::abs(jacquet_value(pi, P.N, nullptr, Mat::identity(G.n))) > 1e-6) return false;
  }
  return true;
}

std::vector<ClassFunction> irr_small(GroupPtr G) {
  const FieldCtx& F = *G->F;
  std::vector<ClassFunction> out;
  if (G->n == 1 && !G->special) {
    out.push_back(trivial(G));
    out.push_back(determinant_char(G));
    return out;
  }
  if (G->n != 2 || G->special || G->space.symplectic()) throw std::invalid_argument("irr_small: unsupported group " + G->name);
  int m = static_cast<int>(G->order() / 2);
  // rotation generator: first determinant-one element of order m
  Mat r;
  bool found = false;
  for (uint64_t i = 0; i < G->order() && !found; ++i) {
    Mat g = G->element(i);
    if (det(F, g) != 1) continue;
    Mat p = g;
    int ord = 1;
    while (!(p == Mat::identity(2))) {
      p = mul(F, p, g);
      ++ord;
    }
    if (ord == m) { r = g; found = true; }
  }
  if (!found) throw std::logic_error("no rotation generator");
  std::map<uint64_t, int> logr;
  Mat p = Mat::identity(2);
  for (int k = 0; k < m; ++k) {
    logr[G->packer.pack(p)] = k;
    p = mul(F, p, r);
  }
  Mat s;
  for (uint64_t i = 0; i < G->order(); ++i)
    if (det(F, G->element(i)) != 1) { s = G->element(i); break; }
  // class data: (is_reflection, k) with rep = r^k or rep = s r^k
  int nc = G->num_classes();
  std::vector<int> refl(nc), k(nc);
  for (int c = 0; c < nc; ++c) {
    Mat g = G->rep(c);
    refl[c] = det(F, g) != 1;
    Mat x = refl[c] ? mul(F, inverse_or_throw(F, s), g) : g;
    k[c] = logr.at(G->packer.pack(x));
  }
  out.push_back(trivial(G));
  out.push_back(determinant_char(G));
  ClassFunction xi(G, "xi"), xis(G, "xi.sgn");
  for (int c = 0; c < nc; ++c) {
    double e = (k[c] % 2) ? -1.0 : 1.0;
    xi.v[c] = e;
    xis.v[c] = refl[c] ? -e : e;
  }
  out.push_back(xi);
  out.push_back(xis);
  for (int j = 1; 2 * j < m; ++j) {
    ClassFunction rho(G, "rho" + std::to_string(j));
    for (int c = 0; c < nc; ++c) rho.v[c] = refl[c] ? 0.0 : 2.0 * std::cos(2 * std::numbers::pi * j * k[c] / m);
    out.push_back(rho);
  }
  return out;
}

Elt primitive_root(const FieldCtx& F) {
  for (int g = 1; g < F.q; ++g) {
    Elt x = static_cast<Elt>(g);
    int ord = 1;
    Elt p = x;
    while (p != 1) {
      p = F.mul(p, x);
      ++ord;
    }
    if (ord == F.q - 1) return x;
  }
  throw std::logic_error("no primitive root");
}

bool MultChar::selfdual() const {
  for (auto x : val)
    if (std::abs(x.imag()) > 1e-9) return false;
  return true;
}

MultChar mult_char(const FieldCtx& F, int k) {
  MultChar t;
  t.F = &F;
  t.k = k;
  t.val.assign(F.q, 0.0);
  Elt g = primitive_root(F), p = 1;
  for (int j = 0; j < F.q - 1; ++j) {
    t.val[p] = std::polar(1.0, 2 * std::numbers::pi * k * j / (F.q - 1));
    p = F.mul(p, g);
  }
  return t;
}

MultChar legendre_char(const FieldCtx& F) { return mult_char(F, (F.q - 1) / 2); }

namespace {

enum class Gl2Type { Scalar, Unipotent, Split, Elliptic };

struct Gl2Class {
  Gl2Type type;
  Elt a = 0, b = 0;  // eigenvalues for scalar / unipotent / split
  int z = 0;         // elliptic eigenvalue as an element code of F_{q^2}
};

Gl2Class classify_gl2(const FieldCtx& F, const FieldCtx* F2, const Mat& M) {
  Elt tr = F.add(M(0, 0), M(1, 1));
  Elt dt = det(F, M);
  Elt disc = F.sub(F.mul(tr, tr), F.mul(F.from_int(4), dt));
  Gl2Class c;
  if (disc == 0) {
    c.a = F.mul(tr, F.half());
    bool scalar = M(0, 1) == 0 && M(1, 0) == 0;
    c.type = scalar ? Gl2Type::Scalar : Gl2Type::Unipotent;
    return c;
  }
  if (F.legendre(disc) > 0) {
    for (int x = 0; x < F.q; ++x)
      if (F.mul(static_cast<Elt>(x), static_cast<Elt>(x)) == disc) {
        c.a = F.mul(F.add(tr, static_cast<Elt>(x)), F.half());
        c.b = F.mul(F.sub(tr, static_cast<Elt>(x)), F.half());
        break;
      }
    c.type = Gl2Type::Split;
    return c;
  }
  c.type = Gl2Type::Elliptic;
  if (!F2) return c;
  // root of x^2 - tr x + det in F_{q^2}; prime-field codes coincide
  for (int z = 0; z < F2->q; ++z) {
    Elt zz = static_cast<Elt>(z);
    if (F2->add(F2->sub(F2->mul(zz, zz), F2->mul(tr, zz)), dt) == 0 && z >= F.q) {
      c.z = z;
      return c;
    }
  }
  throw std::logic_error("no eigenvalue in F_{q^2}");
}

}  // namespace

std::function<cplx(const Mat&)> gl2_cuspidal(const FieldCtx& F, int m) {
  if (!F.is_prime()) throw ConfigError("GL_2 cuspidal characters implemented for prime q");
  auto F2 = std::make_shared<FieldCtx>(make_field(F.q * F.q, F.q * F.q));
  int Q = F.q * F.q - 1;
  Elt g = primitive_root(*F2);
  auto theta = std::make_shared<std::vector<cplx>>(F2->q, 0.0);
  Elt p = 1;
  for (int j = 0; j < Q; ++j) {
    (*theta)[p] = std::polar(1.0, 2 * std::numbers::pi * m * j / Q);
    p = F2->mul(p, g);
  }
  // theta^q != theta
  if ((static_cast<long long>(m) * (F.q - 1)) % Q == 0) throw ConfigError("theta is Galois invariant");
  const FieldCtx* Fp = &F;
  return [Fp, F2, theta](const Mat& M) -> cplx {
    auto c = classify_gl2(*Fp, F2.get(), M);
    const auto& th = *theta;
    switch (c.type) {
      case Gl2Type::Scalar: return static_cast<double>(Fp->q - 1) * th[c.a];
      case Gl2Type::Unipotent: return -th[c.a];
      case Gl2Type::Split: return 0.0;
      case Gl2Type::Elliptic: {
        Elt z = static_cast<Elt>(c.z), zq = 1;
        for (int i = 0; i < Fp->q; ++i) zq = F2->mul(zq, z);
        return -(th[z] + th[zq]);
      }
    }
    return 0.0;
  };
}

std::function<cplx(const Mat&)> gl2_principal(const MultChar& t1, const MultChar& t2) {
  const FieldCtx* Fp = t1.F;
  return [Fp, t1, t2](const Mat& M) -> cplx {
    auto c = classify_gl2(*Fp, nullptr, M);
    switch (c.type) {
      case Gl2Type::Scalar: return static_cast<double>(Fp->q + 1) * t1(c.a) * t2(c.a);
      case Gl2Type::Unipotent: return t1(c.a) * t2(c.a);
      case Gl2Type::Split: return t1(c.a) * t2(c.b) + t1(c.b) * t2(c.a);
      case Gl2Type::Elliptic: return 0.0;
    }
    return 0.0;
  };
}

}  // namespace fqt

#include "fqt/forms.hpp"

#include <functional>

namespace fqt {

std::string tower_name(Tower t) {
  switch (t) {
    case Tower::Sp: return "sp";
    case Tower::OEvenPlus: return "o-even-plus";
    case Tower::OEvenMinus: return "o-even-minus";
    case Tower::OOddPlus: return "o-odd-plus";
    case Tower::OOddMinus: return "o-odd-minus";
  }
  return "?";
}

Tower parse_tower(const std::string& s) {
  for (Tower t : {Tower::Sp, Tower::OEvenPlus, Tower::OEvenMinus, Tower::OOddPlus, Tower::OOddMinus})
    if (tower_name(t) == s) return t;
  throw ConfigError("unknown tower " + s);
}

bool is_orthogonal(Tower t) { return t != Tower::Sp; }

Tower orth_tower(int dim, SquareClass disc) {
  if (dim % 2 == 0) return disc.s > 0 ? Tower::OEvenPlus : Tower::OEvenMinus;
  return disc.s > 0 ? Tower::OOddPlus : Tower::OOddMinus;
}

std::string FormedSpace::name() const {
  switch (tower) {
    case Tower::Sp: return "Sp" + std::to_string(dim);
    case Tower::OEvenPlus: return "O" + std::to_string(dim) + "+";
    case Tower::OEvenMinus: return "O" + std::to_string(dim) + "-";
    case Tower::OOddPlus: return "O" + std::to_string(dim) + "+";
    case Tower::OOddMinus: return "O" + std::to_string(dim) + "-";
  }
  return "?";
}

SquareClass discriminant(const FieldCtx& F, const Mat& G) {
  int n = G.r;
  Elt d = det(F, G);
  if (d == 0) throw std::invalid_argument("degenerate form");
  SquareClass c = class_of(F, d);
  if ((n * (n - 1) / 2) % 2) c = c * eps_minus_one(F);
  return c;
}

namespace {

// least c with -c a non-square: diag(1, c) is anisotropic
Elt anisotropic_partner(const FieldCtx& F) {
  for (int c = 1; c < F.q; ++c)
    if (F.legendre(F.neg(static_cast<Elt>(c))) < 0) return static_cast<Elt>(c);
  throw std::logic_error("no anisotropic plane");
}

}  // namespace

FormedSpace standard_space(const FieldCtx& F, Tower t, int dim) {
  FormedSpace V;
  V.F = &F;
  V.dim = dim;
  V.tower = t;
  V.gram = Mat(dim, dim);
  if (dim < 0) throw ConfigError("negative dimension");
  auto hyperbolic = [&](int m, bool alt) {
    for (int i = 0; i < m; ++i) {
      V.gram(i, dim - 1 - i) = 1;
      V.gram(dim - 1 - i, i) = alt ? F.neg(1) : Elt{1};
    }
  };
  switch (t) {
    case Tower::Sp:
      if (dim % 2) throw ConfigError("symplectic space of odd dimension");
      hyperbolic(dim / 2, true);
      V.witt = dim / 2;
      break;
    case Tower::OEvenPlus:
      if (dim % 2) throw ConfigError("even tower with odd dimension");
      hyperbolic(dim / 2, false);
      V.witt = dim / 2;
      break;
    case Tower::OEvenMinus: {
      if (dim % 2 || dim < 2) throw ConfigError("O^- even tower needs even dimension >= 2");
      int m = dim / 2 - 1;
      hyperbolic(m, false);
      V.gram(m, m) = 1;
      V.gram(m + 1, m + 1) = anisotropic_partner(F);
      V.witt = m;
      break;
    }
    case Tower::OOddPlus:
    case Tower::OOddMinus: {
      if (dim % 2 == 0) throw ConfigError("odd tower with even dimension");
      int m = dim / 2;
      hyperbolic(m, false);
      V.gram(m, m) = t == Tower::OOddPlus ? Elt{1} : least_nonsquare(F);
      V.witt = m;
      break;
    }
  }
  if (is_orthogonal(t)) V.disc = dim == 0 ? SquareClass(1) : discriminant(F, V.gram);
  return V;
}

FormedSpace space_from_gram(const FieldCtx& F, const Mat& G, bool symplectic) {
  FormedSpace V;
  V.F = &F;
  V.dim = G.r;
  V.gram = G;
  if (symplectic) {
    V.tower = Tower::Sp;
    V.witt = G.r / 2;
  } else {
    V.disc = G.r == 0 ? SquareClass(1) : discriminant(F, G);
    V.tower = orth_tower(G.r, V.disc);
    V.witt = -1;
  }
  return V;
}

std::vector<FormedSpace> witt_neighbors(const FormedSpace& V) {
  std::vector<FormedSpace> out;
  int lowest = V.tower == Tower::OEvenMinus ? 2 : (V.tower == Tower::OOddPlus || V.tower == Tower::OOddMinus) ? 1 : 0;
  if (V.dim - 2 >= lowest) out.push_back(standard_space(*V.F, V.tower, V.dim - 2));
  out.push_back(standard_space(*V.F, V.tower, V.dim + 2));
  return out;
}

Mat find_isometric_basis(const FieldCtx& F, const Mat& G, const Mat& S, const Mat& target) {
  int k = S.c, m = target.r;
  long long total = count_vectors(F, k);
  std::vector<Vec> cand(total);
  for (long long i = 0; i < total; ++i) cand[i] = apply(F, S, vector_at(F, k, i));
  std::vector<long long> pick(m, -1);
  std::function<bool(int)> dfs = [&](int j) {
    if (j == m) return true;
    for (long long i = 1; i < total; ++i) {
      const Vec& w = cand[i];
      if (bilinear(F, G, w, w) != target(j, j)) continue;
      bool ok = true;
      for (int t = 0; t < j && ok; ++t) ok = bilinear(F, G, cand[pick[t]], w) == target(t, j);
      if (!ok) continue;
      pick[j] = i;
      if (dfs(j + 1)) return true;
    }
    return false;
  };
  if (!dfs(0)) throw std::runtime_error("no isometric basis");
  Mat T(G.r, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < G.r; ++i) T(i, j) = cand[pick[j]][i];
  if (m > 0 && rank(F, T) != m) throw std::logic_error("isometric basis not independent");
  return T;
}

FlagDecomposition flag_decomposition(const FormedSpace& V, int ell, std::optional<SquareClass> v0_class,
                                     int representative) {
  const FieldCtx& F = *V.F;
  if (ell < 0 || ell > V.witt) throw std::invalid_argument("flag length exceeds Witt index");
  FlagDecomposition D;
  D.parent = &V;
  D.ell = ell;
  for (int i = 0; i < ell; ++i) {
    D.x_idx.push_back(i);
    D.xdual_idx.push_back(V.dim - 1 - i);
  }
  for (int i = ell; i < V.dim - ell; ++i) D.comp_idx.push_back(i);
  D.complement = standard_space(F, V.tower, V.dim - 2 * ell);
  if (!v0_class) return D;
  const FormedSpace& C = D.complement;
  if (C.symplectic() || C.dim == 0) throw std::invalid_argument("v0 requires an orthogonal complement");
  long long total = count_vectors(F, C.dim);
  int seen = 0;
  for (long long i = 1; i < total; ++i) {
    Vec v = vector_at(F, C.dim, i);
    Elt qv = C.Q(v);
    if (qv == 0 || class_of(F, qv) != *v0_class) continue;
    if (seen++ < representative) continue;
    D.v0 = v;
    break;
  }
  if (!D.v0) throw NoRationalOrbit("no anisotropic vector of class " + std::string(1, v0_class->sign()) +
                                   " in " + C.name());
  D.v0_class = *v0_class;
  // W = v0-perp inside the complement
  Mat row(1, C.dim);
  Vec gv = apply(F, C.gram, *D.v0);
  for (int j = 0; j < C.dim; ++j) row(0, j) = gv[j];
  Mat S = nullspace(F, row);
  int wd = C.dim - 1;
  if (wd == 0) {
    D.W = standard_space(F, Tower::OEvenPlus, 0);
    D.W_basis = Mat(C.dim, 0);
    return D;
  }
  // disc W from disc C = (-1)^{n-1} Q(v0) disc W, read in square classes
  SquareClass dW = C.disc * class_of(F, C.Q(*D.v0));
  if ((C.dim - 1) % 2) dW = dW * eps_minus_one(F);
  D.W = standard_space(F, orth_tower(wd, dW), wd);
  D.W_basis = find_isometric_basis(F, C.gram, S, D.W->gram);
  return D;
}

}  // namespace fqt

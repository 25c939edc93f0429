#include "fqt/transfer.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "fqt/descent.hpp"
#include "fqt/unipotent.hpp"

namespace fqt {

bool IdentityReport::pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

namespace {

json int_or_raw(cplx x) {
  double r = std::round(x.real());
  if (std::abs(x - cplx(r)) < 1e-6) return static_cast<long long>(r);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f%+.6fi", x.real(), x.imag());
  return std::string(buf);
}

void row(IdentityReport& R, const std::string& label, const json& lhs, const json& rhs) {
  // non-integral values never pass, even when both sides agree
  bool raw = lhs.is_string() && !lhs.get<std::string>().empty() && lhs.get<std::string>().back() == 'i';
  R.rows.push_back({label, lhs, rhs, !raw && lhs == rhs});
}

// row-reduced echelon form of the rows of A
Mat rref(const FieldCtx& F, Mat A) {
  int r = 0;
  for (int c = 0; c < A.c && r < A.r; ++c) {
    int p = -1;
    for (int i = r; i < A.r; ++i)
      if (A(i, c)) { p = i; break; }
    if (p < 0) continue;
    for (int j = 0; j < A.c; ++j) std::swap(A(r, j), A(p, j));
    Elt inv = F.inv(A(r, c));
    for (int j = 0; j < A.c; ++j) A(r, j) = F.mul(A(r, j), inv);
    for (int i = 0; i < A.r; ++i) {
      if (i == r || !A(i, c)) continue;
      Elt f = A(i, c);
      for (int j = 0; j < A.c; ++j) A(i, j) = F.sub(A(i, j), F.mul(f, A(r, j)));
    }
    ++r;
  }
  return A;
}

Vec row_of(const Mat& A, int i) {
  Vec v(A.c);
  for (int j = 0; j < A.c; ++j) v[j] = A(i, j);
  return v;
}

// y with X^T G y = e_j and Yprev^T G y = 0, then made isotropic along x_j
Vec hyperbolic_partner(const FieldCtx& F, const Mat& G, const Mat& X, const std::vector<Vec>& prev, int j) {
  int n = G.r, l = X.r;
  Mat rows(l + static_cast<int>(prev.size()), n);
  for (int i = 0; i < l; ++i) {
    Vec gx = apply(F, transpose(G), row_of(X, i));
    for (int k = 0; k < n; ++k) rows(i, k) = gx[k];
  }
  for (size_t i = 0; i < prev.size(); ++i) {
    Vec gy = apply(F, transpose(G), prev[i]);
    for (int k = 0; k < n; ++k) rows(l + static_cast<int>(i), k) = gy[k];
  }
  // particular solution: augment and reduce
  Mat aug(rows.r, n + 1);
  for (int i = 0; i < rows.r; ++i) {
    for (int k = 0; k < n; ++k) aug(i, k) = rows(i, k);
    aug(i, n) = i == j ? 1 : 0;
  }
  Mat R = rref(F, aug);
  Vec y(n, 0);
  for (int i = 0; i < R.r; ++i) {
    int p = -1;
    for (int k = 0; k <= n; ++k)
      if (R(i, k)) { p = k; break; }
    if (p < 0) continue;
    if (p == n) throw std::logic_error("no hyperbolic partner");
    y[p] = R(i, n);
  }
  Elt t = F.mul(F.half(), bilinear(F, G, y, y));
  Vec xj = row_of(X, j);
  for (int k = 0; k < n; ++k) y[k] = F.sub(y[k], F.mul(t, xj[k]));
  return y;
}

Mat reflection(const FieldCtx& F, const Mat& B) {
  int w = B.r;
  for (long long i = 1; i < count_vectors(F, w); ++i) {
    Vec u = vector_at(F, w, i);
    Elt qu = bilinear(F, B, u, u);
    if (!qu) continue;
    // w -> w - 2 (w,u)/(u,u) u
    Mat r = Mat::identity(w);
    Elt c = F.div(F.from_int(2), qu);
    Vec bu = apply(F, B, u);
    for (int a = 0; a < w; ++a)
      for (int b = 0; b < w; ++b) r(a, b) = F.sub(r(a, b), F.mul(c, F.mul(u[a], bu[b])));
    return r;
  }
  throw std::logic_error("no anisotropic vector");
}

double max_diff(const ClassFunction& a, const ClassFunction& b) {
  double d = 0;
  for (size_t i = 0; i < a.v.size(); ++i) d = std::max(d, std::abs(a.v[i] - b.v[i]));
  return d;
}

}  // namespace

IsotropicFrames isotropic_frames(const FormedSpace& V, int ell) {
  const FieldCtx& F = *V.F;
  if (V.symplectic()) throw std::invalid_argument("isotropic_frames: orthogonal spaces only");
  int n = V.dim, w = n - 2 * ell;
  if (ell < 1 || w < 1) throw std::invalid_argument("isotropic_frames: need 1 <= ell < dim/2");
  const Mat& G = V.gram;
  std::vector<Vec> lines;
  for (long long i = 1; i < count_vectors(F, n); ++i) {
    Vec v = vector_at(F, n, i);
    int lead = 0;
    while (!v[lead]) ++lead;
    if (v[lead] != 1 || bilinear(F, G, v, v)) continue;
    lines.push_back(v);
  }
  std::set<std::vector<Elt>> level, next;
  for (const Vec& v : lines) level.insert(v);
  for (int d = 1; d < ell; ++d) {
    next.clear();
    for (const auto& key : level) {
      Mat S(d, n);
      S.a = key;
      for (const Vec& v : lines) {
        bool ok = true;
        for (int i = 0; i < d && ok; ++i) ok = bilinear(F, G, row_of(S, i), v) == 0;
        if (!ok) continue;
        Mat T(d + 1, n);
        for (int i = 0; i < d; ++i)
          for (int k = 0; k < n; ++k) T(i, k) = S(i, k);
        for (int k = 0; k < n; ++k) T(d, k) = v[k];
        if (rank(F, T) <= d) continue;
        next.insert(rref(F, T).a);
      }
    }
    level.swap(next);
  }
  IsotropicFrames fr;
  fr.F = &F;
  fr.ell = ell;
  Mat refl;
  Elt d0 = 0;
  for (const auto& key : level) {
    Mat X(ell, n);
    X.a = key;
    std::vector<Vec> ys;
    for (int j = 0; j < ell; ++j) ys.push_back(hyperbolic_partner(F, G, X, ys, j));
    Mat XY(2 * ell, n);
    for (int i = 0; i < ell; ++i)
      for (int k = 0; k < n; ++k) {
        XY(i, k) = X(i, k);
        XY(ell + i, k) = ys[i][k];
      }
    Mat perp = nullspace(F, mul(F, XY, G));  // columns spanning (X + Y)^perp
    if (fr.frames.empty()) {
      Mat Bw = mul(F, mul(F, transpose(perp), G), perp);
      fr.W = standard_space(F, orth_tower(w, discriminant(F, Bw)), w);
      refl = reflection(F, fr.W.gram);
    }
    Mat c = find_isometric_basis(F, G, perp, fr.W.gram);
    Mat x(n, n);
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < ell; ++i) {
        x(k, i) = X(i, k);
        x(k, ell + w + i) = ys[i][k];
      }
      for (int j = 0; j < w; ++j) x(k, ell + j) = c(k, j);
    }
    Elt dx = det(F, x);
    if (fr.frames.empty()) d0 = dx;
    if (dx != d0) {
      Mat cr = mul(F, c, refl);
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < w; ++j) x(k, ell + j) = cr(k, j);
    }
    fr.inverses.push_back(inverse_or_throw(F, x));
    fr.frames.push_back(std::move(x));
  }
  return fr;
}

cplx induced_value(const IsotropicFrames& fr, const Mat& g, const std::function<cplx(const Mat&)>& tau,
                   const std::function<cplx(const Mat&)>& sigma) {
  const FieldCtx& F = *fr.F;
  int l = fr.ell, w = fr.W.dim;
  cplx s = 0;
  for (size_t i = 0; i < fr.frames.size(); ++i) {
    Mat y = mul(F, fr.inverses[i], mul(F, g, fr.frames[i]));
    bool stable = true;
    for (int r = l; r < y.r && stable; ++r)
      for (int c = 0; c < l && stable; ++c) stable = y(r, c) == 0;
    if (!stable) continue;
    s += tau(submatrix(y, 0, 0, l, l)) * sigma(submatrix(y, l, l, w, w));
  }
  return s;
}

std::function<cplx(const Mat&)> so2_character(GroupPtr SO2, int j) {
  const FieldCtx& F = *SO2->F;
  uint64_t m = SO2->order();
  for (uint64_t e = 0; e < m; ++e) {
    Mat g = SO2->element(e);
    std::map<uint64_t, uint64_t> logs;
    Mat p = Mat::identity(SO2->n);
    for (uint64_t k = 0; k < m; ++k) {
      if (!logs.emplace(SO2->packer.pack(p), k).second) break;
      p = mul(F, p, g);
    }
    if (logs.size() != m) continue;
    auto shared = std::make_shared<std::map<uint64_t, uint64_t>>(std::move(logs));
    GroupPtr G = SO2;
    return [shared, G, j, m](const Mat& h) {
      double a = 2 * std::numbers::pi * static_cast<double>(j) * static_cast<double>(shared->at(G->packer.pack(h))) /
                 static_cast<double>(m);
      return cplx(std::cos(a), std::sin(a));
    };
  }
  throw std::logic_error(SO2->name + " is not cyclic");
}

IdentityReport transfer_identity_check(Engine& E, int q) {
  IdentityReport R;
  R.name = "multiplicity transfer through induction";
  R.q = q;
  const FieldCtx& F = E.field(q);
  const AddChar& psi = psi_pair(F).first;
  auto [pp, pm] = build_odd_orth_unipotent(E, 1, 1, q);
  const ClassFunction& pi = pp.chi;
  GroupPtr G5 = pi.G;

  // Bessel side: SO_5^+ > SO_2^- at ell = 1
  std::optional<BesselQuotient> Q2, Q4;
  for (SquareClass c : {SquareClass(1), SquareClass(-1)}) {
    auto a = bessel_quotient(E, pi, 1, c, psi);
    if (a.rational && a.w_tower == Tower::OEvenMinus) Q2 = a;
    auto b = bessel_quotient(E, pi, 0, c, psi);
    if (b.rational && b.w_tower == Tower::OEvenMinus) Q4 = b;
  }
  if (!Q2 || !Q4) throw std::logic_error("no v0 class with an O_2^- / O_4^- complement");
  FormedSpace W2 = standard_space(F, Tower::OEvenMinus, 2);
  GroupPtr SO2 = E.group(W2, true);

  // induction side: SO_6^- = SO_5^+ + E, isotropic planes
  Mat g6;
  for (Elt a = 1; a < F.q; ++a) {
    g6 = block_diag({G5->space.gram, Mat::identity(1)});
    g6(5, 5) = a;
    if (orth_tower(6, discriminant(F, g6)) == Tower::OEvenMinus) break;
  }
  FormedSpace V6 = space_from_gram(F, g6, false);
  IsotropicFrames fr = isotropic_frames(V6, 2);
  row(R, "isotropic planes of O_6^-", static_cast<long long>((q * q * q + 1) * (q * q + 1)),
      static_cast<long long>(fr.frames.size()));
  row(R, "Levi complement of the plane stabilizer", tower_name(Tower::OEvenMinus) + "_2",
      tower_name(fr.W.tower) + "_" + std::to_string(fr.W.dim));
  if (!(fr.W.gram == W2.gram)) throw std::logic_error("frame complement is not the standard O_2^-");

  // induction in stages: SO_4^- = v0^perp with Levi GL_1 x SO_2^-
  GroupPtr SO4 = E.group(standard_space(F, Tower::OEvenMinus, 4), true);
  Parabolic P4 = parabolic(SO4, {1});
  if (!(P4.complement.gram == W2.gram)) throw std::logic_error("SO_4^- Levi complement is not the standard O_2^-");

  auto t_cusp = gl2_cuspidal(F, 1);
  MultChar t1 = mult_char(F, 1), t2 = mult_char(F, q == 3 ? 1 : 2);
  auto t_ps = gl2_principal(t1, t2);
  double so5 = static_cast<double>(G5->order()) / 2;

  for (int j : {0, 1}) {
    auto sigma = so2_character(SO2, j);
    std::string tag = j ? "nontrivial pi' of SO_2^-" : "trivial pi' of SO_2^-";
    cplx A = 0;
    for (uint64_t e = 0; e < SO2->order(); ++e) {
      Mat h = SO2->element(e);
      A += Q2->D->at(h) * std::conj(sigma(h));
    }
    A /= static_cast<double>(SO2->order());
    for (int variant : {0, 1}) {
      const auto& tau = variant ? t_ps : t_cusp;
      cplx B = 0;
      for (int c = 0; c < G5->num_classes(); ++c) {
        if (!G5->rep_is_special(c)) continue;
        Mat g = block_diag({G5->rep(c), Mat::identity(1)});
        B += static_cast<double>(G5->class_size[c]) * induced_value(fr, g, tau, sigma) * std::conj(pi.v[c]);
      }
      B /= so5;
      row(R, tag + ": Bessel multiplicity = <Ind_P^{SO_6^-}(" + (variant ? "principal series" : "cuspidal") +
                 " tau x pi'), pi>",
          int_or_raw(A), int_or_raw(B));
    }
    ClassFunction I4 = induce_parabolic(
        P4, *E.group(P4.complement, true),
        [&](const Mat& m) { return t2(P4.gl_block(m, 0)(0, 0)) * sigma(P4.complement_block(m)); }, "I4");
    cplx C = 0;
    for (int c = 0; c < SO4->num_classes(); ++c)
      C += static_cast<double>(SO4->class_size[c]) * Q4->D->at(SO4->rep(c)) * std::conj(I4.v[c]);
    C /= static_cast<double>(SO4->order());
    row(R, tag + ": Bessel multiplicity = m(Ind^{SO_4^-}(tau_2 x pi'), pi)", int_or_raw(A), int_or_raw(C));
  }
  return R;
}

IdentityReport induction_compat_check(Engine& E, int q) {
  IdentityReport R;
  R.name = "theta lifting and parabolic induction";
  R.q = q;
  const FieldCtx& F = E.field(q);
  if (F.q - 1 <= 2) {
    R.available = false;
    R.note = "instance unavailable: every character of GL_1(F_" + std::to_string(q) + ") is selfdual";
    return R;
  }
  const AddChar& psi = psi_pair(F).first;
  GroupPtr Sp4 = E.group(q, Tower::Sp, 4);
  Parabolic P = parabolic(Sp4, {1});
  GroupPtr SL2 = E.group(P.complement);
  LabeledRep th = base_theta(E, 1, q, false);
  if (th.chi.G != SL2) throw std::logic_error("Levi complement differs from the standard SL_2");
  const ClassFunction& pi = th.chi;
  MultChar tau = mult_char(F, 1);
  MultChar chi = legendre_char(F);
  ClassFunction I = induce_parabolic(
      P, *SL2, [&](const Mat& m) { return tau(P.gl_block(m, 0)(0, 0)) * pi.at(P.complement_block(m)); }, "I");
  row(R, "<I(tau x pi), I(tau x pi)> on Sp_4", 1, int_or_raw(inner_raw(I, I)));
  for (Tower t : {Tower::OOddPlus, Tower::OOddMinus}) {
    GroupPtr O1 = E.group(q, t, 1);
    ClassFunction pi1 = big_theta(E.pair(SL2, O1, psi), pi);
    if (pi1.is_zero()) continue;
    std::string tw = tower_name(t);
    row(R, "theta of pi to " + tw + "_1 is irreducible", 1, int_or_raw(inner_raw(pi1, pi1)));
    GroupPtr O3 = E.group(q, t, 3);
    Parabolic P3 = parabolic(O3, {1});
    GroupPtr O1c = E.group(P3.complement);
    if (O1c != O1) throw std::logic_error("O_3 Levi complement differs from the standard O_1");
    ClassFunction Ip = induce_parabolic(
        P3, *O1c,
        [&](const Mat& m) {
          Elt a = P3.gl_block(m, 0)(0, 0);
          return chi(a) * tau(a) * pi1.at(P3.complement_block(m));
        },
        "I'");
    ClassFunction th3 = big_theta(E.pair(Sp4, O3, psi), I);
    row(R, "<I'(chi tau x pi'), I'> on " + tw + "_3", 1, int_or_raw(inner_raw(Ip, Ip)));
    row(R, "multiplicity of I'(chi tau x pi') in Theta(I(tau x pi)) on " + tw + "_3", 1, int_or_raw(inner_raw(th3, Ip)));
    row(R, "Theta(I(tau x pi)) = I'(chi tau x pi') on " + tw + "_3", true, max_diff(th3, Ip) < 1e-6);
  }
  if (R.rows.size() < 2) row(R, "theta of pi to O_1 is nonzero in some tower", true, false);
  return R;
}

std::vector<SeesawReport> configured_seesaws(Engine& E, int q) {
  const FieldCtx& F = E.field(q);
  const AddChar& psi = psi_pair(F).first;
  std::vector<SeesawReport> out;

  SeesawSpec toy;
  toy.name = "O_2^- > O_1 x O_1 against SL_2";
  toy.psi = psi;
  bool found = false;
  for (Tower a : {Tower::OOddPlus, Tower::OOddMinus})
    for (Tower b : {Tower::OOddPlus, Tower::OOddMinus}) {
      if (found) continue;
      Mat g = block_diag({standard_space(F, a, 1).gram, standard_space(F, b, 1).gram});
      if (orth_tower(2, discriminant(F, g)) != Tower::OEvenMinus) continue;
      toy.ta = a;
      toy.tb = b;
      found = true;
    }
  toy.a = toy.b = 1;
  GroupPtr SL2 = E.group(q, Tower::Sp, 2);
  toy.pi_sp = {trivial(SL2), base_theta(E, 1, q, false).chi, base_theta(E, 1, q, true).chi, regular(SL2)};
  toy.pi_a = irr_small(E.group(q, toy.ta, 1));
  toy.pi_b = irr_small(E.group(q, toy.tb, 1));
  out.push_back(seesaw_check(E, toy));

  SeesawSpec big;
  big.name = "O_5 > O_4^- x O_1 against Sp_4";
  big.psi = psi;
  big.ta = Tower::OEvenMinus;
  big.a = 4;
  big.tb = Tower::OOddPlus;
  big.b = 1;
  GroupPtr Sp4 = E.group(q, Tower::Sp, 4);
  GroupPtr O4 = E.group(q, Tower::OEvenMinus, 4);
  LabeledRep pis = build_sp_unipotent(E, 1, q);
  big.pi_sp = {pis.chi, trivial(Sp4)};
  ClassFunction lift = big_theta(E.pair(O4, Sp4, psi), pis.chi, "Theta(pi_Sp4)");
  big.pi_a = {trivial(O4), determinant_char(O4), lift};
  big.pi_b = irr_small(E.group(q, big.tb, 1));
  out.push_back(seesaw_check(E, big));
  return out;
}

TwistResult twisting_identity_check(Engine& E, int q) {
  const FieldCtx& F = E.field(q);
  auto [psi, psi2] = psi_pair(F);
  GroupPtr S = E.group(q, Tower::Sp, 2);
  TwistResult r;
  WeilCharacter c1(F, psi), c2(F, psi2);
  for (Tower t : {Tower::OOddPlus, Tower::OOddMinus}) {
    Tower u = t == Tower::OOddPlus ? Tower::OOddMinus : Tower::OOddPlus;
    GroupPtr A = E.group(q, t, 3);
    FormedSpace B = standard_space(F, u, 3);
    // T^T B T = delta A identifies O(A) with O(B) through g -> T g T^{-1}
    Mat T = find_isometric_basis(F, B.gram, Mat::identity(3), scale(F, psi2.a(), A->space.gram));
    Mat Ti = inverse_or_throw(F, T);
    for (int a = 0; a < A->num_classes(); ++a)
      for (int b = 0; b < S->num_classes(); ++b) {
        Mat g = A->rep(a), h = S->rep(b);
        Mat g2 = mul(F, mul(F, T, g), Ti);
        cplx x = c1.pair(g, A->space.gram, h, S->space.gram), y = c2.pair(g2, B.gram, h, S->space.gram);
        r.worst = std::max(r.worst, std::abs(x - y));
        ++r.checked;
      }
  }
  return r;
}

json to_json(const IdentityReport& r) {
  json o;
  o["name"] = r.name;
  o["q"] = r.q;
  o["available"] = r.available;
  if (!r.available) o["note"] = r.note;
  json rows = json::array();
  for (const auto& x : r.rows) rows.push_back({{"label", x.label}, {"lhs", x.lhs}, {"rhs", x.rhs}, {"pass", x.pass}});
  o["rows"] = rows;
  o["pass"] = r.pass();
  return o;
}

json to_json(const SeesawReport& r) {
  json o;
  o["name"] = r.name;
  json rows = json::array();
  for (const auto& x : r.rows) rows.push_back({{"label", x.label}, {"lhs", x.lhs}, {"rhs", x.rhs}});
  o["rows"] = rows;
  o["pass"] = r.pass;
  return o;
}

CaseReport verify_identities(Engine& E, int q) {
  CaseReport R;
  R.case_name = "identities";
  R.q = q;
  size_t ev0 = E.events.size();
  auto stage = [&](const std::string& name, auto&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    R.timings.push_back({name, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
  };
  auto add = [&](const IdentityReport& I) {
    if (!I.available) {
      R.notes.push_back(I.name + ": instance unavailable at q=" + std::to_string(q) + " (" + I.note + ")");
      return;
    }
    for (const auto& r : I.rows) R.check(I.name + ": " + r.label, r.lhs, r.rhs, r.pass);
  };
  if (q == 3) {
    stage("seesaws", [&] {
      for (const auto& S : configured_seesaws(E, q))
        for (const auto& r : S.rows) R.check(S.name + ": " + r.label, r.lhs, r.rhs);
    });
  } else {
    R.notes.push_back("see-saw diagrams are configured at q=3 only");
  }
  stage("transfer", [&] { add(transfer_identity_check(E, q)); });
  stage("induction", [&] { add(induction_compat_check(E, q)); });
  stage("twisting", [&] {
    TwistResult t = twisting_identity_check(E, q);
    R.check("twisting identity on (SL2, O3) class pairs: worst error below 1e-8", true, t.checked > 0 && t.worst < 1e-8);
    R.notes.push_back("twisting identity compared " + std::to_string(t.checked) + " class pairs");
  });
  R.cache.assign(E.events.begin() + static_cast<std::ptrdiff_t>(ev0), E.events.end());
  return R;
}

}  // namespace fqt

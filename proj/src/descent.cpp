#include "fqt/descent.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <random>

namespace fqt {

namespace {

Realizer via(Engine& E) {
  return [&E](const FormedSpace& W) { return E.group(W); };
}

std::string cls_name(SquareClass c) { return std::string(1, c.sign()); }

const AddChar& pick_psi(const std::pair<AddChar, AddChar>& pp, bool prime) { return prime ? pp.second : pp.first; }

// the character nu(h n) = psi_ell(n) omega(h) omega(heis(n)) of the Jacobi group, as a matrix
struct JacobiNu {
  const FJData* D;
  const FieldCtx* F;
  AddChar psi;
  std::optional<WeilModel> W;

  JacobiNu(const FJData& d, const AddChar& p, long long carrier_bound) : D(&d), F(d.P.G->F), psi(p) {
    if (d.P.complement.dim) W.emplace(*F, d.P.complement.gram, psi, carrier_bound);
  }
  CMat omega(const Mat& h) const {
    if (!W) return CMat::identity(1);
    return W->matrix(h);
  }
  CMat heis(size_t i) const {
    const HeisenbergPoint& hp = D->heis[i];
    if (!W) {
      CMat c(1);
      c(0, 0) = psi(hp.t);
      return c;
    }
    return W->heisenberg(hp.w, hp.t);
  }
};

cplx trace_of_product(const CMat& A, const CMat& B) {
  cplx s = 0;
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) s += A(i, j) * B(j, i);
  return s;
}

std::vector<ClassFunction> irreducibles(GroupPtr G) {
  if (G->n == 0) return {trivial(G)};
  return irr_small(G);
}

// rounded integer if the value is one, else the raw number as text
json int_or_raw(cplx x) {
  double r = std::round(x.real());
  if (std::abs(x - cplx(r)) < 1e-6) return static_cast<long long>(r);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f%+.6fi", x.real(), x.imag());
  return std::string(buf);
}

json mult_json(const ClassFunction& D, const std::vector<ClassFunction>& irr) {
  json o = json::object();
  for (const auto& r : irr) o[r.label] = int_or_raw(inner_raw(D, r));
  return o;
}

json expect_one(const std::vector<ClassFunction>& irr, const std::string& label) {
  json o = json::object();
  for (const auto& r : irr) o[r.label] = r.label == label ? 1 : 0;
  return o;
}

bool all_zero_or_one(const json& mults) {
  for (auto& [k, v] : mults.items())
    if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 1) return false;
  return true;
}

json zeros(const std::vector<ClassFunction>& irr) {
  json o = json::object();
  for (const auto& r : irr) o[r.label] = 0;
  return o;
}

class Stages {
 public:
  explicit Stages(CaseReport& r) : r_(r), t0_(std::chrono::steady_clock::now()) {}
  void mark(const std::string& stage) {
    auto t = std::chrono::steady_clock::now();
    r_.timings.emplace_back(stage, std::chrono::duration<double>(t - t0_).count());
    t0_ = t;
  }

 private:
  CaseReport& r_;
  std::chrono::steady_clock::time_point t0_;
};

void certificates(CaseReport& R, const std::string& who, const LabeledRep& r) {
  R.check(who + " irreducible", true, r.irreducible);
  R.check(who + " cuspidal", true, r.cuspidal);
  json note = r.label_ok ? json(true) : json(r.label_note);
  R.check(who + " label rule", true, note, r.label_ok);
}

std::string tower_label(Tower t, int dim) { return tower_name(t) + "_" + std::to_string(dim); }

void verify_bessel_odd(Engine& E, CaseReport& R, int k, int q) {
  Stages st(R);
  const FieldCtx& F = E.field(q);
  const AddChar& psi = psi_pair(F).first;
  SquareClass ek = eps_k(k);
  for (int eps : {1, -1}) {
    auto [pp, pm] = build_odd_orth_unipotent(E, k, eps, q);
    st.mark(std::string("build O") + (eps > 0 ? "+" : "-"));
    for (const LabeledRep* rep : {&pp, &pm}) {
      int eta = rep == &pp ? 1 : -1;
      const std::string tag = rep->label + ": ";
      certificates(R, rep->label, *rep);
      BesselScan S = bessel_first_occurrence(E, rep->chi, psi);
      R.check(tag + "first occurrence index", k, S.ell0);
      SquareClass want = SquareClass(eps) * ek;
      json rz = json::array();
      for (auto c : S.realizing) rz.push_back(cls_name(c));
      R.check(tag + "realizing v0 classes", json::array({cls_name(want)}), rz);
      json above = json::array();
      for (const auto& Q : S.above)
        if (!Q.zero()) above.push_back(std::to_string(Q.ell) + cls_name(Q.v0_class));
      R.check(tag + "vanishing above the first occurrence", json::array(), above);

      for (SquareClass c : {SquareClass(1), SquareClass(-1)}) {
        BesselQuotient Q = bessel_quotient(E, rep->chi, k, c, psi);
        std::string cell = tag + "ell=" + std::to_string(k) + " class " + cls_name(c) + " ";
        if (!Q.rational) {
          R.check(cell + "rational orbit exists", true, false);
          continue;
        }
        std::vector<ClassFunction> irr = irreducibles(Q.D->G);
        json m = mult_json(*Q.D, irr);
        R.check(cell + "multiplicities in {0,1}", true, all_zero_or_one(m));
        if (c == want) {
          int sign = eta * ek.s;
          Tower wt = k % 2 ? Tower::OEvenMinus : Tower::OEvenPlus;
          R.check(cell + "target space", tower_label(wt, 2 * k * k), tower_label(Q.w_tower, Q.w_dim));
          std::string lab = sign > 0 ? "triv" : "sgn";  // pi^{+-} of O_2^- at k = 1
          R.check(cell + "descent is pi^" + std::string(sign > 0 ? "+" : "-"), expect_one(irr, lab), m);
          R.check(cell + "descent irreducible", 1, int_or_raw(inner_raw(*Q.D, *Q.D)));
          ClassFunction expected = irr[sign > 0 ? 0 : 1];
          R.check(cell + "SO restriction matches", 1, int_or_raw(inner_special_raw(*Q.D, expected)));
          ClassFunction diff = *Q.D - expected;
          R.check(cell + "SO restriction irreducible", 1, int_or_raw(inner_special_raw(*Q.D, *Q.D)));
          R.check(cell + "SO restriction difference", 0, int_or_raw(inner_special_raw(diff, diff)));
          BesselQuotient Q1 = bessel_quotient(E, rep->chi, k, c, psi, 1);
          double d = 0;
          for (size_t i = 0; i < Q.D->v.size(); ++i) d = std::max(d, std::abs(Q.D->v[i] - Q1.D->v[i]));
          R.check(cell + "second v0 representative agrees", true, d < 1e-9);
        } else {
          R.check(cell + "multiplicities against " + tower_label(Q.w_tower, Q.w_dim), zeros(irr), m);
        }
      }
      st.mark("descents " + rep->label);
    }
  }
}

void verify_bessel_even(Engine& E, CaseReport& R, int k, int q) {
  Stages st(R);
  const FieldCtx& F = E.field(q);
  const AddChar& psi = psi_pair(F).first;
  SquareClass em1 = eps_minus_one(F), ek = eps_k(k), ek1 = eps_k(k - 1);
  GroupPtr G = E.group(q, k % 2 ? Tower::OEvenMinus : Tower::OEvenPlus, 2 * k * k);
  if (k != 1) throw ResourceRefusal("unipotent cuspidal representations of " + G->name + " are beyond desk scale");
  auto [pp, pm] = base_even_orth(E, q);
  st.mark("build");
  for (const LabeledRep* rep : {&pp, &pm}) {
    int eta = rep == &pp ? 1 : -1;
    const std::string tag = rep->label + ": ";
    certificates(R, rep->label, *rep);
    BesselScan S = bessel_first_occurrence(E, rep->chi, psi);
    R.check(tag + "first occurrence index", k - 1, S.ell0);
    // the target tower sign is free: each class of v0 realizes it for one eps
    json rz = json::array();
    for (auto c : S.realizing) rz.push_back(cls_name(c));
    R.check(tag + "realizing v0 classes", json::array({"+", "-"}), rz);
    for (SquareClass c : {SquareClass(1), SquareClass(-1)}) {
      SquareClass eps = c * em1 * ek;
      std::string cell = tag + "class " + cls_name(c) + " ";
      BesselQuotient Q = bessel_quotient(E, rep->chi, k - 1, c, psi);
      if (!Q.rational) {
        R.check(cell + "rational orbit exists", true, false);
        continue;
      }
      R.check(cell + "target space", tower_label(orth_tower(2 * k * (k - 1) + 1, eps), 2 * k * (k - 1) + 1),
              tower_label(Q.w_tower, Q.w_dim));
      std::vector<ClassFunction> irr = irreducibles(Q.D->G);
      json m = mult_json(*Q.D, irr);
      int sign = eta * ek1.s;
      R.check(cell + "descent is pi^" + std::string(sign > 0 ? "+" : "-"), expect_one(irr, sign > 0 ? "triv" : "sgn"), m);
      R.check(cell + "multiplicities in {0,1}", true, all_zero_or_one(m));
      R.check(cell + "descent irreducible", 1, int_or_raw(inner_raw(*Q.D, *Q.D)));
      R.check(cell + "SO restriction matches", 1, int_or_raw(inner_special_raw(*Q.D, irr[sign > 0 ? 0 : 1])));
      BesselQuotient Q1 = bessel_quotient(E, rep->chi, k - 1, c, psi, 1);
      double d = 0;
      for (size_t i = 0; i < Q.D->v.size(); ++i) d = std::max(d, std::abs(Q.D->v[i] - Q1.D->v[i]));
      R.check(cell + "second v0 representative agrees", true, d < 1e-9);
    }
    st.mark("descents " + rep->label);
  }
}

void verify_fj(Engine& E, CaseReport& R, int k, int q) {
  Stages st(R);
  const FieldCtx& F = E.field(q);
  LabeledRep pi = build_sp_unipotent(E, k, q);
  LabeledRep ta = base_theta(E, k, q, false), tb = base_theta(E, k, q, true);
  st.mark("build");
  certificates(R, pi.label, pi);
  certificates(R, ta.label, ta);
  certificates(R, tb.label, tb);
  FJScan S = fj_first_occurrence(E, pi.chi);
  st.mark("scan");
  R.check("first occurrence index", k, S.ell0);
  json rz = json::array();
  for (bool p : S.realizing) rz.push_back(p ? "psi'" : "psi");
  R.check("realizing characters", json::array({"psi", "psi'"}), rz);
  json above = json::array();
  for (const auto& Q : S.above)
    if (!Q.D.is_zero()) above.push_back(std::to_string(Q.ell) + (Q.psi_prime ? "psi'" : "psi"));
  R.check("vanishing above the first occurrence", json::array(), above);
  bool straight = (eps_minus_one(F) * eps_k(k)).s > 0;
  for (bool prime : {false, true}) {
    FJQuotient Q = fj_quotient(E, pi.chi, k, prime);
    std::string cell = std::string(prime ? "psi'" : "psi") + " ";
    std::vector<ClassFunction> irr = {ta.chi, tb.chi};
    json m = mult_json(Q.D, irr);
    bool to_beta = straight == prime;
    json want = json::object();
    want[ta.label] = to_beta ? 0 : 1;
    want[tb.label] = to_beta ? 1 : 0;
    R.check(cell + "descent is " + (to_beta ? tb.label : ta.label), want, m);
    R.check(cell + "multiplicities in {0,1}", true, all_zero_or_one(m));
    R.check(cell + "descent irreducible", 1, int_or_raw(inner_raw(Q.D, Q.D)));
  }
  st.mark("descents");
}

}  // namespace

BesselQuotient bessel_quotient(Engine& E, const ClassFunction& pi, int ell, SquareClass v0_class, const AddChar& psi,
                               int representative) {
  BesselQuotient Q;
  Q.ell = ell;
  Q.v0_class = v0_class;
  std::optional<BesselData> B;
  try {
    B.emplace(bessel_data(pi.G, ell, v0_class, psi, via(E), representative));
  } catch (const NoRationalOrbit&) {
    Q.rational = false;
    return Q;
  }
  Q.w_tower = B->D.W->tower;
  Q.w_dim = B->D.W->dim;
  const BesselData& b = *B;
  Q.D = jacquet_twisted(pi, b.P.N, &b.nu, b.OW, [&b](const Mat& h) { return b.embed(h); },
                        "Q^B_" + std::to_string(ell) + cls_name(v0_class) + "(" + pi.label + ")");
  return Q;
}

long long bessel_multiplicity(const BesselQuotient& Q, const ClassFunction& target) {
  if (!Q.D) return 0;
  return round_checked(inner_raw(*Q.D, target), "Bessel multiplicity against " + target.label);
}

BesselScan bessel_first_occurrence(Engine& E, const ClassFunction& pi, const AddChar& psi) {
  const FormedSpace& V = pi.G->space;
  if (V.symplectic()) throw ConfigError("Bessel descent needs an orthogonal group, got " + pi.G->name);
  BesselScan S;
  for (int ell = std::min(V.witt, (V.dim - 1) / 2); ell >= 0; --ell) {
    std::vector<BesselQuotient> cells;
    for (SquareClass c : {SquareClass(1), SquareClass(-1)}) cells.push_back(bessel_quotient(E, pi, ell, c, psi));
    for (auto& Q : cells)
      if (Q.rational && !Q.zero()) {
        S.realizing.push_back(Q.v0_class);
        S.at_ell0.push_back(Q);
      }
    if (!S.realizing.empty()) {
      S.ell0 = ell;
      break;
    }
    for (auto& Q : cells) S.above.push_back(std::move(Q));
  }
  return S;
}

FJQuotient fj_quotient(Engine& E, const ClassFunction& pi, int ell, bool psi_prime) {
  const FieldCtx& F = *pi.G->F;
  auto pp = psi_pair(F);
  const AddChar& psi = pick_psi(pp, psi_prime);
  FJData D = fj_data(pi.G, ell, psi, via(E));
  JacobiNu nu(D, psi, E.carrier_bound);
  std::vector<CMat> heis;
  heis.reserve(D.P.N.size());
  for (size_t i = 0; i < D.P.N.size(); ++i) heis.push_back(nu.heis(i));
  FJQuotient Q;
  Q.ell = ell;
  Q.psi_prime = psi_prime;
  Q.D = ClassFunction(D.SpSmall, "Q^FJ_" + std::to_string(ell) + (psi_prime ? "psi'" : "psi") + "(" + pi.label + ")");
  const FieldCtx& Fv = F;
  for (int c = 0; c < D.SpSmall->num_classes(); ++c) {
    Mat h = D.SpSmall->rep(c);
    Mat eh = D.embed(h);
    CMat w = nu.omega(h);
    cplx acc = 0;
    for (size_t i = 0; i < D.P.N.size(); ++i) {
      cplx v = pi.at(mul(Fv, eh, D.P.N[i]));
      if (v == cplx(0)) continue;
      acc += v * std::conj(D.psi_ell[i] * trace_of_product(w, heis[i]));
    }
    Q.D.v[c] = acc / static_cast<double>(D.P.N.size());
  }
  return Q;
}

long long fj_multiplicity(const FJQuotient& Q, const ClassFunction& target) {
  return round_checked(inner_raw(Q.D, target), "Fourier-Jacobi multiplicity against " + target.label);
}

FJScan fj_first_occurrence(Engine& E, const ClassFunction& pi) {
  const FormedSpace& V = pi.G->space;
  if (!V.symplectic()) throw ConfigError("Fourier-Jacobi descent needs a symplectic group, got " + pi.G->name);
  FJScan S;
  for (int ell = V.dim / 2; ell >= 0; --ell) {
    std::vector<FJQuotient> cells;
    for (bool p : {false, true}) cells.push_back(fj_quotient(E, pi, ell, p));
    for (auto& Q : cells)
      if (!Q.D.is_zero()) {
        S.realizing.push_back(Q.psi_prime);
        S.at_ell0.push_back(Q);
      }
    if (!S.realizing.empty()) {
      S.ell0 = ell;
      break;
    }
    for (auto& Q : cells) S.above.push_back(std::move(Q));
  }
  return S;
}

double bessel_character_defect(Engine& E, GroupPtr G, int ell, SquareClass v0_class, const AddChar& psi) {
  BesselData B = bessel_data(G, ell, v0_class, psi, via(E));
  const FieldCtx& F = *G->F;
  std::map<uint64_t, size_t> at;
  for (size_t i = 0; i < B.P.N.size(); ++i) at[G->packer.pack(B.P.N[i])] = i;
  double worst = 0;
  for (size_t i = 0; i < B.P.N.size(); ++i)
    for (size_t j = 0; j < B.P.N.size(); ++j) {
      size_t k = at.at(G->packer.pack(mul(F, B.P.N[i], B.P.N[j])));
      worst = std::max(worst, std::abs(B.nu[i] * B.nu[j] - B.nu[k]));
    }
  // O(W) fixes nu
  for (uint64_t e = 0; e < B.OW->order(); ++e) {
    Mat h = B.embed(B.OW->element(e));
    Mat hi = inverse_or_throw(F, h);
    for (size_t i = 0; i < B.P.N.size(); ++i) {
      size_t k = at.at(G->packer.pack(mul(F, mul(F, h, B.P.N[i]), hi)));
      worst = std::max(worst, std::abs(B.nu[i] - B.nu[k]));
    }
  }
  return worst;
}

double fj_representation_defect(Engine& E, GroupPtr G, int ell, bool psi_prime, int samples) {
  const FieldCtx& F = *G->F;
  auto pp = psi_pair(F);
  const AddChar& psi = pick_psi(pp, psi_prime);
  FJData D = fj_data(G, ell, psi, via(E));
  JacobiNu nu(D, psi, E.carrier_bound);
  std::map<uint64_t, size_t> at;
  for (size_t i = 0; i < D.P.N.size(); ++i) at[G->packer.pack(D.P.N[i])] = i;
  auto value = [&](uint64_t h, size_t i) {
    CMat m = nu.omega(D.SpSmall->element(h)) * nu.heis(i);
    for (auto& x : m.a) x *= D.psi_ell[i];
    return m;
  };
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<uint64_t> ph(0, D.SpSmall->order() - 1);
  std::uniform_int_distribution<size_t> pn(0, D.P.N.size() - 1);
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    uint64_t h1 = ph(rng), h2 = ph(rng);
    size_t n1 = pn(rng), n2 = pn(rng);
    Mat x = mul(F, D.embed(D.SpSmall->element(h1)), D.P.N[n1]);
    Mat y = mul(F, D.embed(D.SpSmall->element(h2)), D.P.N[n2]);
    Mat p = mul(F, x, y);
    // p = embed(h1 h2) n with n in N
    Mat h = mul(F, D.SpSmall->element(h1), D.SpSmall->element(h2));
    Mat n = mul(F, inverse_or_throw(F, D.embed(h)), p);
    size_t k = at.at(G->packer.pack(n));
    uint64_t hk = static_cast<uint64_t>(D.SpSmall->index_of(h));
    worst = std::max(worst, max_abs_diff(value(h1, n1) * value(h2, n2), value(hk, k)));
  }
  return worst;
}

std::string case_name(Case c) {
  switch (c) {
    case Case::BOdd: return "b-odd";
    case Case::BEven: return "b-even";
    case Case::FJ: return "fj";
  }
  return "?";
}

Case parse_case(const std::string& s) {
  if (s == "b-odd") return Case::BOdd;
  if (s == "b-even") return Case::BEven;
  if (s == "fj") return Case::FJ;
  throw ConfigError("unknown case '" + s + "'");
}

bool default_binding(Case c, int q) { return c != Case::FJ || q >= 5; }

CaseReport verify_descent_case(Engine& E, Case c, int k, int q, bool strict) {
  if (k < 1) throw ConfigError("k must be at least 1");
  CaseReport R;
  R.case_name = case_name(c);
  R.k = k;
  R.q = q;
  R.binding = strict || default_binding(c, q);
  size_t ev0 = E.events.size();
  switch (c) {
    case Case::BOdd: verify_bessel_odd(E, R, k, q); break;
    case Case::BEven: verify_bessel_even(E, R, k, q); break;
    case Case::FJ: verify_fj(E, R, k, q); break;
  }
  R.cache.assign(E.events.begin() + static_cast<std::ptrdiff_t>(ev0), E.events.end());
  return R;
}

}  // namespace fqt

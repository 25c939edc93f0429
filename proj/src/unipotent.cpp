#include "fqt/unipotent.hpp"

#include <cmath>

namespace fqt {

int central_sign(const ClassFunction& chi) {
  const Group& G = *chi.G;
  Mat m = scale(*G.F, G.F->neg(1), Mat::identity(G.n));
  if (!G.contains(m)) return 0;
  double d = static_cast<double>(chi.degree());
  if (d == 0) return 0;
  cplx r = chi.at(m) / d;
  if (std::abs(r - cplx(1)) < 1e-9) return 1;
  if (std::abs(r + cplx(1)) < 1e-9) return -1;
  return 0;
}

namespace {

void certify(LabeledRep& r) {
  r.irreducible = std::abs(inner_raw(r.chi, r.chi) - cplx(1)) < 1e-6;
  r.cuspidal = is_cuspidal(r.chi);
}

std::string sign_name(int s) { return s > 0 ? "+" : "-"; }

}  // namespace

std::pair<LabeledRep, LabeledRep> base_even_orth(Engine& E, int q) {
  GroupPtr G = E.group(q, Tower::OEvenMinus, 2);
  LabeledRep p, m;
  p.chi = trivial(G);
  p.chi.label = p.label = "pi^+_O2-";
  m.chi = determinant_char(G);
  m.chi.label = m.label = "pi^-_O2-";
  p.provenance = "trivial character of O_2^-";
  m.provenance = "determinant character of O_2^-";
  for (LabeledRep* r : {&p, &m}) {
    certify(*r);
    r->label_ok = true;
  }
  p.label_ok = std::abs(p.chi.v[G->cls[0]] - cplx(1)) < 1e-12;
  return {p, m};
}

LabeledRep base_theta(Engine& E, int k, int q, bool beta) {
  const FieldCtx& F = E.field(q);
  GroupPtr G = E.group(q, Tower::Sp, 2 * k * k);
  auto [psi, psi2] = psi_pair(F);
  WeilCharacter chi(F, beta ? psi2 : psi);
  E.gate();
  double c = F.legendre(F.neg(1));
  const Mat& J = G->space.gram;
  Elt m1 = F.neg(1);
  LabeledRep r;
  r.label = std::string("pi^theta_") + (beta ? "beta" : "alpha");
  r.chi = from_function(
      G, [&](const Mat& g) { return 0.5 * (chi(g, J) - c * chi(scale(F, m1, g), J)); }, r.label);
  r.provenance = std::string("odd part of the Weil representation for ") + (beta ? "psi'" : "psi") +
                 " under f(u) -> f(-u)";
  certify(r);
  int s = central_sign(r.chi), want = k % 2 ? -1 : 1;
  r.label_ok = s == want;
  if (!r.label_ok)
    r.label_note = "value at -1 is " + sign_name(s) + "dim, the labelling rule expects " + sign_name(want) + "dim";
  return r;
}

LabeledRep build_sp_unipotent(Engine& E, int k, int q) {
  const FieldCtx& F = E.field(q);
  GroupPtr Sp = E.group(q, Tower::Sp, 2 * k * (k + 1));
  GroupPtr O = E.group(q, k % 2 ? Tower::OEvenMinus : Tower::OEvenPlus, 2 * k * k);
  auto psi = psi_pair(F).first;
  LabeledRep r;
  r.label = "pi_Sp" + std::to_string(2 * k * (k + 1));
  ClassFunction sg = determinant_char(O);
  r.chi = big_theta(E.pair(O, Sp, psi), sg, r.label);
  r.provenance = "lift of sgn from " + O->name + " with psi";
  certify(r);
  r.label_ok = theta_multiplicity(E.pair(O, Sp, psi), sg, r.chi) == 1;
  if (!r.label_ok) r.label_note = "sgn does not occur once against the lift";
  return r;
}

std::pair<LabeledRep, LabeledRep> build_odd_orth_unipotent(Engine& E, int k, int eps, int q) {
  const FieldCtx& F = E.field(q);
  bool beta = eps > 0;
  int dim = 2 * k * (k + 1) + 1;
  GroupPtr O = E.group(q, eps > 0 ? Tower::OOddPlus : Tower::OOddMinus, dim);
  LabeledRep th = base_theta(E, k, q, beta);
  auto psi = psi_pair(F).first;
  ClassFunction lift = big_theta(E.pair(th.chi.G, O, psi), th.chi);
  ClassFunction twist = lift * determinant_char(O);
  std::string tag = std::string("O") + std::to_string(dim) + (eps > 0 ? "+" : "-");
  int s = central_sign(lift);
  LabeledRep p, m;
  p.chi = s >= 0 ? lift : twist;
  m.chi = s >= 0 ? twist : lift;
  p.label = "pi^+_" + tag;
  m.label = "pi^-_" + tag;
  p.chi.label = p.label;
  m.chi.label = m.label;
  std::string src = "lift of " + th.label + " to " + O->name + " with psi";
  p.provenance = s >= 0 ? src : src + ", twisted by sgn";
  m.provenance = s >= 0 ? src + ", twisted by sgn" : src;
  for (LabeledRep* r : {&p, &m}) certify(*r);
  p.label_ok = central_sign(p.chi) == 1;
  m.label_ok = central_sign(m.chi) == -1;
  if (!p.label_ok || !m.label_ok) p.label_note = m.label_note = "central value is not +-dim";
  return {p, m};
}

ClassFunction weil_piece(Engine& E, int q, const AddChar& psi, bool odd, const std::string& label) {
  const FieldCtx& F = E.field(q);
  GroupPtr G = E.group(q, Tower::Sp, 2);
  E.gate();
  WeilCharacter chi(F, psi);
  // omega(-1) is chi(-1) times the parity operator
  double c = F.legendre(F.neg(1)) * (odd ? -1.0 : 1.0);
  const Mat& J = G->space.gram;
  Elt m1 = F.neg(1);
  return from_function(
      G, [&](const Mat& g) { return 0.5 * (chi(g, J) + c * chi(scale(F, m1, g), J)); }, label);
}

TableSpec table_spec(Engine& E, const std::string& pair, int q) {
  const FieldCtx& F = E.field(q);
  auto [psi, psi2] = psi_pair(F);
  TableSpec S;
  S.pair = pair;
  S.psi = psi;
  if (pair == "sp4:o2minus") {
    S.orth = E.group(q, Tower::OEvenMinus, 2);
    S.sp = E.group(q, Tower::Sp, 4);
    S.rows = irr_small(S.orth);
    const PairTable& T = E.pair(S.orth, S.sp, psi);
    for (const auto& r : S.rows) S.cols.push_back(big_theta(T, r, "Theta(" + r.label + ")"));
  } else if (pair == "sl2:o1plus") {
    S.orth = E.group(q, Tower::OOddPlus, 1);
    S.sp = E.group(q, Tower::Sp, 2);
    S.rows.push_back(trivial(S.sp));
    S.rows.back().label = "triv";
    S.rows.push_back(weil_piece(E, q, psi, false, "omega_psi.even"));
    S.rows.push_back(weil_piece(E, q, psi, true, "omega_psi.odd"));
    S.rows.push_back(weil_piece(E, q, psi2, false, "omega_psi'.even"));
    S.rows.push_back(weil_piece(E, q, psi2, true, "omega_psi'.odd"));
    S.cols = irr_small(S.orth);
  } else {
    throw ConfigError("unknown pair '" + pair + "' (expected sp4:o2minus or sl2:o1plus)");
  }
  return S;
}

MultTable pair_table(Engine& E, const TableSpec& S) {
  return multiplicity_table(E.pair(S.orth, S.sp, S.psi), S.rows, S.cols, S.pair);
}

}  // namespace fqt

#include "fqt/theta.hpp"

namespace fqt {

namespace {
bool same_group(const GroupPtr& a, const GroupPtr& b) { return a == b || a->name == b->name; }
}  // namespace

ClassFunction big_theta(const PairTable& T, const ClassFunction& pi, const std::string& label) {
  bool from_orth = same_group(pi.G, T.orth);
  if (!from_orth && !same_group(pi.G, T.sp)) throw std::invalid_argument("big_theta: " + pi.label + " lives on neither factor");
  const Group& S = from_orth ? *T.orth : *T.sp;
  GroupPtr target = from_orth ? T.sp : T.orth;
  ClassFunction out(target, label.empty() ? "Theta(" + pi.label + ")" : label);
  int ns = S.num_classes(), nt = target->num_classes();
  for (int s = 0; s < ns; ++s) {
    cplx w = static_cast<double>(S.class_size[s]) * std::conj(pi.v[s]);
    if (w == cplx(0)) continue;
    for (int t = 0; t < nt; ++t) out.v[t] += w * (from_orth ? T(s, t) : T(t, s));
  }
  for (auto& x : out.v) x /= static_cast<double>(S.order());
  if (out.degree() < 0) throw NumericError("negative dimension for " + out.label);
  return out;
}

long long theta_multiplicity(const PairTable& T, const ClassFunction& a, const ClassFunction& b) {
  ClassFunction th = big_theta(T, a);
  return round_checked(inner_raw(th, b), "m(" + a.label + ", " + b.label + ")");
}

MultTable multiplicity_table(const PairTable& T, const std::vector<ClassFunction>& rows,
                             const std::vector<ClassFunction>& cols, const std::string& pair_name) {
  MultTable M;
  M.pair = pair_name;
  M.q = T.orth->F->q;
  for (auto& c : cols) M.cols.push_back(c.label);
  for (auto& r : rows) {
    M.rows.push_back(r.label);
    ClassFunction th = big_theta(T, r);
    std::vector<long long> line;
    for (auto& c : cols) line.push_back(round_checked(inner_raw(th, c), "m(" + r.label + ", " + c.label + ")"));
    M.m.push_back(line);
  }
  return M;
}

int tower_dim(Tower t, int index) {
  return (t == Tower::OOddPlus || t == Tower::OOddMinus) ? 2 * index + 1 : 2 * index;
}

int tower_first_index(Tower t) { return t == Tower::OEvenMinus ? 1 : 0; }

FirstOccurrence first_occurrence(Engine& E, const ClassFunction& pi, Tower target, const AddChar& psi, int bound) {
  const Group& S = *pi.G;
  if (S.space.symplectic() == (target == Tower::Sp))
    throw ConfigError("first occurrence needs the opposite kind of tower for " + S.name);
  if (bound < 0) bound = S.n;
  FirstOccurrence r;
  for (int i = tower_first_index(target); i <= bound; ++i) {
    r.bound = i;
    GroupPtr H = E.group(S.F->q, target, tower_dim(target, i));
    ClassFunction th = big_theta(E.pair(pi.G, H, psi), pi);
    long long d = th.degree();
    r.dims.push_back(d);
    if (d > 0) {
      r.found = true;
      r.index = i;
      r.theta = th;
      break;
    }
  }
  return r;
}

Mat orthogonal_splitting(const FormedSpace& V, const FormedSpace& Va, const FormedSpace& Vb) {
  const FieldCtx& F = *V.F;
  if (Va.dim + Vb.dim != V.dim) throw std::invalid_argument("orthogonal splitting: dimensions do not add up");
  Mat Ca = Va.dim ? find_isometric_basis(F, V.gram, Mat::identity(V.dim), Va.gram) : Mat(V.dim, 0);
  Mat perp = Va.dim ? nullspace(F, mul(F, transpose(Ca), V.gram)) : Mat::identity(V.dim);
  Mat Cb = Vb.dim ? find_isometric_basis(F, V.gram, perp, Vb.gram) : Mat(V.dim, 0);
  Mat C(V.dim, V.dim);
  for (int i = 0; i < V.dim; ++i) {
    for (int j = 0; j < Va.dim; ++j) C(i, j) = Ca(i, j);
    for (int j = 0; j < Vb.dim; ++j) C(i, Va.dim + j) = Cb(i, j);
  }
  return C;
}

SeesawReport seesaw_check(Engine& E, const SeesawSpec& S) {
  SeesawReport R;
  R.name = S.name;
  if (S.pi_sp.empty()) return R;
  GroupPtr Gp = S.pi_sp.front().G;
  const FieldCtx& F = *Gp->F;
  FormedSpace Va = standard_space(F, S.ta, S.a), Vb = standard_space(F, S.tb, S.b);
  Mat Bab = block_diag({Va.gram, Vb.gram});
  FormedSpace V = standard_space(F, orth_tower(S.a + S.b, discriminant(F, Bab)), S.a + S.b);
  GroupPtr G = E.group(V), Ga = E.group(Va), Gb = E.group(Vb);
  Mat C = orthogonal_splitting(V, Va, Vb), Ci = inverse_or_throw(F, C);
  int na = Ga->num_classes(), nb = Gb->num_classes();
  std::vector<int> cls(static_cast<size_t>(na) * nb);
  for (int x = 0; x < na; ++x)
    for (int y = 0; y < nb; ++y) {
      Mat e = mul(F, mul(F, C, block_diag({Ga->rep(x), Gb->rep(y)})), Ci);
      cls[static_cast<size_t>(x) * nb + y] = G->class_of(e);
    }
  const PairTable& TG = E.pair(G, Gp, S.psi);
  const PairTable& Ta = E.pair(Ga, Gp, S.psi);
  const PairTable& Tb = E.pair(Gb, Gp, S.psi);
  double H = static_cast<double>(Ga->order()) * static_cast<double>(Gb->order());
  for (const auto& ps : S.pi_sp) {
    ClassFunction th = big_theta(TG, ps);
    for (const auto& pa : S.pi_a)
      for (const auto& pb : S.pi_b) {
        cplx l = 0;
        for (int x = 0; x < na; ++x)
          for (int y = 0; y < nb; ++y)
            l += static_cast<double>(Ga->class_size[x]) * static_cast<double>(Gb->class_size[y]) *
                 th.v[cls[static_cast<size_t>(x) * nb + y]] * std::conj(pa.v[x] * pb.v[y]);
        SeesawRow row;
        row.label = ps.label + " | " + pa.label + " x " + pb.label;
        row.lhs = round_checked(l / H, "see-saw " + row.label);
        row.rhs = round_checked(inner_raw(ps, big_theta(Ta, pa) * big_theta(Tb, pb)), "see-saw " + row.label);
        R.pass = R.pass && row.lhs == row.rhs;
        R.rows.push_back(row);
      }
  }
  return R;
}

}  // namespace fqt

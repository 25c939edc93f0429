#include "fqt/snapshot.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <set>

#include "fqt/descent.hpp"
#include "fqt/oracles.hpp"
#include "fqt/parabolic.hpp"

namespace fqt {

using sjson = nlohmann::json;
using oracle::EMat;

Snapshot Snapshot::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("snapshot not found: " + path);
  Snapshot s;
  s.data = sjson::parse(in);
  if (s.data.value("format", "") != "fqt-oracle-snapshot") throw std::runtime_error("not an oracle snapshot: " + path);
  if (s.data.value("version", -1) != kSnapshotVersion)
    throw std::runtime_error("snapshot version " + s.data.value("version", sjson(-1)).dump() + " != " +
                             std::to_string(kSnapshotVersion) + "; re-pin");
  return s;
}

void Snapshot::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << data.dump(2) << '\n';
}

bool Snapshot::has(const std::string& key) const { return data.contains("entries") && data["entries"].contains(key); }
const sjson& Snapshot::value(const std::string& key) const { return data.at("entries").at(key).at("value"); }
std::string Snapshot::method(const std::string& key) const { return data.at("entries").at(key).at("method"); }

std::vector<std::string> Snapshot::keys() const {
  std::vector<std::string> k;
  if (data.contains("entries"))
    for (auto it = data["entries"].begin(); it != data["entries"].end(); ++it) k.push_back(it.key());
  return k;
}

std::vector<std::string> snapshot_mismatches(const Snapshot& pinned, const Snapshot& fresh) {
  std::set<std::string> all;
  for (auto& k : pinned.keys()) all.insert(k);
  for (auto& k : fresh.keys()) all.insert(k);
  std::vector<std::string> bad;
  for (const auto& k : all) {
    if (!pinned.has(k) || !fresh.has(k) || pinned.data["entries"][k] != fresh.data["entries"][k]) bad.push_back(k);
  }
  return bad;
}

namespace {

double tidy(double x) {
  double r = std::round(x * 1e4) / 1e4;
  return r == 0 ? 0.0 : r;
}

sjson cjson(cplx z) { return sjson::array({tidy(z.real()), tidy(z.imag())}); }

std::string today() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[16];
  std::strftime(buf, sizeof buf, "%Y-%m-%d", std::gmtime(&t));
  return buf;
}

struct Builder {
  sjson entries = sjson::object();
  void put(const std::string& key, const std::string& method, sjson value) {
    entries[key] = {{"method", method}, {"value", std::move(value)}};
  }
};

// every element: cached groups carry no generators, and these groups are small
std::vector<Mat> elements_of(const Group& G) {
  std::vector<Mat> el;
  for (uint64_t i = 0; i < G.order(); ++i) el.push_back(G.element(i));
  return el;
}

Realizer realizer(Engine& E) {
  return [&E](const FormedSpace& V) { return E.group(V); };
}


// permutation action of SL_2 on the q+1 lines of F_q^2
EMat line_permutation(const FieldCtx& F, const Mat& g) {
  std::vector<Vec> lines;
  for (Elt a : F.elements()) lines.push_back({1, a});
  lines.push_back({0, 1});
  auto normal = [&](Vec v) {
    Elt s = v[0] != 0 ? F.inv(v[0]) : F.inv(v[1]);
    return Vec{F.mul(s, v[0]), F.mul(s, v[1])};
  };
  const int n = static_cast<int>(lines.size());
  EMat P = EMat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    Vec w = normal(apply(F, g, lines[i]));
    for (int j = 0; j < n; ++j)
      if (lines[j] == w) P(j, i) = 1;
  }
  return P;
}

std::vector<Mat> upper_unipotent(const FieldCtx& F) {
  std::vector<Mat> N;
  for (Elt b : F.elements()) {
    Mat u = Mat::identity(2);
    u(0, 1) = b;
    N.push_back(u);
  }
  return N;
}

EMat average(const std::vector<EMat>& ms) {
  EMat S = EMat::Zero(ms[0].rows(), ms[0].cols());
  for (const auto& m : ms) S += m;
  return S / static_cast<double>(ms.size());
}

// unipotent radical of the stabiliser of the first canonical line, found by scanning G
std::vector<Mat> line_radical(const Group& G) {
  const FieldCtx& F = *G.F;
  std::vector<Mat> out;
  for (uint64_t i = 0; i < G.order(); ++i) {
    Mat g = G.element(i);
    bool ok = true;
    for (int j = 0; j + 1 < G.n && ok; ++j)
      for (int r = 1; r < G.n && ok; ++r) ok = g(r, j) == (r == j ? 1 : 0);
    for (int j = 0; j + 1 < G.n && ok; ++j) ok = g(j, j) == 1;
    if (ok) out.push_back(g);
  }
  (void)F;
  return out;
}

void field_entries(Engine& E, Builder& B) {
  for (int q : {3, 5, 9}) {
    const FieldCtx& F = E.field(q);
    bool sq = false;
    for (Elt x : F.elements()) sq = sq || F.mul(x, x) == F.neg(1);
    B.put("field.q" + std::to_string(q) + ".minus_one_is_square", "exhaustive squaring", sq);
  }
}

void form_entries(Engine& E, Builder& B) {
  const FieldCtx& F = E.field(3);
  FormedSpace V = standard_space(F, Tower::OEvenMinus, 2);
  int iso = 0;
  std::set<std::string> classes;
  for (long long i = 1; i < count_vectors(F, 2); ++i) {
    Vec v = vector_at(F, 2, i);
    Elt Q = V.Q(v);
    if (Q == 0)
      ++iso;
    else
      classes.insert(std::string(1, class_of(F, Q).sign()));
  }
  B.put("forms.q3.o2minus.isotropic_vectors", "exhaustive enumeration", iso);
  B.put("forms.q3.o2minus.value_classes", "exhaustive enumeration", sjson(std::vector<std::string>(classes.begin(), classes.end())));
}

void group_entries(Engine& E, Builder& B) {
  struct Item {
    int q;
    Tower t;
    int dim;
    bool classes;
  };
  for (Item it : {Item{3, Tower::Sp, 2, true}, Item{5, Tower::Sp, 2, true}, Item{3, Tower::Sp, 4, false},
                  Item{3, Tower::OEvenMinus, 2, true}, Item{3, Tower::OEvenPlus, 2, true},
                  Item{3, Tower::OOddPlus, 3, true}, Item{3, Tower::OOddPlus, 5, false},
                  Item{3, Tower::OOddMinus, 5, false}}) {
    const FieldCtx& F = E.field(it.q);
    std::string key = "group.q" + std::to_string(it.q) + "." + tower_name(it.t) + std::to_string(it.dim);
    FormedSpace V = standard_space(F, it.t, it.dim);
    B.put(key + ".order", "column-by-column isometry search", oracle::count_isometries(F, V.gram));
    if (it.classes) {
      GroupPtr G = E.group(V);
      std::vector<Mat> el;
      for (uint64_t i = 0; i < G->order(); ++i) el.push_back(G->element(i));
      B.put(key + ".classes", "orbit partition under conjugation", oracle::count_classes(F, el));
    }
  }
}

void parabolic_entries(Engine& E, Builder& B) {
  for (auto [t, dim] : {std::pair{Tower::Sp, 4}, std::pair{Tower::OOddPlus, 5}}) {
    GroupPtr G = E.group(3, t, dim);
    auto N = line_radical(*G);
    const FieldCtx& F = *G->F;
    int centre = 0;
    for (const Mat& x : N) {
      bool c = true;
      for (const Mat& y : N) c = c && mul(F, x, y) == mul(F, y, x);
      centre += c;
    }
    B.put("parabolic.q3." + tower_name(t) + std::to_string(dim) + ".line_radical",
          "scan of the enumerated group", {{"order", N.size()}, {"centre", centre}});
  }
}

void weil_entries(Engine& E, Builder& B) {
  const GateResult& g = E.gate();
  sjson names = sjson::array();
  for (int i : g.passing) names.push_back(kWeilScaleNames[i]);
  B.put("weil.gate.passing_conventions", "explicit Schrodinger-model traces", names);

  for (int q : {3, 5}) {
    const FieldCtx& F = E.field(q);
    GroupPtr G = E.group(q, Tower::Sp, 2);
    auto [psi, psi2] = psi_pair(F);
    std::string pre = "weil.q" + std::to_string(q) + ".sl2.";
    WeilModel W(F, G->space.gram, psi);
    std::vector<EMat> gens;
    for (const Mat& x : elements_of(*G)) gens.push_back(oracle::to_eigen(W.matrix(x)));
    B.put(pre + "self_intertwiners", "intertwiner nullspace over the group", oracle::hom_dimension(gens, gens));
    EMat par = oracle::to_eigen(W.parity()), I = EMat::Identity(W.dim(), W.dim());
    B.put(pre + "parity_split", "projector ranks",
          sjson::array({oracle::numeric_rank((I + par) / 2.0), oracle::numeric_rank((I - par) / 2.0)}));
    if (q == 3) {
      int support = 0, total = 0;
      for (long long i = 0; i < count_vectors(F, 2); ++i)
        for (Elt t : F.elements()) {
          ++total;
          support += std::abs(W.heisenberg(vector_at(F, 2, i), t).trace()) > 1e-9;
        }
      B.put(pre + "heisenberg_trace_support", "explicit Schrodinger-model traces",
            {{"nonzero", support}, {"total", total}});
    }
  }
}

void classfun_entries(Engine& E, Builder& B) {
  for (int q : {3, 5}) {
    const FieldCtx& F = E.field(q);
    GroupPtr G = E.group(q, Tower::Sp, 2);
    std::vector<EMat> gens;
    for (const Mat& x : elements_of(*G)) gens.push_back(line_permutation(F, x));
    std::vector<EMat> nmats;
    for (const Mat& n : upper_unipotent(F)) nmats.push_back(line_permutation(F, n));
    int nfixed = oracle::numeric_rank(average(nmats));
    B.put("classfun.q" + std::to_string(q) + ".sl2.borel_induced_trivial", "permutation model on lines",
          {{"dim", q + 1},
           {"norm", oracle::hom_dimension(gens, gens)},
           {"n_fixed", nfixed},
           {"steinberg_n_fixed", nfixed - 1}});
  }
  // cuspidality of the odd Weil pieces: N-fixed vectors inside the odd subspace
  for (int q : {3, 5}) {
    const FieldCtx& F = E.field(q);
    GroupPtr G = E.group(q, Tower::Sp, 2);
    auto [psi, psi2] = psi_pair(F);
    sjson v;
    for (auto [name, ps] : {std::pair{"psi", psi}, std::pair{"psi_prime", psi2}}) {
      WeilModel W(F, G->space.gram, ps);
      EMat par = oracle::to_eigen(W.parity()), I = EMat::Identity(W.dim(), W.dim());
      EMat Q = oracle::image_basis((I - par) / 2.0);
      std::vector<EMat> nm;
      for (const Mat& n : upper_unipotent(F)) nm.push_back(Q.adjoint() * oracle::to_eigen(W.matrix(n)) * Q);
      v[name] = oracle::numeric_rank(average(nm));
    }
    B.put("classfun.q" + std::to_string(q) + ".sl2.odd_weil_n_fixed", "projector rank in the explicit model", v);
  }
}

void unipotent_entries(Engine& E, Builder& B) {
  {
    const FieldCtx& F = E.field(5);
    GroupPtr G = E.group(5, Tower::Sp, 2);
    auto [psi, psi2] = psi_pair(F);
    sjson dims;
    std::vector<std::vector<cplx>> tr;
    for (auto [name, ps] : {std::pair{"alpha", psi}, std::pair{"beta", psi2}}) {
      WeilModel W(F, G->space.gram, ps);
      EMat par = oracle::to_eigen(W.parity()), I = EMat::Identity(W.dim(), W.dim());
      EMat Q = oracle::image_basis((I - par) / 2.0);
      dims[name] = Q.cols();
      std::vector<cplx> t;
      for (int c = 0; c < G->num_classes(); ++c) t.push_back((Q.adjoint() * oracle::to_eigen(W.matrix(G->rep(c))) * Q).trace());
      tr.push_back(t);
    }
    double diff = 0;
    for (size_t c = 0; c < tr[0].size(); ++c) diff = std::max(diff, std::abs(tr[0][c] - tr[1][c]));
    B.put("unipotent.q5.theta_dims", "odd subspace of the explicit model", dims);
    B.put("unipotent.q5.theta_alpha_differs_from_beta", "class traces in the explicit models", diff > 1e-6);
  }
  {
    // pi_Sp4 at q = 3: sgn-isotypic part of the (O_2^-, Sp_4) carrier
    const FieldCtx& F = E.field(3);
    GroupPtr O = E.group(3, Tower::OEvenMinus, 2), S = E.group(3, Tower::Sp, 4);
    oracle::PairModel M(F, O, S, psi_pair(F).first, E.carrier_bound);
    auto r = oracle::isotypic_on_orth_factor(M, determinant_char(O));
    sjson tr = sjson::array();
    for (cplx z : r.traces) tr.push_back(cjson(z));
    B.put("unipotent.q3.pi_sp4", "sgn-isotypic projection on the 81-dim carrier",
          {{"dim", r.rank}, {"class_traces", tr}});
  }
  {
    // lift of theta_alpha to O_5^-(3): norm from traces of the isotypic piece
    const FieldCtx& F = E.field(3);
    GroupPtr O = E.group(3, Tower::OOddMinus, 5), S = E.group(3, Tower::Sp, 2);
    oracle::PairModel M(F, O, S, psi_pair(F).first, E.carrier_bound);
    LabeledRep th = base_theta(E, 1, 3, false);
    auto r = oracle::isotypic_on_sp_factor(M, th.chi);
    double norm = 0;
    for (int c = 0; c < O->num_classes(); ++c) norm += O->class_size[c] * std::norm(r.traces[c]);
    norm /= static_cast<double>(O->order());
    B.put("theta.q3.sl2_o5minus.alpha_lift", "isotypic projection on the 243-dim carrier",
          {{"dim", tidy(r.traces[O->cls[0]].real())}, {"norm", tidy(norm)}});
  }
}

// Bessel multiplicities of pi^+ on O_5^+(3) at ell = 1, inside the explicit carrier
void bessel_entries(Engine& E, Builder& B) {
  const FieldCtx& F = E.field(3);
  GroupPtr O = E.group(3, Tower::OOddPlus, 5), S = E.group(3, Tower::Sp, 2);
  auto psi = psi_pair(F).first;
  oracle::PairModel M(F, O, S, psi, E.carrier_bound);
  LabeledRep th = base_theta(E, 1, 3, true);
  std::vector<EMat> sl;
  std::vector<cplx> chi;
  for (uint64_t i = 0; i < S->order(); ++i) {
    sl.push_back(M.sp_matrix(S->element(i)));
    chi.push_back(th.chi.v[S->cls[i]]);
  }
  EMat Q = oracle::image_basis(oracle::projector(sl, chi, 1.0));
  auto act = [&](const Mat& g) -> EMat {
    EMat A = Q.adjoint() * M.orth_matrix(g) * Q;
    return A;
  };
  Mat m1 = scale(F, F.neg(1), Mat::identity(5));
  double central = act(m1).trace().real() / static_cast<double>(Q.cols());
  double twist_sign = central > 0 ? 1.0 : -1.0;  // twist by sgn so that -1 acts by +1
  auto pi = [&](const Mat& g) -> EMat { return (det(F, g) == 1 ? 1.0 : twist_sign) * act(g); };

  sjson v;
  for (SquareClass cls : {SquareClass(1), SquareClass(-1)}) {
    std::string key(1, cls.sign());
    BesselData bd;
    try {
      bd = bessel_data(O, 1, cls, psi, realizer(E));
    } catch (const NoRationalOrbit&) {
      v[key] = "no rational orbit";
      continue;
    }
    sjson row;
    for (const ClassFunction& tgt : irr_small(bd.OW)) {
      std::vector<EMat> A, Bm;
      for (const Mat& h : elements_of(*bd.OW)) {
        A.push_back(EMat::Constant(1, 1, tgt.at(h)));
        Bm.push_back(pi(bd.embed(h)));
      }
      for (size_t i = 0; i < bd.P.N.size(); ++i) {
        A.push_back(EMat::Constant(1, 1, bd.nu[i]));
        Bm.push_back(pi(bd.P.N[i]));
      }
      row[tgt.label] = oracle::hom_dimension(A, Bm);
    }
    v[key] = {{"dim", Q.cols()}, {"w", bd.OW->name}, {"m", row}};
  }
  B.put("descent.q3.o5plus.pi_plus.bessel_ell1", "intertwiner nullspace in the 243-dim carrier", v);

  // first occurrence of the trivial character of O_3^+(3): plain scan
  GroupPtr O3 = E.group(3, Tower::OOddPlus, 3);
  BesselScan sc = bessel_first_occurrence(E, trivial(O3), psi);
  sjson cls = sjson::array();
  for (auto c : sc.realizing) cls.push_back(std::string(1, c.sign()));
  B.put("descent.q3.o3plus.triv.first_occurrence", "direct scan", {{"ell0", sc.ell0}, {"realizing", cls}});
}

void table_entries(Engine& E, Builder& B) {
  const FieldCtx& F = E.field(5);
  TableSpec T = table_spec(E, "sl2:o1plus", 5);
  oracle::PairModel M(F, T.orth, T.sp, T.psi, E.carrier_bound);
  sjson rows = sjson::array(), cols = sjson::array(), m = sjson::array();
  for (auto& c : T.cols) cols.push_back(c.label);
  for (auto& r : T.rows) {
    rows.push_back(r.label);
    sjson line = sjson::array();
    for (auto& c : T.cols) line.push_back(oracle::pair_multiplicity(M, r, c));
    m.push_back(line);
  }
  B.put("theta.q5.sl2_o1plus.table", "projector ranks on the 5-dim carrier", {{"rows", rows}, {"cols", cols}, {"m", m}});
}

}  // namespace

Snapshot compute_snapshot(Engine& E) {
  Builder B;
  field_entries(E, B);
  form_entries(E, B);
  group_entries(E, B);
  parabolic_entries(E, B);
  weil_entries(E, B);
  classfun_entries(E, B);
  unipotent_entries(E, B);
  bessel_entries(E, B);
  table_entries(E, B);
  Snapshot s;
  s.data["format"] = "fqt-oracle-snapshot";
  s.data["version"] = kSnapshotVersion;
  s.data["pinned"] = today();
  s.data["entries"] = B.entries;
  return s;
}

}  // namespace fqt

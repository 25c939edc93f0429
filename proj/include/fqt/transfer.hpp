#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fqt/report.hpp"
#include "fqt/theta.hpp"

namespace fqt {

struct IdentityRow {
  std::string label;
  json lhs, rhs;
  bool pass = false;
};

struct IdentityReport {
  std::string name;
  int q = 0;
  bool available = true;
  std::string note;  // why an instance is unavailable
  std::vector<IdentityRow> rows;
  bool pass() const;
};

// Isotropic ell-dimensional subspaces of an orthogonal space, each with a frame: an isometry
// x from the model X0 + W + Y0 (Gram [[0,0,I],[0,B_W,0],[I,0,0]], W standard) onto V whose first
// ell columns span the subspace.  All frames share one determinant, so they differ by SO(V).
struct IsotropicFrames {
  const FieldCtx* F = nullptr;
  int ell = 0;
  FormedSpace W;
  std::vector<Mat> frames, inverses;
};
IsotropicFrames isotropic_frames(const FormedSpace& V, int ell);

// Ind_P^{SO(V)}(tau (x) sigma) at g in SO(V), P the stabilizer of an isotropic ell-space:
// sum over fixed subspaces of tau(g on X) sigma(g on X^perp / X)
cplx induced_value(const IsotropicFrames& fr, const Mat& g, const std::function<cplx(const Mat&)>& tau,
                   const std::function<cplx(const Mat&)>& sigma);

// characters of the cyclic group SO_2^-, keyed by matrix: j-th power of a fixed generator's dual
std::function<cplx(const Mat&)> so2_character(GroupPtr SO2, int j);

// multiplicity transfer through parabolic induction and its induction-in-stages form, on
// SO_5^+ > SO_2^- with the unipotent cuspidal pi^+ of O_5^+ restricted
IdentityReport transfer_identity_check(Engine& E, int q);
// theta lifting vs parabolic induction on (Sp_4, O_3) from (SL_2, O_1) with a non-selfdual
// character of GL_1; unavailable when every such character is selfdual
IdentityReport induction_compat_check(Engine& E, int q);

// the toy diagram O_2^- > O_1 x O_1 and the diagram O_5 > O_4 x O_1 against Sp_4
std::vector<SeesawReport> configured_seesaws(Engine& E, int q);

// Weil characters of (SL_2, O_3^e) for psi against (SL_2, O_3^{-e}) for psi', on all class pairs
struct TwistResult {
  int checked = 0;
  double worst = 0;
};
TwistResult twisting_identity_check(Engine& E, int q);

// All of the above as one report ("identities"): see-saws at q = 3, the rest at every q.
// Unavailable instances become notes, not failures.
CaseReport verify_identities(Engine& E, int q);

json to_json(const IdentityReport& r);
json to_json(const SeesawReport& r);

}  // namespace fqt

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fqt/report.hpp"
#include "fqt/unipotent.hpp"

namespace fqt {

struct BesselQuotient {
  bool rational = true;          // false when no v0 of the class exists at this ell
  SquareClass v0_class;
  int ell = 0;
  std::optional<ClassFunction> D;  // on O(W); W may be 0-dimensional
  Tower w_tower = Tower::OOddPlus;
  int w_dim = 0;
  bool zero() const { return !D || D->is_zero(); }
};

// J_{ell,v0}(pi) on O(W).  ell = 0 is plain restriction to O(v0^perp).
BesselQuotient bessel_quotient(Engine& E, const ClassFunction& pi, int ell, SquareClass v0_class,
                               const AddChar& psi, int representative = 0);
long long bessel_multiplicity(const BesselQuotient& Q, const ClassFunction& target);

struct BesselScan {
  int ell0 = -1;                      // -1: nothing nonzero at any ell
  std::vector<SquareClass> realizing;
  std::vector<BesselQuotient> at_ell0;  // one per realizing class
  std::vector<BesselQuotient> above;    // every cell checked above ell0
};
// ell from min(witt index, (n-1)/2) down, both classes of v0
BesselScan bessel_first_occurrence(Engine& E, const ClassFunction& pi, const AddChar& psi);

struct FJQuotient {
  int ell = 0;
  bool psi_prime = false;
  ClassFunction D;  // on Sp(V_{n-ell}) (trivial group when ell = n)
};

FJQuotient fj_quotient(Engine& E, const ClassFunction& pi, int ell, bool psi_prime);
long long fj_multiplicity(const FJQuotient& Q, const ClassFunction& target);

struct FJScan {
  int ell0 = -1;
  std::vector<bool> realizing;  // psi_prime flags
  std::vector<FJQuotient> at_ell0;
  std::vector<FJQuotient> above;
};
FJScan fj_first_occurrence(Engine& E, const ClassFunction& pi);

// nu = psi_{p_ell, v0} is a character of N fixed by O(W); nu = omega (x) psi_ell is a
// representation of the Jacobi group.  Both return the worst defect found.
double bessel_character_defect(Engine& E, GroupPtr G, int ell, SquareClass v0_class, const AddChar& psi);
double fj_representation_defect(Engine& E, GroupPtr G, int ell, bool psi_prime, int samples = 400);

enum class Case { BOdd, BEven, FJ };
std::string case_name(Case c);
Case parse_case(const std::string& s);

// default strictness: Bessel always binding, FJ binding from q = 5
bool default_binding(Case c, int q);

// Runs the pipeline for one case and records every sub-assertion.  k must be 1 at desk scale;
// larger k is refused by the resource guards when the groups are realized.
CaseReport verify_descent_case(Engine& E, Case c, int k, int q, bool strict = false);

}  // namespace fqt

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fqt/classfun.hpp"
#include "fqt/engine.hpp"

namespace fqt {

// Theta(h) = (1/|G|) sum_g chi_omega(g, h) conj(pi(g)), lifting pi across the pair.
// Throws NumericError if the result is not a character-sized class function.
ClassFunction big_theta(const PairTable& T, const ClassFunction& pi, const std::string& label = {});
// <omega, pi (x) pi'> with pi on either factor
long long theta_multiplicity(const PairTable& T, const ClassFunction& a, const ClassFunction& b);

struct MultTable {
  std::string pair;
  int q = 0;
  std::vector<std::string> rows, cols;
  std::vector<std::vector<long long>> m;
};
MultTable multiplicity_table(const PairTable& T, const std::vector<ClassFunction>& rows,
                             const std::vector<ClassFunction>& cols, const std::string& pair_name);

// Dimension of the tower member with index n': 2n' (Sp, even O), 2n'+1 (odd O).
int tower_dim(Tower t, int index);
int tower_first_index(Tower t);  // 1 for O^-_even, else 0

struct FirstOccurrence {
  bool found = false;
  int index = -1;                // n^eps when found
  int bound = 0;                 // last index scanned
  std::vector<long long> dims;   // theta dimension at each scanned index, from the bottom
  ClassFunction theta;           // the first nonzero lift
};

// Smallest n' with Theta(pi) != 0 on the target tower member of index n'.  Default scan bound:
// twice the rank of the source symplectic group, or the source dimension for an orthogonal source.
FirstOccurrence first_occurrence(Engine& E, const ClassFunction& pi, Tower target, const AddChar& psi, int bound = -1);

// Orthogonal decomposition V = V_a + V_b of a standard space; columns of the result are a basis
// of V_a (standard Gram of dim a, tower ta) followed by a basis of V_b (standard Gram, tower tb).
Mat orthogonal_splitting(const FormedSpace& V, const FormedSpace& Va, const FormedSpace& Vb);

struct SeesawRow {
  std::string label;
  long long lhs = 0, rhs = 0;
};
struct SeesawReport {
  std::string name;
  std::vector<SeesawRow> rows;
  bool pass = true;
};

// G = O(Va + Vb) ⊃ H = O(Va) x O(Vb), G' = Sp(W) ⊂ H' = Sp(W) x Sp(W):
// <Res_H Theta_{G'->G}(pi'), pa (x) pb>_H = <pi', Theta(pa) Theta(pb)>_{G'} for every listed triple.
struct SeesawSpec {
  std::string name;
  Tower ta, tb;
  int a = 0, b = 0;
  AddChar psi;
  std::vector<ClassFunction> pi_sp;  // characters of G'
  std::vector<ClassFunction> pi_a;   // characters of O(Va)
  std::vector<ClassFunction> pi_b;   // characters of O(Vb)
};
SeesawReport seesaw_check(Engine& E, const SeesawSpec& S);

}  // namespace fqt

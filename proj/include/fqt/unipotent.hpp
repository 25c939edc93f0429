#pragma once

#include <string>
#include <utility>

#include "fqt/theta.hpp"

namespace fqt {

// A constructed representation with its certificates.  label_ok records the central-value
// labelling rule; label_note explains a failure.
struct LabeledRep {
  ClassFunction chi;
  std::string label;
  std::string provenance;
  bool irreducible = false;
  bool cuspidal = false;
  bool label_ok = false;
  std::string label_note;
};

// (pi^+, pi^-) = (triv, sgn) of O_2^-
std::pair<LabeledRep, LabeledRep> base_even_orth(Engine& E, int q);

// odd constituent of the Weil representation of Sp_{2k^2} for psi (alpha) and psi' (beta)
LabeledRep base_theta(Engine& E, int k, int q, bool beta);

// pi_{Sp_{2k(k+1)}} as the lift of sgn from O^{eps(k)}_{2k^2}
LabeledRep build_sp_unipotent(Engine& E, int k, int q);

// (pi^+, pi^-) of O^eps_{2k(k+1)+1}: the psi-lift of the theta representation that first
// occurs there (alpha for the minus tower, beta for the plus tower) and its sgn twist,
// ordered by the central sign
std::pair<LabeledRep, LabeledRep> build_odd_orth_unipotent(Engine& E, int k, int eps, int q);

// even or odd part of the Weil representation of Sp_2 for psi under f(u) -> f(-u)
ClassFunction weil_piece(Engine& E, int q, const AddChar& psi, bool odd, const std::string& label);

// Rows and columns of a published multiplicity table: "sp4:o2minus" (rows Irr O_2^-, columns
// their lifts to Sp_4) or "sl2:o1plus" (rows trivial and the four Weil pieces, columns Irr O_1^+).
struct TableSpec {
  std::string pair;
  GroupPtr orth, sp;
  AddChar psi;
  std::vector<ClassFunction> rows, cols;
};
TableSpec table_spec(Engine& E, const std::string& pair, int q);  // ConfigError on unknown pair
MultTable pair_table(Engine& E, const TableSpec& S);

// value at -1 divided by the dimension
int central_sign(const ClassFunction& chi);

}  // namespace fqt

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fqt/engine.hpp"
#include "fqt/theta.hpp"

// Brute-force cross-checks on explicit matrices.  Slow by design and independent of the
// class-sum path wherever possible.
namespace fqt::oracle {

using EMat = Eigen::MatrixXcd;

EMat to_eigen(const CMat& m);
int numeric_rank(const EMat& A, double tol = 1e-7);

// (dim/|H|) sum_h conj(chi(h)) M(h) over an explicit list of matrices
EMat projector(const std::vector<EMat>& mats, const std::vector<cplx>& chi, double dim);

// orthonormal basis (columns) of the image of a projector
EMat image_basis(const EMat& P, double tol = 1e-7);

// dim {X : X A_i = B_i X for all i}, the A_i and B_i images of the same generators
int hom_dimension(const std::vector<EMat>& A, const std::vector<EMat>& B);

// matrices preserving a Gram matrix, found by column-by-column search
unsigned long long count_isometries(const FieldCtx& F, const Mat& gram);
// number of conjugacy classes of an explicit finite matrix group
int count_classes(const FieldCtx& F, const std::vector<Mat>& elems);

// Weil representation of a dual pair on the explicit carrier: g (x) 1 and 1 (x) h
struct PairModel {
  PairModel(const FieldCtx& F, GroupPtr orth, GroupPtr sp, const AddChar& psi, long long carrier_bound = 4096);
  EMat orth_matrix(const Mat& g) const;
  EMat sp_matrix(const Mat& h) const;
  GroupPtr orth, sp;
  WeilModel W;

 private:
  const FieldCtx* F_;
};

// character of the chi-isotypic piece for the action of one factor, evaluated on the
// classes of the other factor: tr(P_chi M(h)) / dim chi
struct IsotypicResult {
  int rank = 0;
  std::vector<cplx> traces;  // per class of the other factor
};
IsotypicResult isotypic_on_orth_factor(const PairModel& M, const ClassFunction& chi_orth);
IsotypicResult isotypic_on_sp_factor(const PairModel& M, const ClassFunction& chi_sp);

// <omega, r (x) c> by projector rank on the carrier
long long pair_multiplicity(const PairModel& M, const ClassFunction& r_sp, const ClassFunction& c_orth);

}  // namespace fqt::oracle

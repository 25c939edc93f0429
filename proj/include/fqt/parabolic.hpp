#pragma once

#include <functional>
#include <vector>

#include "fqt/group.hpp"

namespace fqt {

// Levels of canonical basis vectors for the flag of isotropic blocks of sizes comp:
// block i has level i, the complement level r, and the dual of block i level 2r - i.
struct Levels {
  std::vector<int> level;
  int count = 0;
};
Levels flag_levels(const FormedSpace& V, const std::vector<int>& comp);

// All elements of the unipotent radical: Cayley images of the level-raising Lie algebra.
std::vector<Mat> unipotent_radical(const FormedSpace& V, const Levels& lv);

struct Parabolic {
  GroupPtr G;
  std::vector<int> comp;
  int L = 0;  // dimension of the isotropic flag top
  Levels lv;
  FormedSpace complement;
  std::vector<Mat> N;

  // Levi element from GL blocks (one per comp entry, acting on the e-block) and an
  // isometry h of the complement (identity if empty).
  Mat levi_embed(const std::vector<Mat>& gl_blocks, const Mat& h) const;
  Mat levi_part(const Mat& p) const;
  // GL block i of a Levi element
  Mat gl_block(const Mat& m, int i) const;
  Mat complement_block(const Mat& m) const;
  int block_start(int i) const;
};

Parabolic parabolic(GroupPtr G, std::vector<int> comp);
// the Levi factor, enumerated: all GL tuples times the complement group
std::vector<Mat> levi_elements(const Parabolic& P, const Group& complement_group);
std::vector<Mat> gl_elements(const FieldCtx& F, int k);

// realizes isometry groups of auxiliary spaces (lets callers share a cache)
using Realizer = std::function<GroupPtr(const FormedSpace&)>;

// Bessel data: H = O(W) x| N for the flag of ell lines, with character nu = psi_{p_ell, v0}.
struct BesselData {
  Parabolic P;
  FlagDecomposition D;
  GroupPtr OW;                 // standard isometry group of W
  Mat C, Cinv;                 // complement coordinates: columns W basis, then v0
  std::vector<cplx> nu;        // nu(N[i])
  Mat embed(const Mat& h) const;
};

BesselData bessel_data(GroupPtr G, int ell, SquareClass v0_class, const AddChar& psi, const Realizer& realize_w,
                       int representative = 0);

// Fourier-Jacobi data on Sp(V): H = Sp(V0) x| N for the flag of ell lines.
struct HeisenbergPoint {
  Vec w;   // vector part in complement coordinates
  Elt t;   // centre, for the law (w,t)(w',t') = (w+w', t+t'+(w,w')/2)
};

struct FJData {
  Parabolic P;
  GroupPtr SpSmall;
  std::vector<cplx> psi_ell;          // psi(sum z_{i,i+1}) for N[i]
  std::vector<HeisenbergPoint> heis;  // image of the N_ell part of N[i]
  Mat embed(const Mat& h) const;
};

FJData fj_data(GroupPtr G, int ell, const AddChar& psi, const Realizer& realize_w);
HeisenbergPoint heis_mul(const FieldCtx& F, const Mat& omega, const HeisenbergPoint& a, const HeisenbergPoint& b);

}  // namespace fqt

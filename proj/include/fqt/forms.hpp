#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fqt/linalg.hpp"

namespace fqt {

enum class Tower { Sp, OEvenPlus, OEvenMinus, OOddPlus, OOddMinus };

std::string tower_name(Tower t);
Tower parse_tower(const std::string& s);
bool is_orthogonal(Tower t);
// tower of an orthogonal space from parity and discriminant
Tower orth_tower(int dim, SquareClass disc);

// Canonical basis e_1..e_m, anisotropic core, e'_m..e'_1 with (e_i, e'_i) = 1.
struct FormedSpace {
  const FieldCtx* F = nullptr;
  int dim = 0;
  Tower tower = Tower::Sp;
  Mat gram;
  SquareClass disc;  // meaningful for orthogonal spaces
  int witt = 0;      // number of hyperbolic planes in the canonical basis

  bool symplectic() const { return tower == Tower::Sp; }
  int sign() const { return symplectic() ? -1 : 1; }  // (v,w) = sign (w,v)
  Elt form(const Vec& u, const Vec& w) const { return bilinear(*F, gram, u, w); }
  Elt Q(const Vec& v) const { return form(v, v); }
  std::string name() const;
};

// (-1)^{n(n-1)/2} det G as a square class
SquareClass discriminant(const FieldCtx& F, const Mat& G);

FormedSpace standard_space(const FieldCtx& F, Tower t, int dim);
FormedSpace space_from_gram(const FieldCtx& F, const Mat& G, bool symplectic);
std::vector<FormedSpace> witt_neighbors(const FormedSpace& V);

struct NoRationalOrbit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// V = X + V_{n-2l} + X^dual.  Indices refer to the canonical basis of V.
struct FlagDecomposition {
  const FormedSpace* parent = nullptr;
  int ell = 0;
  std::vector<int> x_idx, xdual_idx, comp_idx;  // x_idx[i] pairs with xdual_idx[i]
  FormedSpace complement;                        // standard space on comp_idx
  std::optional<Vec> v0;                         // complement coordinates
  std::optional<FormedSpace> W;                  // v0-perp, as a standard space
  Mat W_basis;      // complement-coordinate columns: isometry from W's standard Gram
  SquareClass v0_class;
};

FlagDecomposition flag_decomposition(const FormedSpace& V, int ell,
                                     std::optional<SquareClass> v0_class = std::nullopt,
                                     int representative = 0);

// Columns T with T^T G T = target, spanning a subspace of the column span of S
// (S given as columns).  Throws if none exists.
Mat find_isometric_basis(const FieldCtx& F, const Mat& G, const Mat& S, const Mat& target);

}  // namespace fqt

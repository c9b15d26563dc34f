#pragma once

#include "gauge_mpv/symmetry.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gauge_mpv {

struct ElementaryBlock {
  MpsTensor b;
  Rep r, l, x, y;
  // Set when the representations admit no nonzero block; b is then the zero tensor.
  bool irrep_mismatch = false;
  std::string note;
};

// B^{m,n} = |m><n| with physical index m * dim(r) + n, R = 1 (x) D^r, L = D^l (x) 1,
// X = D^r, Y = conj(D^l).
ElementaryBlock elementary_b_block(const Rep& l, const Rep& r);
// Same physical action with prescribed virtual representations: the block solving
// R.B = B X and L.B = Y^{-1} B, normalized, or zero when only B = 0 solves it.
ElementaryBlock elementary_b_block(const Rep& l, const Rep& r, const Rep& x, const Rep& y);

// A^M = sum over copies J of j0 in conj(j) (x) l of alpha_J <J,M|conj j,m; l,n> |m><n|.
// ZeroByWignerEckart when j0 does not occur.
MpsTensor wigner_eckart_a_block(const std::string& j0, const Rep& j, const Rep& l, const Catalog& catalog,
                                const std::vector<cplx>& alpha = {});

struct WignerEckartTensor {
  MpsTensor a;
  Rep theta;
  // (label, copy) per physical block, in physical order.
  std::vector<std::pair<std::string, int>> layout;
};

// Physical space is the direct sum over the selected irreps (all copies) of conj(j) (x) l;
// alpha maps label to one coefficient per copy (default 1). BadSpinSet for labels absent
// from the decomposition.
WignerEckartTensor wigner_eckart_tensor(const Rep& j, const Rep& l, const Catalog& catalog,
                                        const std::vector<std::string>& labels = {},
                                        const std::map<std::string, std::vector<cplx>>& alpha = {});

struct GaugedSymmetry {
  TensorPair pair;  // (A, B)
  Rep r, l;
  Rep x, y;
  // Orthonormal bases of the invariant virtual subspaces carrying one B sector each.
  std::vector<Matrix> subspaces;
};

// A satisfies Theta(g).A = X(g)^{-1} A Y(g); B is block diagonal over the irreducible subspaces
// of the joint action of X and Y, with R = (+) 1 (x) X^a and L = (+) conj(Y^a) (x) 1.
GaugedSymmetry gauge_global_symmetry(const MpsTensor& a, const Rep& theta, const Rep& x, const Rep& y,
                                     std::uint64_t seed = 0);
// Finite groups: X is extracted per diagonal block of A and the blocks are lifted to a common
// multiplier; MixedCohomology when no lift exists.
GaugedSymmetry gauge_global_symmetry(const MpsTensor& a, const Rep& theta, std::uint64_t seed = 0);

// Phases mu with beta(g,h) = mu(g) mu(h) / mu(gh), or nullopt when beta is not a coboundary.
std::optional<std::vector<cplx>> solve_coboundary(const Multiplier& beta, const FiniteGroup& group, double tol = 1e-8);

struct MatterCoupling {
  MpsTensor a;
  Rep theta;
  std::vector<std::string> j_labels;
};

// Pairs the k-th irreducible copy of X with the k-th of Y and places one Wigner-Eckart block per
// pair on the diagonal; J(k) defaults to the lowest-dimensional irrep of conj(j_k) (x) l_k.
MatterCoupling couple_matter_to_gauge(const Rep& x, const Rep& y, const Catalog& catalog,
                                      const std::map<int, std::string>& j_override = {});

struct GaugeConstruction {
  std::string name;
  GroupPtr group;
  TensorPair pair;  // (A, B)
  Rep theta, r, l, x, y;
  std::map<std::string, std::vector<cplx>> alpha;
  std::vector<cplx> beta;
};

GaugeConstruction build_d10_example();

struct Su2Example {
  GaugeConstruction construction;
  GaussOperators gauss;
};

struct Su2Options {
  int twice_r = 1;
  int twice_l = 1;
  std::vector<std::string> j_set;  // empty: every irrep of conj(r) (x) l
  std::map<std::string, std::vector<cplx>> alpha;
  cplx beta = 1.0;
  // B -> B (+) B and A -> A_1 (+) A_2 with the second copy using alpha2.
  bool duplicate = false;
  std::map<std::string, std::vector<cplx>> alpha2;
};

Su2Example build_su2_example(const Su2Options& options = {});

}  // namespace gauge_mpv

#pragma once

#include "gauge_mpv/mps_tensor.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gauge_mpv {

// Orthonormal basis of the unital algebra generated by square matrices, as vectorized columns.
Matrix algebra_basis(const std::vector<Matrix>& generators);

// Orthonormal basis of a minimal proper subspace invariant under every generator,
// or nullopt when the generators act irreducibly. Throws NumericalDegeneracy when
// the cyclic-subspace rank is tolerance-ambiguous.
std::optional<Matrix> minimal_invariant_subspace(const std::vector<Matrix>& generators, Rng& rng);

struct BntCopy {
  cplx weight;
  // The block equals weight * similarity^{-1} * A_j * similarity.
  Matrix similarity;
};

struct BntBlock {
  MpsTensor tensor;     // normal, trace preserving, spectral radius 1
  Matrix fixed_point;   // positive diagonal right fixed point with unit trace
  std::vector<BntCopy> copies;
};

struct CanonicalFormResult {
  std::vector<BntBlock> blocks;
  int blocking_factor = 1;
  std::vector<int> checked_lengths;
  double reassembly_error = 0.0;

  // Direct sum over (j, q) of weight * V^{-1} A_j V.
  MpsTensor reassemble() const;
};

struct CanonicalFormOptions {
  std::uint64_t seed = 0;
  int check_length = 6;
};

CanonicalFormResult canonical_form(const MpsTensor& t, const CanonicalFormOptions& options = {});

// Transformation to trace-preserving form with diagonal fixed point: returns V with
// V t V^{-1} in that form, plus the diagonal fixed point. t must be normal with radius 1.
struct GaugeFixing {
  Matrix similarity;
  Matrix fixed_point;
};
GaugeFixing cfii_gauge(const MpsTensor& t);

// Relation between two tensors in canonical form: block k of t1 maps to block
// permutation[k] of t2 as t2_block = phase * scale * X_k t1_block X_k^{-1}.
struct GaugeRelation {
  std::vector<Eigen::Index> offsets1, sizes1, offsets2, sizes2;
  std::vector<int> permutation;
  std::vector<Matrix> x;
  std::vector<cplx> phases;
  std::vector<double> scales;

  MpsTensor apply(const MpsTensor& t1) const;
};

// Contiguous diagonal blocks of a block-diagonal tensor: (offset, size) pairs.
std::vector<std::pair<Eigen::Index, Eigen::Index>> diagonal_blocks(const MpsTensor& t, double tol = 1e-12);

// NotEquivalent when the MPVs differ for some N <= check_length; GaugeNotFound when a
// block has no partner.
GaugeRelation find_gauge_between(const MpsTensor& t1, const MpsTensor& t2, int check_length = 6);

struct PairComponent {
  TensorPair pair;
  cplx weight;
};

struct PairDecomposition {
  // Blocked pair: A~ = A (B A)^{left_words}, B~ = B (A B)^{right_words}; blocking_factor
  // = left_words + right_words + 1 pairs.
  int blocking_factor = 1;
  int left_words = 0;
  int right_words = 0;
  std::vector<PairComponent> components;
  std::vector<int> checked_lengths;
  double reassembly_error = 0.0;
};

TensorPair block_pair(const TensorPair& p, int left_words, int right_words);
PairDecomposition pair_decompose(const TensorPair& p, std::uint64_t seed = 0, int check_length = 4);

}  // namespace gauge_mpv

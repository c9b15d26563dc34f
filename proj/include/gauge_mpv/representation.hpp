#pragma once

#include "gauge_mpv/group.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gauge_mpv {

inline constexpr double kRepTolerance = 1e-9;

// Unitary projective representation. Finite groups store one matrix per element;
// SU(2) stores the three Hermitian generators tau_a with D(phi) = exp(i phi.tau).
class Rep {
 public:
  // Validates unitarity and projectivity (NonUnitary, NotARep).
  static Rep finite(GroupPtr group, std::vector<Matrix> matrices, std::string label = "",
                    double tol = kRepTolerance);
  // Validates Hermiticity and the su(2) commutation relations (BadAlgebra).
  static Rep lie(GroupPtr group, std::vector<Matrix> generators, std::string label = "",
                 double tol = kRepTolerance);

  const GroupPtr& group_ptr() const { return group_; }
  const Group& group() const { return *group_; }
  bool is_lie() const { return !group_->is_finite(); }
  Eigen::Index dim() const { return dim_; }
  const std::string& label() const { return label_; }
  Rep relabeled(std::string label) const;

  Matrix at(const GroupElement& g) const;
  const Matrix& at_index(int g) const { return mats_.at(g); }
  // Finite: per-element matrices. SU(2): generators.
  const std::vector<Matrix>& matrices() const { return mats_; }
  const std::vector<Matrix>& generators() const { return mats_; }
  // Matrices whose joint commutant equals that of the group action.
  std::vector<Matrix> constraint_matrices() const;
  // Trivial for SU(2).
  const Multiplier& multiplier() const { return multiplier_; }

 private:
  GroupPtr group_;
  std::vector<Matrix> mats_;
  std::string label_;
  Eigen::Index dim_ = 0;
  Multiplier multiplier_;
};

// Extracts gamma(g,h) with U(g)U(h) = gamma(g,h) U(gh); NotARep, NonUnitary.
Multiplier check_projective_rep(const std::vector<Matrix>& matrices, const FiniteGroup& group,
                                double tol = kRepTolerance);

Rep conjugate_rep(const Rep& rep);
Rep tensor_product_rep(const Rep& a, const Rep& b);
Rep direct_sum_rep(const std::vector<Rep>& reps);
Rep trivial_rep(const GroupPtr& group, Eigen::Index dim = 1);
// W^dagger U(g) W for W with orthonormal columns spanning an invariant subspace.
Rep restrict_rep(const Rep& rep, const Matrix& w);

// Frobenius-orthonormal basis of {T : to_k T = T from_k for all k}.
std::vector<Matrix> intertwiners(const std::vector<Matrix>& from, const std::vector<Matrix>& to, Eigen::Index n1,
                                 Eigen::Index n2, double rel_cutoff = 1e-9);
// Basis of {T : rep2(g) T = T rep1(g)}; MultiplierMismatch, GroupMismatch.
std::vector<Matrix> intertwiner_space(const Rep& rep1, const Rep& rep2);

struct Catalog {
  GroupPtr group;
  std::vector<Rep> irreps;

  const Rep& by_label(const std::string& label) const;
  int index_of(const std::string& label) const;
};

struct RepDecomposition {
  struct Block {
    std::string label;
    int catalog_index = 0;
    int multiplicity = 0;
    Eigen::Index dim = 0;
  };
  // One entry per irrep copy, in basis_change column order.
  struct Copy {
    int catalog_index = 0;
    int copy = 0;
    Eigen::Index offset = 0;
    Eigen::Index dim = 0;
  };

  std::vector<Block> blocks;
  std::vector<Copy> copies;
  // Columns are the irrep basis vectors: U(g) W = W (direct sum of D^J(g)).
  Matrix basis_change;
  double off_block_residual = 0.0;
};

// IncompleteCatalog when the catalog does not exhaust the representation.
RepDecomposition decompose_rep(const Rep& rep, const Catalog& catalog);

struct CGTable {
  struct Row {
    std::string label;
    int catalog_index = 0;
    int copy = 0;
    int m = 0;
  };

  std::string left;
  std::string right;
  Eigen::Index left_dim = 0;
  Eigen::Index right_dim = 0;
  std::vector<Row> rows;
  // Rows (J, copy, M), columns m * right_dim + n.
  Matrix entries;

  // <J,M| j,m; l,n> for the given copy of J.
  cplx coefficient(const std::string& label, int copy, int big_m, int m, int n) const;
  // Coefficient rows belonging to (label, copy).
  Matrix block(const std::string& label, int copy) const;
  int multiplicity(const std::string& label) const;
};

CGTable clebsch_gordan(const Rep& j, const Rep& l, const Catalog& catalog);

}  // namespace gauge_mpv

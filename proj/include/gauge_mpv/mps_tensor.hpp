#pragma once

#include "gauge_mpv/linalg.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gauge_mpv {

// Rank-3 tensor stored as d matrices A^i of shape left_dim x right_dim.
class MpsTensor {
 public:
  MpsTensor() = default;
  explicit MpsTensor(std::vector<Matrix> matrices);
  static MpsTensor zero(Eigen::Index phys_dim, Eigen::Index left_dim, Eigen::Index right_dim);

  Eigen::Index phys_dim() const { return static_cast<Eigen::Index>(mats_.size()); }
  Eigen::Index left_dim() const { return left_; }
  Eigen::Index right_dim() const { return right_; }
  bool is_square() const { return left_ == right_; }

  const Matrix& operator[](Eigen::Index i) const { return mats_[static_cast<size_t>(i)]; }
  const std::vector<Matrix>& matrices() const { return mats_; }
  double norm() const;
  bool is_zero(double tol = 0.0) const;

  MpsTensor scaled(cplx factor) const;
  // left * A^i * right for every i.
  MpsTensor sandwiched(const Matrix& left, const Matrix& right) const;
  // sum_{i'} op(i, i') A^{i'}; op may be rectangular, mapping onto a new physical space.
  MpsTensor physical_action(const Matrix& op) const;

 private:
  std::vector<Matrix> mats_;
  Eigen::Index left_ = 0;
  Eigen::Index right_ = 0;
};

struct TensorPair {
  MpsTensor a;
  MpsTensor b;

  // DimMismatch unless a.right = b.left and b.right = a.left.
  void validate() const;
};

// Cap on the number of MPV coefficients; GAUGE_MPS_SIZE_LIMIT overrides the default 2^24.
std::uint64_t size_limit();

// Periodic chain: coefficient of |i1 ... iN> is Tr(T1^{i1} ... TN^{iN}); first site most significant.
Vector contract_chain(const std::vector<const MpsTensor*>& sites);
Vector contract_mpv(const MpsTensor& t, int n);
// Sites a, b, a, b, ... with `pairs` copies of (a, b).
Vector contract_pair(const TensorPair& p, int pairs);

MpsTensor block(const MpsTensor& t, int b);
// (ab)^{(i,j)} = a^i b^j with combined index i * b.phys_dim + j.
MpsTensor product_tensor(const MpsTensor& a, const MpsTensor& b);
MpsTensor direct_sum(const MpsTensor& a, const MpsTensor& b);

// sum_i t1^i (x) conj(t2^i) on row-major vectorizations: Z -> sum_i t1^i Z t2^i^dagger.
Matrix mixed_transfer_matrix(const MpsTensor& t1, const MpsTensor& t2);
Matrix transfer_matrix(const MpsTensor& t);
Matrix apply_transfer(const MpsTensor& t, const Matrix& x);
Matrix apply_dual_transfer(const MpsTensor& t, const Matrix& x);

// Eigenvalues of the transfer matrix, sorted by decreasing modulus.
std::vector<cplx> transfer_spectrum(const MpsTensor& t);
double spectral_radius(const MpsTensor& t);
// Number of transfer eigenvalues with modulus within rel_tol of the spectral radius.
int peripheral_count(const MpsTensor& t, double rel_tol = 1e-6);

struct FixedPoints {
  cplx eigenvalue;
  Matrix right;  // E(right) = eigenvalue * right, Hermitian with unit trace when possible
  Matrix left;   // E*(left) = conj(eigenvalue) * left
};

// Leading eigenpair of the transfer map and its dual.
FixedPoints leading_fixed_points(const MpsTensor& t);

bool is_injective(const MpsTensor& t, double rel_cutoff = kRankCutoff);

enum class Normality { Normal, NotNormal, Unknown };

struct NormalityResult {
  Normality verdict = Normality::NotNormal;
  std::optional<int> length;
  bool normal() const { return verdict == Normality::Normal; }
};

// Primitivity of the (optionally rescaled) transfer map, then the minimal injective
// blocking length by span growth up to D^4.
NormalityResult is_normal(const MpsTensor& t, bool normalize = true);

}  // namespace gauge_mpv

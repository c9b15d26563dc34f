#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace gauge_mpv {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr double kRankCutoff = 1e-9;

Matrix kron(const Matrix& a, const Matrix& b);
Matrix direct_sum(const std::vector<Matrix>& blocks);
Matrix direct_sum(const Matrix& a, const Matrix& b);

// Row-major vectorization: vec(X)[a * cols + b] = X(a, b).
Vector vec_rows(const Matrix& x);
Matrix unvec_rows(const Vector& v, Eigen::Index rows, Eigen::Index cols);

struct SvdRank {
  Eigen::Index rank = 0;
  double largest = 0.0;
  // Largest singular value discarded by the cutoff, relative to the largest one.
  double discarded = 0.0;
  // Smallest singular value kept, relative to the largest one.
  double kept = 0.0;
};

SvdRank numerical_rank(const Matrix& m, double rel_cutoff = kRankCutoff);

// Orthonormal basis of the column space.
Matrix column_space(const Matrix& m, double rel_cutoff = kRankCutoff);
// Orthonormal basis of the kernel. Singular values below max(rel_cutoff * largest,
// abs_cutoff) count as zero.
Matrix null_space(const Matrix& m, double rel_cutoff = kRankCutoff, double abs_cutoff = 0.0);
// Orthonormal basis of the orthogonal complement of the span of q (q orthonormal).
Matrix orthogonal_complement(const Matrix& q);

// Deterministic orthonormal basis of span(q): Gram-Schmidt on projected unit vectors,
// each vector's first significant entry made real positive.
Matrix canonical_basis(const Matrix& q, double tol = 1e-10);

// Multiply by the phase that makes the first entry with |x| > tol real positive.
void fix_phase(Eigen::Ref<Vector> v, double tol = 1e-10);
void fix_phase(Matrix& m, double tol = 1e-10);

Matrix hermitian_part(const Matrix& m);
Matrix psd_sqrt(const Matrix& h);
Matrix psd_inv_sqrt(const Matrix& h);
// exp(i H) for Hermitian H.
Matrix exp_i_hermitian(const Matrix& h);

bool is_unitary(const Matrix& u, double tol);
double relative_residual(const Matrix& a, const Matrix& b);
// min over phases of ||a - e^{i phi} b|| / ||b||.
double projective_distance(const Matrix& a, const Matrix& b);

Matrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);
Matrix random_unitary(Eigen::Index n, Rng& rng);
cplx random_phase(Rng& rng);

std::uint64_t lcm(std::uint64_t a, std::uint64_t b);

}  // namespace gauge_mpv

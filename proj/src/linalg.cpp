#include "gauge_mpv/linalg.hpp"

#include "gauge_mpv/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numeric>

namespace gauge_mpv {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonAssociative: return "NonAssociative";
    case ErrorKind::NoIdentity: return "NoIdentity";
    case ErrorKind::MissingInverse: return "MissingInverse";
    case ErrorKind::NotARep: return "NotARep";
    case ErrorKind::NonUnitary: return "NonUnitary";
    case ErrorKind::GroupMismatch: return "GroupMismatch";
    case ErrorKind::IncompleteCatalog: return "IncompleteCatalog";
    case ErrorKind::MultiplierMismatch: return "MultiplierMismatch";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::NumericalDegeneracy: return "NumericalDegeneracy";
    case ErrorKind::NotEquivalent: return "NotEquivalent";
    case ErrorKind::GaugeNotFound: return "GaugeNotFound";
    case ErrorKind::NotInCF: return "NotInCF";
    case ErrorKind::NotNormal: return "NotNormal";
    case ErrorKind::ExtractionDegenerate: return "ExtractionDegenerate";
    case ErrorKind::NotDecomposable: return "NotDecomposable";
    case ErrorKind::BadAlgebra: return "BadAlgebra";
    case ErrorKind::ZeroByWignerEckart: return "ZeroByWignerEckart";
    case ErrorKind::MixedCohomology: return "MixedCohomology";
    case ErrorKind::BadSpinSet: return "BadSpinSet";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix direct_sum(const std::vector<Matrix>& blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix out = Matrix::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) { return direct_sum(std::vector<Matrix>{a, b}); }

Vector vec_rows(const Matrix& x) {
  Vector v(x.size());
  for (Eigen::Index a = 0; a < x.rows(); ++a)
    for (Eigen::Index b = 0; b < x.cols(); ++b) v(a * x.cols() + b) = x(a, b);
  return v;
}

Matrix unvec_rows(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  Matrix x(rows, cols);
  for (Eigen::Index a = 0; a < rows; ++a)
    for (Eigen::Index b = 0; b < cols; ++b) x(a, b) = v(a * cols + b);
  return x;
}

SvdRank numerical_rank(const Matrix& m, double rel_cutoff) {
  SvdRank out;
  if (m.size() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(m);
  const RealVector& s = svd.singularValues();
  out.largest = s.size() ? s(0) : 0.0;
  if (out.largest == 0.0) return out;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double rel = s(i) / out.largest;
    if (rel > rel_cutoff) {
      ++out.rank;
      out.kept = rel;
    } else {
      out.discarded = rel;
      break;
    }
  }
  return out;
}

Matrix column_space(const Matrix& m, double rel_cutoff) {
  if (m.size() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const RealVector& s = svd.singularValues();
  Eigen::Index rank = 0;
  if (s.size() && s(0) > 0.0)
    while (rank < s.size() && s(rank) > rel_cutoff * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

Matrix null_space(const Matrix& m, double rel_cutoff, double abs_cutoff) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0 || m.norm() <= abs_cutoff) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const double cutoff = std::max(rel_cutoff * s(0), abs_cutoff);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

Matrix orthogonal_complement(const Matrix& q) {
  const Eigen::Index n = q.rows();
  Matrix p = Matrix::Identity(n, n) - q * q.adjoint();
  return canonical_basis(column_space(p, 1e-8));
}

void fix_phase(Eigen::Ref<Vector> v, double tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > tol) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      return;
    }
  }
}

void fix_phase(Matrix& m, double tol) {
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b)
      if (std::abs(m(a, b)) > tol) {
        m *= std::conj(m(a, b)) / std::abs(m(a, b));
        m(a, b) = std::abs(m(a, b));
        return;
      }
}

Matrix canonical_basis(const Matrix& q, double tol) {
  const Eigen::Index n = q.rows();
  const Eigen::Index k = q.cols();
  Matrix out(n, k);
  Eigen::Index found = 0;
  for (Eigen::Index i = 0; i < n && found < k; ++i) {
    Vector w = q * q.row(i).adjoint();
    for (Eigen::Index c = 0; c < found; ++c) w -= out.col(c) * out.col(c).dot(w);
    for (Eigen::Index c = 0; c < found; ++c) w -= out.col(c) * out.col(c).dot(w);
    const double norm = w.norm();
    if (norm > std::sqrt(tol)) {
      w /= norm;
      fix_phase(w, tol);
      out.col(found++) = w;
    }
  }
  return out.leftCols(found);
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

Matrix psd_sqrt(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  RealVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

Matrix psd_inv_sqrt(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  RealVector ev = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

Matrix exp_i_hermitian(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  Vector phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::polar(1.0, es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm() <= tol;
}

double relative_residual(const Matrix& a, const Matrix& b) {
  const double scale = b.norm();
  const double diff = (a - b).norm();
  return scale > 0.0 ? diff / scale : diff;
}

double projective_distance(const Matrix& a, const Matrix& b) {
  const cplx overlap = (b.adjoint() * a).trace();
  const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0);
  return relative_residual(a, phase * b);
}

Matrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = cplx(re, im) / std::sqrt(2.0);
    }
  return m;
}

Matrix random_unitary(Eigen::Index n, Rng& rng) {
  Matrix g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

cplx random_phase(Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * M_PI);
  return std::polar(1.0, uniform(rng));
}

std::uint64_t lcm(std::uint64_t a, std::uint64_t b) { return std::lcm(a, b); }

}  // namespace gauge_mpv

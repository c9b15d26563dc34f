#include "gauge_mpv/mps_tensor.hpp"

#include "gauge_mpv/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>

namespace gauge_mpv {

MpsTensor::MpsTensor(std::vector<Matrix> matrices) : mats_(std::move(matrices)) {
  if (mats_.empty()) throw Error(ErrorKind::DimMismatch, "tensor needs at least one physical index");
  left_ = mats_.front().rows();
  right_ = mats_.front().cols();
  for (const auto& m : mats_)
    if (m.rows() != left_ || m.cols() != right_) throw Error(ErrorKind::DimMismatch, "tensor matrices differ in shape");
}

MpsTensor MpsTensor::zero(Eigen::Index phys_dim, Eigen::Index left_dim, Eigen::Index right_dim) {
  return MpsTensor(std::vector<Matrix>(static_cast<size_t>(phys_dim), Matrix::Zero(left_dim, right_dim)));
}

double MpsTensor::norm() const {
  double sq = 0.0;
  for (const auto& m : mats_) sq += m.squaredNorm();
  return std::sqrt(sq);
}

bool MpsTensor::is_zero(double tol) const { return norm() <= tol; }

MpsTensor MpsTensor::scaled(cplx factor) const {
  std::vector<Matrix> out;
  for (const auto& m : mats_) out.push_back(factor * m);
  return MpsTensor(std::move(out));
}

MpsTensor MpsTensor::sandwiched(const Matrix& left, const Matrix& right) const {
  std::vector<Matrix> out;
  for (const auto& m : mats_) out.push_back(left * m * right);
  return MpsTensor(std::move(out));
}

MpsTensor MpsTensor::physical_action(const Matrix& op) const {
  if (op.rows() < 1 || op.cols() != phys_dim())
    throw Error(ErrorKind::DimMismatch, "physical operator does not match the physical dimension");
  std::vector<Matrix> out(static_cast<size_t>(op.rows()), Matrix::Zero(left_, right_));
  for (Eigen::Index i = 0; i < op.rows(); ++i)
    for (Eigen::Index k = 0; k < phys_dim(); ++k)
      if (op(i, k) != 0.0) out[static_cast<size_t>(i)] += op(i, k) * mats_[static_cast<size_t>(k)];
  return MpsTensor(std::move(out));
}

void TensorPair::validate() const {
  if (a.right_dim() != b.left_dim() || b.right_dim() != a.left_dim())
    throw Error(ErrorKind::DimMismatch, "pair bond dimensions do not chain");
}

std::uint64_t size_limit() {
  if (const char* env = std::getenv("GAUGE_MPS_SIZE_LIMIT")) {
    try {
      return std::stoull(env);
    } catch (...) {
    }
  }
  return std::uint64_t{1} << 24;
}

Vector contract_chain(const std::vector<const MpsTensor*>& sites) {
  const size_t n = sites.size();
  if (n == 0) throw Error(ErrorKind::DimMismatch, "empty chain");
  std::uint64_t total = 1;
  for (size_t k = 0; k < n; ++k) {
    const MpsTensor& next = *sites[(k + 1) % n];
    if (sites[k]->right_dim() != next.left_dim()) throw Error(ErrorKind::DimMismatch, "chain bond dimensions differ");
    total *= static_cast<std::uint64_t>(sites[k]->phys_dim());
    if (total > size_limit())
      throw Error(ErrorKind::SizeLimit, "chain has more than " + std::to_string(size_limit()) + " coefficients");
  }

  const MpsTensor& last = *sites.back();
  const Eigen::Index d_last = last.phys_dim();
  // Row i holds vec(last^i transposed), so that Tr(P last^i) = row_i . vec(P).
  Matrix closing(d_last, last.left_dim() * last.right_dim());
  for (Eigen::Index i = 0; i < d_last; ++i) closing.row(i) = vec_rows(last[i].transpose()).transpose();

  Vector out(static_cast<Eigen::Index>(total));
  if (n == 1) {
    for (Eigen::Index i = 0; i < d_last; ++i) out(i) = last[i].trace();
    return out;
  }

  std::vector<Matrix> prefix(n - 1);
  Eigen::Index cursor = 0;
  std::function<void(size_t)> visit = [&](size_t depth) {
    const MpsTensor& site = *sites[depth];
    for (Eigen::Index i = 0; i < site.phys_dim(); ++i) {
      prefix[depth] = depth == 0 ? site[i] : Matrix(prefix[depth - 1] * site[i]);
      if (depth + 2 == n) {
        out.segment(cursor, d_last) = closing * vec_rows(prefix[depth]);
        cursor += d_last;
      } else {
        visit(depth + 1);
      }
    }
  };
  visit(0);
  return out;
}

Vector contract_mpv(const MpsTensor& t, int n) {
  if (n < 1) throw Error(ErrorKind::DimMismatch, "chain length must be positive");
  return contract_chain(std::vector<const MpsTensor*>(static_cast<size_t>(n), &t));
}

Vector contract_pair(const TensorPair& p, int pairs) {
  p.validate();
  std::vector<const MpsTensor*> sites;
  for (int k = 0; k < pairs; ++k) {
    sites.push_back(&p.a);
    sites.push_back(&p.b);
  }
  return contract_chain(sites);
}

MpsTensor product_tensor(const MpsTensor& a, const MpsTensor& b) {
  if (a.right_dim() != b.left_dim()) throw Error(ErrorKind::DimMismatch, "product tensor bond mismatch");
  const auto total = static_cast<std::uint64_t>(a.phys_dim()) * static_cast<std::uint64_t>(b.phys_dim());
  if (total > size_limit()) throw Error(ErrorKind::SizeLimit, "blocked physical dimension exceeds the cap");
  std::vector<Matrix> out;
  out.reserve(total);
  for (Eigen::Index i = 0; i < a.phys_dim(); ++i)
    for (Eigen::Index j = 0; j < b.phys_dim(); ++j) out.push_back(a[i] * b[j]);
  return MpsTensor(std::move(out));
}

MpsTensor block(const MpsTensor& t, int b) {
  if (b < 1) throw Error(ErrorKind::DimMismatch, "blocking factor must be positive");
  MpsTensor out = t;
  for (int k = 1; k < b; ++k) out = product_tensor(out, t);
  return out;
}

MpsTensor direct_sum(const MpsTensor& a, const MpsTensor& b) {
  if (a.phys_dim() != b.phys_dim()) throw Error(ErrorKind::DimMismatch, "direct sum needs equal physical dimension");
  std::vector<Matrix> out;
  for (Eigen::Index i = 0; i < a.phys_dim(); ++i) out.push_back(direct_sum(a[i], b[i]));
  return MpsTensor(std::move(out));
}

Matrix mixed_transfer_matrix(const MpsTensor& t1, const MpsTensor& t2) {
  if (t1.phys_dim() != t2.phys_dim()) throw Error(ErrorKind::DimMismatch, "mixed transfer needs equal physical dims");
  Matrix e = Matrix::Zero(t1.left_dim() * t2.left_dim(), t1.right_dim() * t2.right_dim());
  for (Eigen::Index i = 0; i < t1.phys_dim(); ++i) e += kron(t1[i], t2[i].conjugate());
  return e;
}

Matrix transfer_matrix(const MpsTensor& t) { return mixed_transfer_matrix(t, t); }

Matrix apply_transfer(const MpsTensor& t, const Matrix& x) {
  if (x.rows() != t.right_dim() || x.cols() != t.right_dim())
    throw Error(ErrorKind::DimMismatch, "transfer argument has the wrong shape");
  Matrix out = Matrix::Zero(t.left_dim(), t.left_dim());
  for (const auto& m : t.matrices()) out += m * x * m.adjoint();
  return out;
}

Matrix apply_dual_transfer(const MpsTensor& t, const Matrix& x) {
  if (x.rows() != t.left_dim() || x.cols() != t.left_dim())
    throw Error(ErrorKind::DimMismatch, "dual transfer argument has the wrong shape");
  Matrix out = Matrix::Zero(t.right_dim(), t.right_dim());
  for (const auto& m : t.matrices()) out += m.adjoint() * x * m;
  return out;
}

namespace {

std::vector<cplx> sorted_by_modulus(const Vector& ev) {
  std::vector<cplx> out(ev.data(), ev.data() + ev.size());
  std::stable_sort(out.begin(), out.end(), [](cplx a, cplx b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    return std::arg(a) < std::arg(b);
  });
  return out;
}

Matrix normalized_fixed_point(const Vector& v, Eigen::Index dim) {
  Matrix x = unvec_rows(v, dim, dim);
  const cplx tr = x.trace();
  if (std::abs(tr) > 1e-12 * x.norm()) {
    x /= tr;
  } else {
    x /= x.norm();
  }
  return x;
}

Eigen::Index leading_index(const Vector& ev) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < ev.size(); ++k) {
    const double a = std::abs(ev(k)), b = std::abs(ev(best));
    if (a > b * (1 + 1e-12) || (a >= b * (1 - 1e-12) && ev(k).real() > ev(best).real())) best = k;
  }
  return best;
}

}  // namespace

std::vector<cplx> transfer_spectrum(const MpsTensor& t) {
  if (!t.is_square()) throw Error(ErrorKind::DimMismatch, "transfer spectrum needs a square tensor");
  Eigen::ComplexEigenSolver<Matrix> es(transfer_matrix(t), false);
  return sorted_by_modulus(es.eigenvalues());
}

double spectral_radius(const MpsTensor& t) { return std::abs(transfer_spectrum(t).front()); }

int peripheral_count(const MpsTensor& t, double rel_tol) {
  const auto spec = transfer_spectrum(t);
  const double radius = std::abs(spec.front());
  if (radius == 0.0) return 0;
  int count = 0;
  for (cplx v : spec)
    if (std::abs(v) >= radius * (1.0 - rel_tol)) ++count;
  return count;
}

FixedPoints leading_fixed_points(const MpsTensor& t) {
  if (!t.is_square()) throw Error(ErrorKind::DimMismatch, "fixed points need a square tensor");
  const Eigen::Index dim = t.left_dim();
  const Matrix e = transfer_matrix(t);
  Eigen::ComplexEigenSolver<Matrix> es(e);
  const Eigen::Index k = leading_index(es.eigenvalues());
  FixedPoints out;
  out.eigenvalue = es.eigenvalues()(k);
  out.right = normalized_fixed_point(es.eigenvectors().col(k), dim);

  Eigen::ComplexEigenSolver<Matrix> dual(e.adjoint());
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < dual.eigenvalues().size(); ++j)
    if (std::abs(dual.eigenvalues()(j) - std::conj(out.eigenvalue)) <
        std::abs(dual.eigenvalues()(best) - std::conj(out.eigenvalue)))
      best = j;
  out.left = normalized_fixed_point(dual.eigenvectors().col(best), dim);
  return out;
}

bool is_injective(const MpsTensor& t, double rel_cutoff) {
  Matrix stacked(t.left_dim() * t.right_dim(), t.phys_dim());
  for (Eigen::Index i = 0; i < t.phys_dim(); ++i) stacked.col(i) = vec_rows(t[i]);
  return numerical_rank(stacked, rel_cutoff).rank == t.left_dim() * t.right_dim();
}

namespace {

bool positive_definite(const Matrix& x) {
  const Matrix h = hermitian_part(x);
  if ((x - h).norm() > 1e-8 * std::max(1.0, x.norm())) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  return top > 0.0 && es.eigenvalues().minCoeff() > 1e-10 * top;
}

}  // namespace

NormalityResult is_normal(const MpsTensor& t, bool normalize) {
  NormalityResult out;
  if (!t.is_square()) return out;
  const double radius = spectral_radius(t);
  if (radius <= 1e-300) return out;
  if (!normalize && std::abs(radius - 1.0) > 1e-9) return out;
  const MpsTensor unit = t.scaled(1.0 / std::sqrt(radius));
  if (peripheral_count(unit, 1e-8) != 1) return out;
  const FixedPoints fp = leading_fixed_points(unit);
  if (std::abs(fp.eigenvalue - 1.0) > 1e-8) return out;
  if (!positive_definite(fp.right) || !positive_definite(fp.left)) return out;

  const Eigen::Index dim = t.left_dim();
  const Eigen::Index full = dim * dim;
  const long max_length = static_cast<long>(full * full);
  Matrix span(full, unit.phys_dim());
  for (Eigen::Index i = 0; i < unit.phys_dim(); ++i) span.col(i) = vec_rows(unit[i]);
  span = column_space(span);
  for (long length = 1; length <= max_length; ++length) {
    if (span.cols() == full) {
      out.verdict = Normality::Normal;
      out.length = static_cast<int>(length);
      return out;
    }
    Matrix grown(full, span.cols() * unit.phys_dim());
    for (Eigen::Index c = 0; c < span.cols(); ++c) {
      const Matrix word = unvec_rows(span.col(c), dim, dim);
      for (Eigen::Index i = 0; i < unit.phys_dim(); ++i)
        grown.col(c * unit.phys_dim() + i) = vec_rows(word * unit[i]);
    }
    span = column_space(grown);
  }
  out.verdict = Normality::Unknown;
  return out;
}

}  // namespace gauge_mpv

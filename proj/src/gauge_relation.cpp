#include "gauge_mpv/canonical_form.hpp"
#include "gauge_mpv/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace gauge_mpv {

namespace {

MpsTensor sub_block(const MpsTensor& t, Eigen::Index offset, Eigen::Index size) {
  std::vector<Matrix> mats;
  for (const auto& m : t.matrices()) mats.push_back(m.block(offset, offset, size, size));
  return MpsTensor(std::move(mats));
}

double max_entry(const MpsTensor& t) {
  double top = 0.0;
  for (const auto& m : t.matrices()) top = std::max(top, m.cwiseAbs().maxCoeff());
  return top;
}

}  // namespace

std::vector<std::pair<Eigen::Index, Eigen::Index>> diagonal_blocks(const MpsTensor& t, double tol) {
  const Eigen::Index dim = t.left_dim();
  const double cutoff = tol * std::max(max_entry(t), 1e-300);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  Eigen::Index start = 0;
  for (Eigen::Index k = 1; k <= dim; ++k) {
    bool boundary = k == dim;
    if (!boundary) {
      boundary = true;
      for (const auto& m : t.matrices()) {
        if (m.block(0, k, k, dim - k).cwiseAbs().maxCoeff() > cutoff ||
            m.block(k, 0, dim - k, k).cwiseAbs().maxCoeff() > cutoff) {
          boundary = false;
          break;
        }
      }
    }
    if (boundary) {
      out.emplace_back(start, k - start);
      start = k;
    }
  }
  return out;
}

GaugeRelation find_gauge_between(const MpsTensor& t1, const MpsTensor& t2, int check_length) {
  if (!t1.is_square() || !t2.is_square() || t1.phys_dim() != t2.phys_dim() || t1.left_dim() != t2.left_dim())
    throw Error(ErrorKind::NotEquivalent, "tensor shapes differ");
  const double budget = std::min<double>(static_cast<double>(size_limit()), 1 << 20);
  for (int n = 1; n <= check_length && std::pow(static_cast<double>(t1.phys_dim()), n) <= budget; ++n) {
    const Vector c1 = contract_mpv(t1, n);
    const Vector c2 = contract_mpv(t2, n);
    const double denom = std::max({c1.norm(), c2.norm(), 1e-300});
    if ((c1 - c2).norm() > 1e-8 * denom && (c1 - c2).norm() > 1e-12)
      throw Error(ErrorKind::NotEquivalent, "MPV coefficients differ at N = " + std::to_string(n));
  }

  GaugeRelation out;
  for (auto [o, s] : diagonal_blocks(t1)) {
    out.offsets1.push_back(o);
    out.sizes1.push_back(s);
  }
  for (auto [o, s] : diagonal_blocks(t2)) {
    out.offsets2.push_back(o);
    out.sizes2.push_back(s);
  }
  std::vector<bool> used(out.offsets2.size(), false);
  for (size_t k = 0; k < out.offsets1.size(); ++k) {
    const MpsTensor b1 = sub_block(t1, out.offsets1[k], out.sizes1[k]);
    const double r1 = spectral_radius(b1);
    if (r1 <= 0.0) throw Error(ErrorKind::GaugeNotFound, "block with vanishing transfer spectrum");
    const Matrix rho = leading_fixed_points(b1).right;
    bool found = false;
    for (size_t l = 0; l < out.offsets2.size() && !found; ++l) {
      if (used[l] || out.sizes2[l] != out.sizes1[k]) continue;
      const MpsTensor b2 = sub_block(t2, out.offsets2[l], out.sizes2[l]);
      const double r2 = spectral_radius(b2);
      const Eigen::Index dim = out.sizes1[k];
      Eigen::ComplexEigenSolver<Matrix> es(mixed_transfer_matrix(b2, b1));
      Eigen::Index lead = 0;
      for (Eigen::Index j = 1; j < es.eigenvalues().size(); ++j)
        if (std::abs(es.eigenvalues()(j)) > std::abs(es.eigenvalues()(lead))) lead = j;
      const cplx lambda = es.eigenvalues()(lead);
      const double target = std::sqrt(r1 * r2);
      if (std::abs(std::abs(lambda) - target) > 1e-6 * target) continue;
      Matrix x = unvec_rows(es.eigenvectors().col(lead), dim, dim) * rho.partialPivLu().inverse();
      x *= std::sqrt(static_cast<double>(dim)) / x.norm();
      fix_phase(x);
      const cplx c = lambda / r1;
      const MpsTensor mapped = b1.sandwiched(x, x.partialPivLu().inverse()).scaled(c);
      double diff = 0.0;
      for (Eigen::Index i = 0; i < mapped.phys_dim(); ++i) diff += (mapped[i] - b2[i]).squaredNorm();
      if (std::sqrt(diff) > 1e-7 * b2.norm()) continue;
      used[l] = true;
      found = true;
      out.permutation.push_back(static_cast<int>(l));
      out.x.push_back(x);
      out.phases.push_back(c / std::abs(c));
      out.scales.push_back(std::abs(c));
    }
    if (!found) throw Error(ErrorKind::GaugeNotFound, "no partner for block " + std::to_string(k));
  }
  return out;
}

MpsTensor GaugeRelation::apply(const MpsTensor& t1) const {
  const Eigen::Index dim = t1.left_dim();
  std::vector<Matrix> mats(static_cast<size_t>(t1.phys_dim()), Matrix::Zero(dim, dim));
  for (size_t k = 0; k < permutation.size(); ++k) {
    const Matrix xinv = x[k].partialPivLu().inverse();
    const Eigen::Index target = offsets2[static_cast<size_t>(permutation[k])];
    for (Eigen::Index i = 0; i < t1.phys_dim(); ++i)
      mats[static_cast<size_t>(i)].block(target, target, sizes1[k], sizes1[k]) =
          phases[k] * scales[k] * x[k] * t1[i].block(offsets1[k], offsets1[k], sizes1[k], sizes1[k]) * xinv;
  }
  return MpsTensor(std::move(mats));
}

}  // namespace gauge_mpv

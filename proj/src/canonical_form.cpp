#include "gauge_mpv/canonical_form.hpp"

#include "gauge_mpv/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gauge_mpv {

Matrix algebra_basis(const std::vector<Matrix>& generators) {
  const Eigen::Index dim = generators.front().rows();
  const Eigen::Index full = dim * dim;
  Matrix stacked(full, static_cast<Eigen::Index>(generators.size()));
  for (size_t k = 0; k < generators.size(); ++k) stacked.col(static_cast<Eigen::Index>(k)) = vec_rows(generators[k]);
  const Matrix gen_span = column_space(stacked);
  std::vector<Matrix> gens;
  for (Eigen::Index c = 0; c < gen_span.cols(); ++c) gens.push_back(unvec_rows(gen_span.col(c), dim, dim));

  Matrix basis(full, full);
  Eigen::Index size = 0;
  // scale bounds the norm of v, so products that vanish up to roundoff are dropped.
  auto try_add = [&](Vector v, double scale) {
    const double norm = v.norm();
    if (norm <= 1e-12 * scale) return false;
    v /= norm;
    for (int pass = 0; pass < 2; ++pass) v -= basis.leftCols(size) * (basis.leftCols(size).adjoint() * v);
    const double residual = v.norm();
    if (residual <= 1e-8) return false;
    basis.col(size++) = v / residual;
    return true;
  };
  try_add(vec_rows(Matrix::Identity(dim, dim)), 0.0);
  for (Eigen::Index next = 0; next < size && size < full; ++next) {
    const Matrix word = unvec_rows(basis.col(next), dim, dim);
    for (const auto& g : gens) {
      try_add(vec_rows(g * word), g.norm());
      if (size == full) break;
    }
  }
  return basis.leftCols(size);
}

std::optional<Matrix> minimal_invariant_subspace(const std::vector<Matrix>& generators, Rng& rng) {
  const Eigen::Index dim = generators.front().rows();
  if (dim <= 1) return std::nullopt;
  const Matrix basis = algebra_basis(generators);
  if (basis.cols() == dim * dim) return std::nullopt;

  std::vector<Matrix> elements;
  for (Eigen::Index k = 0; k < basis.cols(); ++k) elements.push_back(unvec_rows(basis.col(k), dim, dim));

  double worst_gap = 0.0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const Vector coef = random_gaussian(basis.cols(), 1, rng).col(0);
    Matrix probe = Matrix::Zero(dim, dim);
    for (size_t k = 0; k < elements.size(); ++k) probe += coef(static_cast<Eigen::Index>(k)) * elements[k];
    Eigen::ComplexEigenSolver<Matrix> es(probe);

    std::optional<Matrix> best;
    for (Eigen::Index e = 0; e < dim; ++e) {
      const Vector v = es.eigenvectors().col(e).normalized();
      Matrix orbit(dim, static_cast<Eigen::Index>(elements.size()));
      for (size_t k = 0; k < elements.size(); ++k) orbit.col(static_cast<Eigen::Index>(k)) = elements[k] * v;
      const SvdRank rank = numerical_rank(orbit);
      if (rank.rank < dim && rank.kept < 1e-5) {
        worst_gap = std::max(worst_gap, rank.kept);
        continue;
      }
      if (rank.rank < dim && (!best || rank.rank < best->cols())) best = column_space(orbit);
    }
    if (best) return canonical_basis(*best);
  }
  std::ostringstream msg;
  msg << "invariant subspace split is ambiguous; smallest kept singular value ratio " << worst_gap;
  throw Error(ErrorKind::NumericalDegeneracy, msg.str());
}

namespace {

std::vector<MpsTensor> split_irreducible(const MpsTensor& t, Rng& rng) {
  std::vector<MpsTensor> out;
  std::vector<MpsTensor> stack = {t};
  while (!stack.empty()) {
    MpsTensor cur = stack.back();
    stack.pop_back();
    const auto sub = minimal_invariant_subspace(cur.matrices(), rng);
    if (!sub) {
      out.push_back(cur);
      continue;
    }
    const Matrix comp = orthogonal_complement(*sub);
    stack.push_back(cur.sandwiched(comp.adjoint(), comp));
    stack.push_back(cur.sandwiched(sub->adjoint(), *sub));
  }
  return out;
}

std::vector<MpsTensor> drop_zero_blocks(std::vector<MpsTensor> blocks) {
  double top = 0.0;
  std::vector<double> radii;
  for (const auto& b : blocks) {
    radii.push_back(spectral_radius(b));
    top = std::max(top, radii.back());
  }
  std::vector<MpsTensor> out;
  for (size_t k = 0; k < blocks.size(); ++k)
    if (radii[k] > 1e-20 * top && radii[k] > 0.0) out.push_back(std::move(blocks[k]));
  return out;
}

Matrix inverse(const Matrix& m) { return m.partialPivLu().inverse(); }

}  // namespace

GaugeFixing cfii_gauge(const MpsTensor& t) {
  const Eigen::Index dim = t.left_dim();
  const FixedPoints fp = leading_fixed_points(t);
  const Matrix left = hermitian_part(fp.left);
  const Matrix s = psd_sqrt(left / left.trace().real());
  const Matrix sigma = hermitian_part(s * fp.right * s);

  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  const RealVector values = es.eigenvalues().reverse();
  const Matrix vectors = es.eigenvectors().rowwise().reverse();
  Matrix w(dim, dim);
  for (Eigen::Index start = 0; start < dim;) {
    Eigen::Index end = start + 1;
    while (end < dim && std::abs(values(end) - values(start)) <= 1e-10 * std::abs(values(0))) ++end;
    Matrix cluster = canonical_basis(vectors.middleCols(start, end - start));
    if (cluster.cols() != end - start) cluster = vectors.middleCols(start, end - start);
    for (Eigen::Index c = 0; c < cluster.cols(); ++c) {
      Vector col = cluster.col(c);
      fix_phase(col);
      w.col(start + c) = col;
    }
    start = end;
  }
  GaugeFixing out;
  out.similarity = w.adjoint() * s;
  Matrix lambda = Matrix::Zero(dim, dim);
  const double total = values.sum();
  for (Eigen::Index k = 0; k < dim; ++k) lambda(k, k) = values(k) / total;
  out.fixed_point = lambda;
  return out;
}

MpsTensor CanonicalFormResult::reassemble() const {
  std::optional<MpsTensor> out;
  for (const auto& blk : blocks)
    for (const auto& copy : blk.copies) {
      const MpsTensor piece = blk.tensor.sandwiched(inverse(copy.similarity), copy.similarity).scaled(copy.weight);
      out = out ? direct_sum(*out, piece) : piece;
    }
  if (!out) throw Error(ErrorKind::DimMismatch, "canonical form has no blocks");
  return *out;
}

CanonicalFormResult canonical_form(const MpsTensor& t, const CanonicalFormOptions& options) {
  if (!t.is_square()) throw Error(ErrorKind::DimMismatch, "canonical form needs a square tensor");
  Rng rng(options.seed);
  CanonicalFormResult result;

  double scale = 0.0;
  for (const auto& m : t.matrices()) scale = std::max(scale, m.norm());
  if (scale == 0.0) return result;

  std::vector<MpsTensor> blocks = drop_zero_blocks(split_irreducible(t.scaled(1.0 / scale), rng));
  std::uint64_t b = 1;
  for (const auto& blk : blocks) b = lcm(b, static_cast<std::uint64_t>(std::max(1, peripheral_count(blk))));
  if (b > 1) {
    std::vector<MpsTensor> blocked;
    for (const auto& blk : blocks)
      for (auto& piece : split_irreducible(block(blk, static_cast<int>(b)), rng)) blocked.push_back(std::move(piece));
    blocks = drop_zero_blocks(std::move(blocked));
  }
  result.blocking_factor = static_cast<int>(b);
  const double unit = std::pow(scale, static_cast<double>(b));

  struct Prepared {
    MpsTensor tensor;
    Matrix fixed_point;
    Matrix similarity;
    double nu;
  };
  std::vector<Prepared> prepared;
  for (const auto& blk : blocks) {
    const double radius = spectral_radius(blk);
    const MpsTensor normalized = blk.scaled(1.0 / std::sqrt(radius));
    if (!is_normal(normalized, false).normal())
      throw Error(ErrorKind::NumericalDegeneracy, "a split block failed the normality test");
    const GaugeFixing gauge = cfii_gauge(normalized);
    prepared.push_back({normalized.sandwiched(gauge.similarity, inverse(gauge.similarity)), gauge.fixed_point,
                        gauge.similarity, std::sqrt(radius) * unit});
  }

  for (const auto& p : prepared) {
    bool matched = false;
    for (auto& rep : result.blocks) {
      if (rep.tensor.left_dim() != p.tensor.left_dim()) continue;
      const Eigen::Index dim = p.tensor.left_dim();
      Eigen::ComplexEigenSolver<Matrix> es(mixed_transfer_matrix(p.tensor, rep.tensor));
      Eigen::Index k = 0;
      for (Eigen::Index j = 1; j < es.eigenvalues().size(); ++j)
        if (std::abs(es.eigenvalues()(j)) > std::abs(es.eigenvalues()(k))) k = j;
      const cplx lambda = es.eigenvalues()(k);
      if (std::abs(std::abs(lambda) - 1.0) > 1e-6) continue;
      Matrix u = unvec_rows(es.eigenvectors().col(k), dim, dim) * inverse(rep.fixed_point);
      u /= std::sqrt((u.adjoint() * u).trace().real() / static_cast<double>(dim));
      const MpsTensor mapped = rep.tensor.sandwiched(u, u.adjoint()).scaled(lambda);
      double diff = 0.0;
      for (Eigen::Index i = 0; i < mapped.phys_dim(); ++i) diff += (mapped[i] - p.tensor[i]).squaredNorm();
      if (std::sqrt(diff) > 1e-7 * p.tensor.norm()) continue;
      rep.copies.push_back({p.nu * lambda, u.adjoint() * p.similarity});
      matched = true;
      break;
    }
    if (!matched) result.blocks.push_back({p.tensor, p.fixed_point, {{p.nu, p.similarity}}});
  }

  if (!result.blocks.empty()) {
    const MpsTensor rebuilt = result.reassemble();
    const double d_blocked = static_cast<double>(rebuilt.phys_dim());
    const double budget = std::min<double>(static_cast<double>(size_limit()), 1 << 20);
    for (int n = 1; n <= options.check_length && std::pow(d_blocked, n) <= budget; ++n) {
      const Vector expected = contract_mpv(t, n * result.blocking_factor);
      const Vector got = contract_mpv(rebuilt, n);
      const double floor = 1e-10 * static_cast<double>(t.left_dim()) * std::pow(t.norm(), n * result.blocking_factor);
      const double denom = std::max({expected.norm(), floor, 1e-300});
      result.reassembly_error = std::max(result.reassembly_error, (expected - got).norm() / denom);
      result.checked_lengths.push_back(n);
    }
  }
  return result;
}

}  // namespace gauge_mpv

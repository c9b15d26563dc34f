#include "gauge_mpv/errors.hpp"
#include "gauge_mpv/symmetry.hpp"

#include <cmath>
#include <random>

namespace gauge_mpv {

namespace {

using Structure = std::vector<std::vector<std::vector<double>>>;

double algebra_defect(const std::vector<Matrix>& t, const Structure& f) {
  double worst = 0.0;
  for (size_t a = 0; a < t.size(); ++a)
    for (size_t b = 0; b < t.size(); ++b) {
      Matrix rhs = Matrix::Zero(t[a].rows(), t[a].cols());
      for (size_t c = 0; c < t.size(); ++c) rhs += cplx(0.0, f[a][b][c]) * t[c];
      worst = std::max(worst, (t[a] * t[b] - t[b] * t[a] - rhs).norm());
    }
  return worst;
}

double hermitian_defect(const std::vector<Matrix>& t) {
  double worst = 0.0;
  for (const auto& m : t) worst = std::max(worst, (m - m.adjoint()).norm());
  return worst;
}

double gauss_algebra_residual(const GaussOperators& ops) {
  double worst = std::max({hermitian_defect(ops.r), hermitian_defect(ops.q), hermitian_defect(ops.l)});
  worst = std::max({worst, algebra_defect(ops.r, ops.structure_constants), algebra_defect(ops.q, ops.structure_constants),
                    algebra_defect(ops.l, ops.structure_constants)});
  for (const auto& ra : ops.r)
    for (const auto& lb : ops.l) worst = std::max(worst, (ra * lb - lb * ra).norm());
  return worst;
}

std::vector<Matrix> rotate(const std::vector<Matrix>& t, const std::vector<double>& phi) {
  Matrix h = Matrix::Zero(t[0].rows(), t[0].cols());
  for (size_t a = 0; a < t.size(); ++a) h += phi[a] * t[a];
  const Matrix u = exp_i_hermitian(h);
  std::vector<Matrix> out;
  for (const auto& m : t) out.push_back(u * m * u.adjoint());
  return out;
}

}  // namespace

Structure GaussOperators::su2_structure() {
  Structure f(3, std::vector<std::vector<double>>(3, std::vector<double>(3, 0.0)));
  for (int a = 0; a < 3; ++a) {
    f[a][(a + 1) % 3][(a + 2) % 3] = 1.0;
    f[(a + 1) % 3][a][(a + 2) % 3] = -1.0;
  }
  return f;
}

Structure GaussOperators::abelian(int n) {
  return Structure(static_cast<size_t>(n), std::vector<std::vector<double>>(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0)));
}

void GaussOperators::validate(double tol) const {
  const size_t n = r.size();
  if (n == 0 || q.size() != n || l.size() != n || structure_constants.size() != n)
    throw Error(ErrorKind::BadAlgebra, "R, Q, L and the structure constants must share one generator count");
  for (const auto& row : structure_constants) {
    if (row.size() != n) throw Error(ErrorKind::BadAlgebra, "structure constants must be n x n x n");
    for (const auto& col : row)
      if (col.size() != n) throw Error(ErrorKind::BadAlgebra, "structure constants must be n x n x n");
  }
  for (size_t a = 1; a < n; ++a)
    if (r[a].rows() != r[0].rows() || l[a].rows() != l[0].rows() || q[a].rows() != q[0].rows())
      throw Error(ErrorKind::BadAlgebra, "generators of one family must share a dimension");
  if (r[0].rows() != l[0].rows()) throw Error(ErrorKind::BadAlgebra, "R and L must act on the same space");
  const double residual = gauss_algebra_residual(*this);
  if (residual > tol)
    throw Error(ErrorKind::BadAlgebra, "generator relations fail (residual " + std::to_string(residual) + ")");
}

GaussReport check_gauss_law(const TensorPair& pair, const GaussOperators& ops, const CheckOptions& options) {
  pair.validate();
  ops.validate();
  if (ops.q[0].rows() != pair.a.phys_dim() || ops.r[0].rows() != pair.b.phys_dim())
    throw Error(ErrorKind::DimMismatch, "generator dimensions differ from the physical dimensions");
  const size_t count = ops.r.size();
  if (std::pow(static_cast<double>(pair.a.phys_dim() * pair.b.phys_dim()), options.n_max) >
      static_cast<double>(size_limit()))
    throw Error(ErrorKind::SizeLimit, "chain of " + std::to_string(options.n_max) + " pairs exceeds the size cap");

  GaussReport out;
  out.algebra_residual = gauss_algebra_residual(ops);
  std::vector<std::vector<double>> angles = {std::vector<double>(count, 0.0)};
  Rng rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int s = 0; s < options.samples; ++s) {
    if (count == 3 && ops.structure_constants == GaussOperators::su2_structure()) {
      const Su2Params p = su2_sample(rng);
      angles.push_back({p[0], p[1], p[2]});
    } else {
      std::vector<double> phi(count);
      for (auto& v : phi) v = normal(rng);
      angles.push_back(phi);
    }
  }

  for (int n = 1; n <= options.n_max; ++n) {
    const Vector psi = contract_pair(pair, n);
    const double norm = psi.norm();
    std::vector<Eigen::Index> dims;
    for (int k = 0; k < n; ++k) {
      dims.push_back(pair.a.phys_dim());
      dims.push_back(pair.b.phys_dim());
    }
    for (size_t s = 0; s < angles.size(); ++s) {
      const auto r = rotate(ops.r, angles[s]), q = rotate(ops.q, angles[s]), l = rotate(ops.l, angles[s]);
      for (size_t a = 0; a < count; ++a)
        for (int k = 0; k < n; ++k) {
          const int a_site = 2 * k;
          const int left_b = (a_site - 1 + 2 * n) % (2 * n);
          const int right_b = a_site + 1;
          Vector v = apply_site_operator(psi, dims, a_site, q[a]);
          if (left_b == right_b) {
            v += apply_site_operator(psi, dims, right_b, r[a] + l[a]);
          } else {
            v += apply_site_operator(psi, dims, left_b, r[a]);
            v += apply_site_operator(psi, dims, right_b, l[a]);
          }
          const double residual = norm == 0.0 ? 0.0 : v.norm() / norm;
          out.entries.push_back({n, static_cast<int>(s) - 1, static_cast<int>(a), a_site, residual});
          out.max_residual = std::max(out.max_residual, residual);
        }
    }
  }
  return out;
}

}  // namespace gauge_mpv

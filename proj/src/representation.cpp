#include "gauge_mpv/representation.hpp"

#include "gauge_mpv/errors.hpp"

#include <cmath>

namespace gauge_mpv {

namespace {

bool same_group(const Group& a, const Group& b) {
  if (&a == &b) return true;
  if (a.is_finite() != b.is_finite()) return false;
  if (!a.is_finite()) return true;
  return a.finite().table() == b.finite().table();
}

double levi_civita(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0.0;
  return ((a + 1) % 3 == b) ? 1.0 : -1.0;
}

}  // namespace

Multiplier check_projective_rep(const std::vector<Matrix>& matrices, const FiniteGroup& group, double tol) {
  const int n = group.order();
  if (static_cast<int>(matrices.size()) != n)
    throw Error(ErrorKind::NotARep, "expected " + std::to_string(n) + " matrices, got " +
                                        std::to_string(matrices.size()));
  const Eigen::Index dim = matrices.front().rows();
  for (int g = 0; g < n; ++g) {
    if (matrices[g].rows() != dim || matrices[g].cols() != dim)
      throw Error(ErrorKind::NotARep, "matrix " + std::to_string(g) + " has the wrong shape");
    if (!is_unitary(matrices[g], tol * std::max<double>(1.0, dim)))
      throw Error(ErrorKind::NonUnitary, "matrix of element " + group.element_name(g));
  }
  if ((matrices[group.identity()] - Matrix::Identity(dim, dim)).norm() > tol * dim)
    throw Error(ErrorKind::NotARep, "identity element is not represented by the identity matrix");

  Multiplier out{Matrix(n, n)};
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      const Matrix prod = matrices[g] * matrices[h];
      const Matrix& target = matrices[group.multiply(g, h)];
      const cplx gamma = (target.adjoint() * prod).trace() / static_cast<double>(dim);
      if ((prod - gamma * target).norm() > tol * std::sqrt(static_cast<double>(dim)) ||
          std::abs(std::abs(gamma) - 1.0) > tol)
        throw Error(ErrorKind::NotARep, "U(" + group.element_name(g) + ")U(" + group.element_name(h) +
                                            ") is not proportional to U(gh)");
      out.values(g, h) = gamma / std::abs(gamma);
    }
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int f = 0; f < n; ++f) {
        const cplx lhs = out.values(g, h) * out.values(group.multiply(g, h), f);
        const cplx rhs = out.values(g, group.multiply(h, f)) * out.values(h, f);
        if (std::abs(lhs - rhs) > 10 * tol) throw Error(ErrorKind::NotARep, "multiplier violates the cocycle condition");
      }
  return out;
}

Rep Rep::finite(GroupPtr group, std::vector<Matrix> matrices, std::string label, double tol) {
  if (!group->is_finite()) throw Error(ErrorKind::GroupMismatch, "finite rep over a Lie group");
  Rep rep;
  rep.multiplier_ = check_projective_rep(matrices, group->finite(), tol);
  rep.dim_ = matrices.front().rows();
  rep.group_ = std::move(group);
  rep.mats_ = std::move(matrices);
  rep.label_ = std::move(label);
  return rep;
}

Rep Rep::lie(GroupPtr group, std::vector<Matrix> generators, std::string label, double tol) {
  if (group->is_finite()) throw Error(ErrorKind::GroupMismatch, "Lie rep over a finite group");
  if (generators.size() != 3) throw Error(ErrorKind::BadAlgebra, "SU(2) needs three generators");
  const Eigen::Index dim = generators.front().rows();
  for (const auto& t : generators) {
    if (t.rows() != dim || t.cols() != dim) throw Error(ErrorKind::BadAlgebra, "generator shape mismatch");
    if ((t - t.adjoint()).norm() > tol) throw Error(ErrorKind::BadAlgebra, "generator is not Hermitian");
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Matrix comm = generators[a] * generators[b] - generators[b] * generators[a];
      for (int c = 0; c < 3; ++c) comm -= cplx(0.0, levi_civita(a, b, c)) * generators[c];
      if (comm.norm() > tol * std::max<double>(1.0, dim))
        throw Error(ErrorKind::BadAlgebra, "generators violate [tau_a, tau_b] = i eps_abc tau_c");
    }
  Rep rep;
  rep.group_ = std::move(group);
  rep.dim_ = dim;
  rep.mats_ = std::move(generators);
  rep.label_ = std::move(label);
  return rep;
}

Rep Rep::relabeled(std::string label) const {
  Rep out = *this;
  out.label_ = std::move(label);
  return out;
}

Matrix Rep::at(const GroupElement& g) const {
  if (!is_lie()) return mats_.at(g.index);
  Matrix h = Matrix::Zero(dim_, dim_);
  for (int a = 0; a < 3; ++a) h += g.params[a] * mats_[a];
  return exp_i_hermitian(h);
}

std::vector<Matrix> Rep::constraint_matrices() const {
  if (is_lie()) return mats_;
  std::vector<Matrix> out;
  for (int g : group_->finite().generators()) out.push_back(mats_[g]);
  return out;
}

Rep conjugate_rep(const Rep& rep) {
  std::vector<Matrix> mats;
  for (const auto& m : rep.matrices()) mats.push_back(rep.is_lie() ? Matrix(-m.conjugate()) : Matrix(m.conjugate()));
  const std::string label = "conj(" + rep.label() + ")";
  return rep.is_lie() ? Rep::lie(rep.group_ptr(), std::move(mats), label)
                      : Rep::finite(rep.group_ptr(), std::move(mats), label);
}

Rep tensor_product_rep(const Rep& a, const Rep& b) {
  if (!same_group(a.group(), b.group())) throw Error(ErrorKind::GroupMismatch, "tensor product over different groups");
  std::vector<Matrix> mats;
  const std::string label = a.label() + "*" + b.label();
  if (a.is_lie()) {
    const Matrix ia = Matrix::Identity(a.dim(), a.dim());
    const Matrix ib = Matrix::Identity(b.dim(), b.dim());
    for (int k = 0; k < 3; ++k) mats.push_back(kron(a.generators()[k], ib) + kron(ia, b.generators()[k]));
    return Rep::lie(a.group_ptr(), std::move(mats), label);
  }
  for (size_t g = 0; g < a.matrices().size(); ++g) mats.push_back(kron(a.matrices()[g], b.matrices()[g]));
  return Rep::finite(a.group_ptr(), std::move(mats), label);
}

Rep direct_sum_rep(const std::vector<Rep>& reps) {
  if (reps.empty()) throw Error(ErrorKind::DimMismatch, "empty direct sum");
  std::string label;
  for (const auto& r : reps) {
    if (!same_group(reps.front().group(), r.group())) throw Error(ErrorKind::GroupMismatch, "direct sum over different groups");
    label += (label.empty() ? "" : "+") + r.label();
  }
  std::vector<Matrix> mats;
  for (size_t k = 0; k < reps.front().matrices().size(); ++k) {
    std::vector<Matrix> blocks;
    for (const auto& r : reps) blocks.push_back(r.matrices()[k]);
    mats.push_back(direct_sum(blocks));
  }
  return reps.front().is_lie() ? Rep::lie(reps.front().group_ptr(), std::move(mats), label)
                               : Rep::finite(reps.front().group_ptr(), std::move(mats), label);
}

Rep trivial_rep(const GroupPtr& group, Eigen::Index dim) {
  if (!group->is_finite())
    return Rep::lie(group, std::vector<Matrix>(3, Matrix::Zero(dim, dim)), "trivial");
  return Rep::finite(group, std::vector<Matrix>(group->finite().order(), Matrix::Identity(dim, dim)), "trivial");
}

Rep restrict_rep(const Rep& rep, const Matrix& w) {
  std::vector<Matrix> mats;
  for (const auto& m : rep.matrices()) mats.push_back(w.adjoint() * m * w);
  return rep.is_lie() ? Rep::lie(rep.group_ptr(), std::move(mats), rep.label())
                      : Rep::finite(rep.group_ptr(), std::move(mats), rep.label());
}

std::vector<Matrix> intertwiners(const std::vector<Matrix>& from, const std::vector<Matrix>& to, Eigen::Index n1,
                                 Eigen::Index n2, double rel_cutoff) {
  if (from.size() != to.size()) throw Error(ErrorKind::DimMismatch, "constraint lists differ in length");
  const Eigen::Index unknowns = n1 * n2;
  Matrix system(static_cast<Eigen::Index>(from.size()) * unknowns, unknowns);
  const Matrix id1 = Matrix::Identity(n1, n1);
  const Matrix id2 = Matrix::Identity(n2, n2);
  for (size_t k = 0; k < from.size(); ++k)
    system.middleRows(static_cast<Eigen::Index>(k) * unknowns, unknowns) =
        kron(to[k], id1) - kron(id2, from[k].transpose());
  const Matrix basis = canonical_basis(null_space(system, rel_cutoff, 1e-10));
  std::vector<Matrix> out;
  for (Eigen::Index c = 0; c < basis.cols(); ++c) out.push_back(unvec_rows(basis.col(c), n2, n1));
  return out;
}

std::vector<Matrix> intertwiner_space(const Rep& rep1, const Rep& rep2) {
  if (!same_group(rep1.group(), rep2.group())) throw Error(ErrorKind::GroupMismatch, "intertwiners across groups");
  if (!rep1.is_lie() && !rep1.multiplier().approx_equal(rep2.multiplier()))
    throw Error(ErrorKind::MultiplierMismatch, rep1.label() + " and " + rep2.label());
  return intertwiners(rep1.constraint_matrices(), rep2.constraint_matrices(), rep1.dim(), rep2.dim());
}

const Rep& Catalog::by_label(const std::string& label) const { return irreps.at(index_of(label)); }

int Catalog::index_of(const std::string& label) const {
  for (size_t k = 0; k < irreps.size(); ++k)
    if (irreps[k].label() == label) return static_cast<int>(k);
  throw Error(ErrorKind::SchemaError, "unknown irrep label '" + label + "'");
}

RepDecomposition decompose_rep(const Rep& rep, const Catalog& catalog) {
  RepDecomposition out;
  std::vector<Matrix> columns;
  Eigen::Index offset = 0;
  const auto rep_constraints = rep.constraint_matrices();
  for (size_t idx = 0; idx < catalog.irreps.size(); ++idx) {
    const Rep& irrep = catalog.irreps[idx];
    if (!same_group(rep.group(), irrep.group())) throw Error(ErrorKind::GroupMismatch, "catalog group differs");
    if (!rep.is_lie() && !rep.multiplier().approx_equal(irrep.multiplier())) continue;
    const auto homs = intertwiners(irrep.constraint_matrices(), rep_constraints, irrep.dim(), rep.dim());
    if (homs.empty()) continue;

    Matrix first(rep.dim(), static_cast<Eigen::Index>(homs.size()));
    for (size_t k = 0; k < homs.size(); ++k) first.col(static_cast<Eigen::Index>(k)) = homs[k].col(0);
    const Matrix leads = canonical_basis(column_space(first));
    const Eigen::Index copies = leads.cols();
    const Eigen::CompleteOrthogonalDecomposition<Matrix> solver(first);
    for (Eigen::Index c = 0; c < copies; ++c) {
      const Vector coef = solver.solve(leads.col(c));
      Matrix t = Matrix::Zero(rep.dim(), irrep.dim());
      for (size_t k = 0; k < homs.size(); ++k) t += coef(static_cast<Eigen::Index>(k)) * homs[k];
      columns.push_back(t);
      out.copies.push_back({static_cast<int>(idx), static_cast<int>(c), offset, irrep.dim()});
      offset += irrep.dim();
    }
    out.blocks.push_back({irrep.label(), static_cast<int>(idx), static_cast<int>(copies), irrep.dim()});
  }
  if (offset != rep.dim())
    throw Error(ErrorKind::IncompleteCatalog, "irreps found span " + std::to_string(offset) + " of " +
                                                  std::to_string(rep.dim()) + " dimensions of " + rep.label());
  out.basis_change = Matrix(rep.dim(), rep.dim());
  for (size_t k = 0; k < columns.size(); ++k)
    out.basis_change.middleCols(out.copies[k].offset, out.copies[k].dim) = columns[k];
  if (!is_unitary(out.basis_change, 1e-8))
    throw Error(ErrorKind::NumericalDegeneracy, "irrep basis of " + rep.label() + " is not orthonormal");

  const auto& mats = rep.matrices();
  for (size_t g = 0; g < mats.size(); ++g) {
    std::vector<Matrix> blocks;
    for (const auto& c : out.copies) blocks.push_back(catalog.irreps[c.catalog_index].matrices()[g]);
    const Matrix diff = out.basis_change.adjoint() * mats[g] * out.basis_change - direct_sum(blocks);
    out.off_block_residual = std::max(out.off_block_residual, diff.norm());
  }
  return out;
}

CGTable clebsch_gordan(const Rep& j, const Rep& l, const Catalog& catalog) {
  const Rep product = tensor_product_rep(j, l);
  const RepDecomposition dec = decompose_rep(product, catalog);
  CGTable out;
  out.left = j.label();
  out.right = l.label();
  out.left_dim = j.dim();
  out.right_dim = l.dim();
  out.entries = dec.basis_change.adjoint();
  for (const auto& c : dec.copies)
    for (Eigen::Index m = 0; m < c.dim; ++m)
      out.rows.push_back({catalog.irreps[c.catalog_index].label(), c.catalog_index, c.copy, static_cast<int>(m)});
  return out;
}

cplx CGTable::coefficient(const std::string& label, int copy, int big_m, int m, int n) const {
  for (size_t r = 0; r < rows.size(); ++r)
    if (rows[r].label == label && rows[r].copy == copy && rows[r].m == big_m)
      return entries(static_cast<Eigen::Index>(r), m * right_dim + n);
  return 0.0;
}

Matrix CGTable::block(const std::string& label, int copy) const {
  std::vector<Eigen::Index> idx;
  for (size_t r = 0; r < rows.size(); ++r)
    if (rows[r].label == label && rows[r].copy == copy) idx.push_back(static_cast<Eigen::Index>(r));
  Matrix out(static_cast<Eigen::Index>(idx.size()), entries.cols());
  for (size_t k = 0; k < idx.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = entries.row(idx[k]);
  return out;
}

int CGTable::multiplicity(const std::string& label) const {
  int count = 0;
  for (const auto& r : rows)
    if (r.label == label && r.m == 0) ++count;
  return count;
}

}  // namespace gauge_mpv

#include "gauge_mpv/errors.hpp"
#include "gauge_mpv/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace gauge_mpv {

namespace {

bool acts_trivially(const Rep& irrep) {
  for (const auto& m : irrep.matrices()) {
    const Matrix target = irrep.is_lie() ? Matrix(Matrix::Zero(m.rows(), m.cols())) : Matrix(Matrix::Identity(m.rows(), m.cols()));
    if ((m - target).norm() > 1e-9) return false;
  }
  return true;
}

// Rep of the same group from per-element matrices (finite) or generators (SU(2)).
Rep rep_like(const Rep& like, std::vector<Matrix> mats, const std::string& label) {
  return like.is_lie() ? Rep::lie(like.group_ptr(), std::move(mats), label)
                       : Rep::finite(like.group_ptr(), std::move(mats), label);
}

std::optional<int> conjugate_index(const Rep& irrep, const Catalog& catalog) {
  try {
    const RepDecomposition dec = decompose_rep(conjugate_rep(irrep), catalog);
    if (dec.blocks.size() == 1 && dec.blocks[0].multiplicity == 1) return dec.blocks[0].catalog_index;
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace

MatterLocalAnalysis analyze_matter_local_symmetry(const MpsTensor& a, const Rep& theta, const Catalog& catalog,
                                                  double tol) {
  if (!a.is_square()) throw Error(ErrorKind::NotInCF, "tensor is not square");
  for (auto [offset, size] : diagonal_blocks(a)) {
    std::vector<Matrix> mats;
    for (const auto& m : a.matrices()) mats.push_back(m.block(offset, offset, size, size));
    if (!is_normal(MpsTensor(mats)).normal())
      throw Error(ErrorKind::NotInCF, "diagonal block at offset " + std::to_string(offset) + " is not normal");
  }
  if (theta.dim() != a.phys_dim()) throw Error(ErrorKind::DimMismatch, "Theta dimension differs from physical dimension");

  MatterLocalAnalysis out;
  const RepDecomposition dec = decompose_rep(theta, catalog);
  const MpsTensor rotated = a.physical_action(dec.basis_change.adjoint());
  const double scale = std::max(a.norm(), 1e-300);
  for (const auto& copy : dec.copies) {
    double norm2 = 0.0;
    for (Eigen::Index k = 0; k < copy.dim; ++k) norm2 += rotated[copy.offset + k].squaredNorm();
    const Rep& irrep = catalog.irreps[static_cast<size_t>(copy.catalog_index)];
    SectorNorm s{irrep.label(), copy.copy, acts_trivially(irrep), std::sqrt(norm2)};
    if (!s.trivial && s.norm > tol * scale) out.flagged.push_back(s.label + "#" + std::to_string(s.copy));
    out.sectors.push_back(s);
  }
  for (const auto& g : test_elements(theta.group(), 100, 0)) {
    double diff = 0.0;
    const MpsTensor moved = a.physical_action(theta.at(g));
    for (Eigen::Index i = 0; i < a.phys_dim(); ++i) diff += (moved[i] - a[i]).squaredNorm();
    out.tensor_residual = std::max(out.tensor_residual, std::sqrt(diff) / scale);
  }
  out.passed = out.flagged.empty();
  return out;
}

GaugeHilbertAnalysis analyze_gauge_hilbert(const MpsTensor& b, const Rep& r, const Rep& l, const Catalog& catalog,
                                           double tol) {
  if (r.dim() != b.phys_dim() || l.dim() != b.phys_dim())
    throw Error(ErrorKind::DimMismatch, "R and L must act on the physical space of B");
  const Eigen::Index d = b.phys_dim();
  Matrix coeffs(d, b.left_dim() * b.right_dim());
  for (Eigen::Index i = 0; i < d; ++i) coeffs.row(i) = vec_rows(b[i]).transpose();

  GaugeHilbertAnalysis out;
  out.support = column_space(coeffs);
  const Matrix& s = out.support;
  const Matrix outside = Matrix::Identity(d, d) - s * s.adjoint();
  for (const Rep* rep : {&r, &l})
    for (const auto& m : rep->constraint_matrices())
      if ((outside * m * s).norm() > tol * std::max(1.0, m.norm()))
        throw Error(ErrorKind::NotDecomposable, "physical support of B is not invariant under " + rep->label());

  const Rep rs = restrict_rep(r, s), ls = restrict_rep(l, s);
  for (const auto& x : rs.constraint_matrices())
    for (const auto& y : ls.constraint_matrices())
      out.commutator_residual = std::max(out.commutator_residual, (x * y - y * x).norm());
  if (out.commutator_residual > tol)
    throw Error(ErrorKind::NotDecomposable, "R and L do not commute on the support of B (residual " +
                                                std::to_string(out.commutator_residual) + ")");

  const RepDecomposition rdec = decompose_rep(rs, catalog);
  std::map<std::pair<int, int>, int> sector_ids;
  out.kogut_susskind = true;
  for (const auto& rblock : rdec.blocks) {
    std::vector<const RepDecomposition::Copy*> copies;
    for (const auto& c : rdec.copies)
      if (c.catalog_index == rblock.catalog_index) copies.push_back(&c);
    const Eigen::Index mult = static_cast<Eigen::Index>(copies.size());
    const Eigen::Index rdim = rblock.dim;
    // L acts as 1 (x) L' on (copies) x (irrep) because every copy carries the same matrices.
    std::vector<Matrix> lprime;
    for (const auto& m : ls.matrices()) {
      Matrix lp(mult, mult);
      for (Eigen::Index c1 = 0; c1 < mult; ++c1)
        for (Eigen::Index c2 = 0; c2 < mult; ++c2)
          lp(c1, c2) = (rdec.basis_change.col(copies[c1]->offset).adjoint() * m *
                        rdec.basis_change.col(copies[c2]->offset))(0, 0);
      lprime.push_back(lp);
    }
    const RepDecomposition ldec = decompose_rep(rep_like(ls, lprime, "L'"), catalog);
    const std::optional<int> conj_r = conjugate_index(catalog.irreps[static_cast<size_t>(rblock.catalog_index)], catalog);
    for (const auto& lcopy : ldec.copies) {
      Matrix basis(d, lcopy.dim * rdim);
      for (Eigen::Index p = 0; p < lcopy.dim; ++p)
        for (Eigen::Index n = 0; n < rdim; ++n) {
          Vector v = Vector::Zero(s.cols());
          for (Eigen::Index c = 0; c < mult; ++c)
            v += ldec.basis_change(c, lcopy.offset + p) * rdec.basis_change.col(copies[c]->offset + n);
          basis.col(p * rdim + n) = s * v;
        }
      const auto key = std::make_pair(lcopy.catalog_index, rblock.catalog_index);
      auto it = sector_ids.find(key);
      if (it == sector_ids.end()) {
        GaugeSector sector;
        sector.left = catalog.irreps[static_cast<size_t>(lcopy.catalog_index)].label();
        sector.right = rblock.label;
        sector.left_index = lcopy.catalog_index;
        sector.right_index = rblock.catalog_index;
        sector.kogut_susskind = conj_r.has_value() && *conj_r == lcopy.catalog_index;
        out.kogut_susskind = out.kogut_susskind && sector.kogut_susskind;
        it = sector_ids.emplace(key, static_cast<int>(out.sectors.size())).first;
        out.sectors.push_back(sector);
      }
      ++out.sectors[static_cast<size_t>(it->second)].multiplicity;
      out.sector_bases.push_back(basis);
      out.sector_of_basis.push_back(it->second);
    }
  }
  return out;
}

BStructureAnalysis analyze_b_structure(const MpsTensor& b, const Rep& r, const Rep& l, const Rep& x, const Rep& y,
                                       const Catalog& catalog, const MpsTensor* a, double tol) {
  if (x.dim() != b.right_dim() || y.dim() != b.left_dim())
    throw Error(ErrorKind::DimMismatch, "X must act on the right and Y on the left virtual space of B");
  const GaugeHilbertAnalysis hilbert = analyze_gauge_hilbert(b, r, l, catalog, tol);
  const RepDecomposition xdec = decompose_rep(x, catalog);
  // conj(Y) W = W (+) D, so Y-invariant subspaces are spanned by conj(W).
  const RepDecomposition ydec = decompose_rep(conjugate_rep(y), catalog);
  const Matrix ybasis = ydec.basis_change.conjugate();
  const double scale = std::max(b.norm(), 1e-300);

  BStructureAnalysis out;
  out.condition1 = true;
  for (size_t k = 0; k < hilbert.sector_bases.size(); ++k) {
    const GaugeSector& sector = hilbert.sectors[static_cast<size_t>(hilbert.sector_of_basis[k])];
    const MpsTensor projected = b.physical_action(hilbert.sector_bases[k].adjoint());
    bool has_match = false;
    for (const auto& yc : ydec.copies)
      for (const auto& xc : xdec.copies) {
        BBlockEntry e;
        e.sector = static_cast<int>(k);
        e.y_copy = static_cast<int>(&yc - ydec.copies.data());
        e.x_copy = static_cast<int>(&xc - xdec.copies.data());
        e.matched = xc.catalog_index == sector.right_index && yc.catalog_index == sector.left_index;
        Matrix t(projected.phys_dim(), yc.dim * xc.dim);
        for (Eigen::Index i = 0; i < projected.phys_dim(); ++i)
          t.row(i) = vec_rows(ybasis.middleCols(yc.offset, yc.dim).adjoint() * projected[i] *
                              xdec.basis_change.middleCols(xc.offset, xc.dim))
                         .transpose();
        e.norm = t.norm() / scale;
        if (e.matched) {
          has_match = true;
          const double c = t.norm() / std::sqrt(static_cast<double>(t.rows()));
          e.constant = c;
          if (c > 0.0 && t.rows() == t.cols())
            e.shape_residual = (t * t.adjoint() / (c * c) - Matrix::Identity(t.rows(), t.rows())).norm();
        } else {
          out.max_unmatched_norm = std::max(out.max_unmatched_norm, e.norm);
        }
        out.blocks.push_back(e);
      }
    if (!has_match && projected.norm() > tol * scale) out.condition1 = false;
  }
  out.condition2 = std::all_of(ydec.copies.begin(), ydec.copies.end(), [&](const auto& yc) {
    return std::any_of(hilbert.sectors.begin(), hilbert.sectors.end(),
                       [&](const GaugeSector& s) { return s.left_index == yc.catalog_index; });
  });
  out.condition3 = std::all_of(xdec.copies.begin(), xdec.copies.end(), [&](const auto& xc) {
    return std::any_of(hilbert.sectors.begin(), hilbert.sectors.end(),
                       [&](const GaugeSector& s) { return s.right_index == xc.catalog_index; });
  });
  out.normality_contradiction = !(out.condition2 && out.condition3);
  if (a != nullptr)
    out.pair_normal = is_normal(product_tensor(*a, b)).normal() && is_normal(product_tensor(b, *a)).normal();
  return out;
}

}  // namespace gauge_mpv

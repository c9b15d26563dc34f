#include "gauge_mpv/constructors.hpp"

#include "gauge_mpv/catalogs.hpp"
#include "gauge_mpv/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

namespace gauge_mpv {

namespace {

// Applies a linear map to every element matrix (finite) or generator (SU(2)).
Rep map_rep(const Rep& like, const std::function<Matrix(const Matrix&)>& f, const std::string& label) {
  std::vector<Matrix> mats;
  for (const auto& m : like.matrices()) mats.push_back(f(m));
  return like.is_lie() ? Rep::lie(like.group_ptr(), std::move(mats), label)
                       : Rep::finite(like.group_ptr(), std::move(mats), label);
}

Rep from_matrices(const Rep& like, std::vector<Matrix> mats, const std::string& label) {
  return like.is_lie() ? Rep::lie(like.group_ptr(), std::move(mats), label)
                       : Rep::finite(like.group_ptr(), std::move(mats), label);
}

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

MpsTensor matrix_units(Eigen::Index rows, Eigen::Index cols) {
  std::vector<Matrix> mats;
  for (Eigen::Index m = 0; m < rows; ++m)
    for (Eigen::Index n = 0; n < cols; ++n) {
      Matrix e = Matrix::Zero(rows, cols);
      e(m, n) = 1.0;
      mats.push_back(e);
    }
  return MpsTensor(mats);
}

bool same_matrices(const Rep& a, const Rep& b) {
  if (a.dim() != b.dim() || a.is_lie() != b.is_lie()) return false;
  for (size_t k = 0; k < a.matrices().size(); ++k)
    if ((a.matrices()[k] - b.matrices()[k]).norm() > 1e-14) return false;
  return true;
}

}  // namespace

ElementaryBlock elementary_b_block(const Rep& l, const Rep& r) {
  if (l.group_ptr() != r.group_ptr()) throw Error(ErrorKind::GroupMismatch, "l and r belong to different groups");
  const Eigen::Index dl = l.dim(), dr = r.dim();
  ElementaryBlock out{MpsTensor::zero(dl * dr, dl, dr),
                      map_rep(r, [&](const Matrix& m) { return kron(identity(dl), m); }, "1*" + r.label()),
                      map_rep(l, [&](const Matrix& m) { return kron(m, identity(dr)); }, l.label() + "*1"),
                      r,
                      conjugate_rep(l),
                      false,
                      ""};
  if (!r.is_lie() && !r.multiplier().times(l.multiplier()).is_trivial()) {
    out.irrep_mismatch = true;
    out.note = "multipliers of " + l.label() + " and " + r.label() + " are not inverse; B = 0";
    return out;
  }
  out.b = matrix_units(dl, dr);
  return out;
}

ElementaryBlock elementary_b_block(const Rep& l, const Rep& r, const Rep& x, const Rep& y) {
  ElementaryBlock out = elementary_b_block(l, r);
  if (x.group_ptr() != r.group_ptr() || y.group_ptr() != r.group_ptr())
    throw Error(ErrorKind::GroupMismatch, "virtual representations belong to a different group");
  const Eigen::Index d = l.dim() * r.dim();
  out.x = x;
  out.y = y;
  out.b = MpsTensor::zero(d, y.dim(), x.dim());
  if (same_matrices(x, r) && same_matrices(y, conjugate_rep(l)) && !out.irrep_mismatch) {
    out.b = matrix_units(l.dim(), r.dim());
    return out;
  }
  out.irrep_mismatch = false;
  out.note.clear();
  // Unknown B in row-major (i, alpha, beta) order.
  const Eigen::Index dy = y.dim(), dx = x.dim();
  const auto rc = out.r.constraint_matrices(), lc = out.l.constraint_matrices();
  const auto xc = x.constraint_matrices(), yc = y.constraint_matrices();
  std::vector<Matrix> rows;
  for (size_t k = 0; k < rc.size(); ++k) {
    rows.push_back(kron(rc[k], identity(dy * dx)) - kron(identity(d * dy), xc[k].transpose()));
    const Matrix yinv = x.is_lie() ? Matrix(-yc[k]) : Matrix(yc[k].inverse());
    rows.push_back(kron(lc[k], identity(dy * dx)) - kron(kron(identity(d), yinv), identity(dx)));
  }
  Eigen::Index total = 0;
  for (const auto& m : rows) total += m.rows();
  Matrix system(total, d * dy * dx);
  Eigen::Index at = 0;
  for (const auto& m : rows) {
    system.middleRows(at, m.rows()) = m;
    at += m.rows();
  }
  const Matrix kernel = rows.empty() ? identity(d * dy * dx) : null_space(system, 1e-9, 1e-10);
  if (kernel.cols() == 0) {
    out.irrep_mismatch = true;
    out.note = "X is not " + r.label() + " or conj(Y) is not " + l.label() + "; B = 0";
    return out;
  }
  Vector v = kernel.col(0);
  fix_phase(v);
  v *= std::sqrt(static_cast<double>(d)) / v.norm();
  std::vector<Matrix> mats;
  for (Eigen::Index i = 0; i < d; ++i) mats.push_back(unvec_rows(v.segment(i * dy * dx, dy * dx), dy, dx));
  out.b = MpsTensor(mats);
  if (kernel.cols() > 1) out.note = "solution space has dimension " + std::to_string(kernel.cols());
  return out;
}

MpsTensor wigner_eckart_a_block(const std::string& j0, const Rep& j, const Rep& l, const Catalog& catalog,
                                const std::vector<cplx>& alpha) {
  const CGTable table = clebsch_gordan(conjugate_rep(j), l, catalog);
  const int mult = table.multiplicity(j0);
  if (mult == 0)
    throw Error(ErrorKind::ZeroByWignerEckart, j0 + " does not occur in conj(" + j.label() + ") * " + l.label());
  if (!alpha.empty() && static_cast<int>(alpha.size()) != mult)
    throw Error(ErrorKind::DimMismatch, "expected " + std::to_string(mult) + " coefficients for " + j0);
  const Eigen::Index dim = catalog.by_label(j0).dim();
  std::vector<Matrix> mats(static_cast<size_t>(dim), Matrix::Zero(j.dim(), l.dim()));
  for (int c = 0; c < mult; ++c) {
    const Matrix rows = table.block(j0, c);
    const cplx coeff = alpha.empty() ? cplx(1.0) : alpha[static_cast<size_t>(c)];
    for (Eigen::Index m = 0; m < dim; ++m)
      mats[static_cast<size_t>(m)] += coeff * unvec_rows(rows.row(m).transpose(), j.dim(), l.dim());
  }
  return MpsTensor(mats);
}

WignerEckartTensor wigner_eckart_tensor(const Rep& j, const Rep& l, const Catalog& catalog,
                                        const std::vector<std::string>& labels,
                                        const std::map<std::string, std::vector<cplx>>& alpha) {
  const CGTable table = clebsch_gordan(conjugate_rep(j), l, catalog);
  std::vector<std::string> chosen = labels;
  if (chosen.empty()) {
    std::set<int> present;
    for (const auto& row : table.rows) present.insert(row.catalog_index);
    for (int idx : present) chosen.push_back(catalog.irreps[static_cast<size_t>(idx)].label());
  }
  WignerEckartTensor out;
  std::vector<Matrix> mats;
  std::vector<Rep> blocks;
  for (const auto& label : chosen) {
    const int mult = table.multiplicity(label);
    if (mult == 0)
      throw Error(ErrorKind::ZeroByWignerEckart, label + " does not occur in conj(" + j.label() + ") * " + l.label());
    auto it = alpha.find(label);
    if (it != alpha.end() && static_cast<int>(it->second.size()) != mult)
      throw Error(ErrorKind::DimMismatch, "expected " + std::to_string(mult) + " coefficients for " + label);
    for (int c = 0; c < mult; ++c) {
      const cplx coeff = it == alpha.end() ? cplx(1.0) : it->second[static_cast<size_t>(c)];
      const Matrix rows = table.block(label, c);
      for (Eigen::Index m = 0; m < rows.rows(); ++m)
        mats.push_back(coeff * unvec_rows(rows.row(m).transpose(), j.dim(), l.dim()));
      blocks.push_back(catalog.by_label(label));
      out.layout.emplace_back(label, c);
    }
  }
  out.a = MpsTensor(mats);
  out.theta = direct_sum_rep(blocks);
  return out;
}

std::optional<std::vector<cplx>> solve_coboundary(const Multiplier& beta, const FiniteGroup& group, double tol) {
  const int n = group.order();
  std::vector<cplx> mu0(static_cast<size_t>(n));
  for (int g = 0; g < n; ++g) {
    double arg = 0.0;
    for (int h = 0; h < n; ++h) arg += std::arg(beta.values(g, h));
    mu0[static_cast<size_t>(g)] = std::polar(1.0, arg / n);
  }
  // beta' = beta / d(mu0) is the coboundary of a function with values in the n-th roots of unity.
  Matrix rest(n, n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      rest(g, h) = beta.values(g, h) * mu0[static_cast<size_t>(group.multiply(g, h))] /
                   (mu0[static_cast<size_t>(g)] * mu0[static_cast<size_t>(h)]);
  const auto& gens = group.generators();
  std::vector<int> choice(gens.size(), 0);
  while (true) {
    std::vector<cplx> nu(static_cast<size_t>(n), cplx(0.0));
    std::vector<bool> known(static_cast<size_t>(n), false);
    const int e = group.identity();
    nu[static_cast<size_t>(e)] = rest(e, e);
    known[static_cast<size_t>(e)] = true;
    for (size_t k = 0; k < gens.size(); ++k) {
      nu[static_cast<size_t>(gens[k])] = std::polar(1.0, 2.0 * M_PI * choice[k] / n);
      known[static_cast<size_t>(gens[k])] = true;
    }
    bool consistent = true;
    std::vector<int> queue = {e};
    for (int g : gens) queue.push_back(g);
    for (size_t qi = 0; qi < queue.size() && consistent; ++qi) {
      const int g = queue[qi];
      for (int s : gens) {
        const int gs = group.multiply(g, s);
        const cplx value = nu[static_cast<size_t>(g)] * nu[static_cast<size_t>(s)] / rest(g, s);
        if (!known[static_cast<size_t>(gs)]) {
          nu[static_cast<size_t>(gs)] = value;
          known[static_cast<size_t>(gs)] = true;
          queue.push_back(gs);
        } else if (std::abs(nu[static_cast<size_t>(gs)] - value) > tol) {
          consistent = false;
          break;
        }
      }
    }
    if (consistent) {
      for (int g = 0; g < n && consistent; ++g)
        for (int h = 0; h < n && consistent; ++h)
          if (std::abs(nu[static_cast<size_t>(g)] * nu[static_cast<size_t>(h)] / nu[static_cast<size_t>(group.multiply(g, h))] -
                       rest(g, h)) > tol)
            consistent = false;
    }
    if (consistent) {
      std::vector<cplx> mu(static_cast<size_t>(n));
      for (int g = 0; g < n; ++g) mu[static_cast<size_t>(g)] = mu0[static_cast<size_t>(g)] * nu[static_cast<size_t>(g)];
      return mu;
    }
    size_t k = 0;
    while (k < choice.size() && ++choice[k] == n) choice[k++] = 0;
    if (k == choice.size()) return std::nullopt;
  }
}

GaugedSymmetry gauge_global_symmetry(const MpsTensor& a, const Rep& theta, const Rep& x, const Rep& y,
                                     std::uint64_t seed) {
  if (!a.is_square() || x.dim() != a.left_dim() || y.dim() != a.right_dim())
    throw Error(ErrorKind::DimMismatch, "X and Y must act on the virtual spaces of A");
  const auto elements = test_elements(theta.group(), 20, seed);
  const double residual = verify_relation_A(a, theta, x, y, elements).max_residual;
  if (residual > 1e-8)
    throw Error(ErrorKind::NotEquivalent, "A does not satisfy Theta.A = X^-1 A Y (residual " + std::to_string(residual) + ")");

  const Eigen::Index dim = a.left_dim();
  std::vector<Matrix> constraints = x.constraint_matrices();
  for (const auto& m : y.constraint_matrices()) constraints.push_back(m);
  const std::vector<Matrix> commutant = intertwiners(constraints, constraints, dim, dim);
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix h = Matrix::Zero(dim, dim);
  for (const auto& t : commutant) h += cplx(normal(rng), normal(rng)) * t;
  h = hermitian_part(h);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& values = es.eigenvalues();
  const double gap = 1e-8 * std::max(1.0, values.cwiseAbs().maxCoeff());

  GaugedSymmetry out;
  Eigen::Index start = 0;
  for (Eigen::Index k = 1; k <= dim; ++k) {
    if (k < dim && values(k) - values(k - 1) <= gap) continue;
    out.subspaces.push_back(canonical_basis(es.eigenvectors().middleCols(start, k - start)));
    start = k;
  }

  std::vector<Matrix> b_mats;
  std::vector<Rep> r_blocks, l_blocks;
  for (const auto& q : out.subspaces) {
    const Eigen::Index da = q.cols();
    for (Eigen::Index m = 0; m < da; ++m)
      for (Eigen::Index n = 0; n < da; ++n) b_mats.push_back(q.col(m) * q.col(n).adjoint());
    const Rep xa = restrict_rep(x, q), ya = restrict_rep(y, q);
    r_blocks.push_back(map_rep(xa, [&](const Matrix& m) { return kron(identity(da), m); }, "1*X"));
    const Rep ya_conj = conjugate_rep(ya);
    l_blocks.push_back(map_rep(ya_conj, [&](const Matrix& m) { return kron(m, identity(da)); }, "conj(Y)*1"));
  }
  out.pair = {a, MpsTensor(b_mats)};
  out.r = direct_sum_rep(r_blocks).relabeled("R");
  out.l = direct_sum_rep(l_blocks).relabeled("L");
  out.x = x;
  out.y = y;
  return out;
}

GaugedSymmetry gauge_global_symmetry(const MpsTensor& a, const Rep& theta, std::uint64_t seed) {
  if (theta.is_lie())
    throw Error(ErrorKind::ExtractionDegenerate, "Lie groups need an explicit virtual representation");
  if (!a.is_square()) throw Error(ErrorKind::DimMismatch, "tensor must be square");
  const FiniteGroup& group = theta.group().finite();
  const int order = group.order();
  std::vector<std::vector<Matrix>> xs(static_cast<size_t>(order)), ys(static_cast<size_t>(order));
  std::optional<Multiplier> reference;
  CheckOptions options;
  options.seed = seed;
  for (auto [offset, size] : diagonal_blocks(a)) {
    std::vector<Matrix> mats;
    for (const auto& m : a.matrices()) mats.push_back(m.block(offset, offset, size, size));
    const VirtualRep vr = extract_global_virtual_rep(MpsTensor(mats), theta, options);
    if (!vr.multiplier_x)
      throw Error(ErrorKind::ExtractionDegenerate, "block at offset " + std::to_string(offset) + " has no projective X");
    std::vector<cplx> mu(static_cast<size_t>(order), cplx(1.0));
    if (!reference) {
      reference = vr.multiplier_x;
    } else {
      const auto lift = solve_coboundary(reference->times(vr.multiplier_x->inverse()), group);
      if (!lift)
        throw Error(ErrorKind::MixedCohomology,
                    "block at offset " + std::to_string(offset) + " carries a different cohomology class");
      mu = *lift;
    }
    for (int g = 0; g < order; ++g) {
      xs[static_cast<size_t>(g)].push_back(mu[static_cast<size_t>(g)] * vr.x[static_cast<size_t>(g)]);
      ys[static_cast<size_t>(g)].push_back(mu[static_cast<size_t>(g)] * vr.y[static_cast<size_t>(g)]);
    }
  }
  std::vector<Matrix> xm, ym;
  for (int g = 0; g < order; ++g) {
    xm.push_back(direct_sum(xs[static_cast<size_t>(g)]));
    ym.push_back(direct_sum(ys[static_cast<size_t>(g)]));
  }
  const Rep x = Rep::finite(theta.group_ptr(), xm, "X", 1e-8);
  const Rep y = Rep::finite(theta.group_ptr(), ym, "Y", 1e-8);
  return gauge_global_symmetry(a, theta, x, y, seed);
}

MatterCoupling couple_matter_to_gauge(const Rep& x, const Rep& y, const Catalog& catalog,
                                      const std::map<int, std::string>& j_override) {
  const RepDecomposition dx = decompose_rep(x, catalog);
  const RepDecomposition dy = decompose_rep(y, catalog);
  if (dx.copies.size() != dy.copies.size())
    throw Error(ErrorKind::DimMismatch, "X and Y decompose into different numbers of irreducible blocks");
  MatterCoupling out;
  std::vector<Matrix> mats;
  std::vector<Rep> thetas;
  for (size_t k = 0; k < dx.copies.size(); ++k) {
    const auto& cx = dx.copies[k];
    const auto& cy = dy.copies[k];
    const Rep& j = catalog.irreps[static_cast<size_t>(cx.catalog_index)];
    const Rep& l = catalog.irreps[static_cast<size_t>(cy.catalog_index)];
    std::string label;
    if (auto it = j_override.find(static_cast<int>(k)); it != j_override.end()) {
      label = it->second;
    } else {
      const CGTable table = clebsch_gordan(conjugate_rep(j), l, catalog);
      int best = -1;
      for (const auto& row : table.rows) {
        const Rep& cand = catalog.irreps[static_cast<size_t>(row.catalog_index)];
        if (best < 0 || cand.dim() < catalog.irreps[static_cast<size_t>(best)].dim() ||
            (cand.dim() == catalog.irreps[static_cast<size_t>(best)].dim() && row.catalog_index < best))
          best = row.catalog_index;
      }
      label = catalog.irreps[static_cast<size_t>(best)].label();
    }
    const MpsTensor blockt = wigner_eckart_a_block(label, j, l, catalog);
    const Matrix wx = dx.basis_change.middleCols(cx.offset, cx.dim);
    const Matrix wy = dy.basis_change.middleCols(cy.offset, cy.dim);
    for (const auto& m : blockt.matrices()) mats.push_back(wx * m * wy.adjoint());
    thetas.push_back(catalog.by_label(label));
    out.j_labels.push_back(label);
  }
  out.a = MpsTensor(mats);
  out.theta = direct_sum_rep(thetas);
  return out;
}

GaugeConstruction build_d10_example() {
  GaugeConstruction out;
  out.name = "d10";
  out.group = builtin_group("D10");
  const Catalog catalog = builtin_catalog("D10");
  const Rep& rho1 = catalog.by_label("rho1");
  const Rep& rho2 = catalog.by_label("rho2");
  Matrix a1 = Matrix::Zero(2, 2), a2 = Matrix::Zero(2, 2);
  a1(0, 0) = 1.0;
  a2(1, 1) = 1.0;
  out.pair = {MpsTensor({a1, a2}), matrix_units(2, 2)};
  out.theta = rho1;
  out.r = map_rep(rho1, [](const Matrix& m) { return kron(identity(2), m); }, "1*rho1");
  out.l = map_rep(rho2, [](const Matrix& m) { return kron(Matrix(m.conjugate()), identity(2)); }, "conj(rho2)*1");
  out.x = rho1;
  out.y = rho2;
  out.alpha = {{"rho1", {1.0}}};
  out.beta = {1.0};
  return out;
}

Su2Example build_su2_example(const Su2Options& options) {
  constexpr int kMaxTwiceSpin = 8;
  if (options.twice_r < 0 || options.twice_l < 0 || options.twice_r > kMaxTwiceSpin || options.twice_l > kMaxTwiceSpin)
    throw Error(ErrorKind::BadSpinSet, "spins must lie between 0 and 4");
  const Rep dr = su2_irrep(options.twice_r);
  const Rep dl = su2_irrep(options.twice_l);
  const Catalog catalog = su2_catalog(options.twice_r + options.twice_l);
  const int lo = std::abs(options.twice_r - options.twice_l), hi = options.twice_r + options.twice_l;
  for (const auto& label : options.j_set) {
    bool ok = false;
    for (int t = lo; t <= hi; t += 2) ok = ok || spin_label(t) == label;
    if (!ok) throw Error(ErrorKind::BadSpinSet, label + " does not occur in conj(r) * l");
  }
  const WignerEckartTensor first = wigner_eckart_tensor(dr, dl, catalog, options.j_set, options.alpha);
  const ElementaryBlock elem = elementary_b_block(conjugate_rep(dl), dr);

  Su2Example out;
  GaugeConstruction& c = out.construction;
  c.name = "su2";
  c.group = Group::su2();
  c.theta = first.theta;
  c.r = elem.r;
  c.l = elem.l;
  c.alpha = options.alpha;
  c.beta = {options.beta};
  MpsTensor a = first.a;
  MpsTensor b = elem.b.scaled(options.beta);
  c.x = dr;
  c.y = dl;
  if (options.duplicate) {
    const auto& alpha2 = options.alpha2.empty() ? options.alpha : options.alpha2;
    const WignerEckartTensor second = wigner_eckart_tensor(dr, dl, catalog, options.j_set, alpha2);
    a = direct_sum(a, second.a);
    b = direct_sum(b, b);
    c.x = direct_sum_rep({dr, dr});
    c.y = direct_sum_rep({dl, dl});
  }
  c.pair = {a, b};
  out.gauss.r = c.r.generators();
  out.gauss.q = c.theta.generators();
  out.gauss.l = c.l.generators();
  out.gauss.structure_constants = GaussOperators::su2_structure();
  return out;
}

}  // namespace gauge_mpv

#include "gauge_mpv/catalogs.hpp"
#include "gauge_mpv/constructors.hpp"
#include "gauge_mpv/symmetry.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <tuple>

using namespace gauge_mpv;

namespace {

CheckOptions opts(int n_max, int samples = 20, double tol = 1e-9) {
  CheckOptions o;
  o.n_max = n_max;
  o.samples = samples;
  o.tol = tol;
  return o;
}

Matrix kron_all(const std::vector<Matrix>& factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

// Dense operator on the full chain: op at the listed sites, identity elsewhere.
Matrix chain_operator(const std::vector<Eigen::Index>& dims, const std::vector<SiteOperator>& ops) {
  std::vector<Matrix> factors;
  for (const auto d : dims) factors.push_back(Matrix::Identity(d, d));
  for (const auto& s : ops) factors[static_cast<size_t>(s.site)] = s.op * factors[static_cast<size_t>(s.site)];
  return kron_all(factors);
}

double dense_residual(const Vector& psi, const Matrix& u) {
  if (psi.norm() < 1e-13) return 0.0;
  return (u * psi - psi).norm() / psi.norm();
}

MpsTensor random_tensor(Eigen::Index d, Eigen::Index d1, Eigen::Index d2, Rng& rng) {
  std::vector<Matrix> mats;
  for (Eigen::Index i = 0; i < d; ++i) mats.push_back(random_gaussian(d1, d2, rng));
  return MpsTensor(mats);
}

// Physical space supported on Theta-invariant vectors only.
MpsTensor symmetric_matter(const Rep& theta, Eigen::Index dim, Rng& rng) {
  const RepDecomposition dec = decompose_rep(theta, builtin_catalog(theta.group().name()));
  Matrix support = Matrix::Zero(theta.dim(), 0);
  for (const auto& c : dec.copies) {
    if (c.dim != 1) continue;
    bool trivial = true;
    for (const auto& m : theta.matrices()) {
      const Matrix w = dec.basis_change.middleCols(c.offset, 1);
      trivial = trivial && (m * w - w).norm() < 1e-12;
    }
    if (trivial) {
      support.conservativeResize(Eigen::NoChange, support.cols() + 1);
      support.rightCols(1) = dec.basis_change.middleCols(c.offset, 1);
    }
  }
  std::vector<Matrix> mats(static_cast<size_t>(theta.dim()), Matrix::Zero(dim, dim));
  for (Eigen::Index k = 0; k < support.cols(); ++k) {
    const Matrix coeff = random_gaussian(dim, dim, rng);
    for (Eigen::Index i = 0; i < theta.dim(); ++i) mats[static_cast<size_t>(i)] += support(i, k) * coeff;
  }
  return MpsTensor(mats);
}

}  // namespace

TEST(Setting, ParseNames) {
  EXPECT_EQ(parse_setting("matter-local"), SettingKind::MatterLocal);
  EXPECT_EQ(parse_setting("global"), SettingKind::MatterGlobal);
  EXPECT_EQ(parse_setting("matter-global"), SettingKind::MatterGlobal);
  EXPECT_EQ(parse_setting("gauge-local"), SettingKind::GaugeLocal);
  EXPECT_EQ(parse_setting("bab"), SettingKind::MatterGaugeLocal);
  EXPECT_ERROR_KIND(parse_setting("local"), ErrorKind::SchemaError);
  for (auto k : {SettingKind::MatterLocal, SettingKind::MatterGlobal, SettingKind::GaugeLocal,
                 SettingKind::MatterGaugeLocal})
    EXPECT_EQ(parse_setting(to_string(k)), k);
}

TEST(SiteOperator, MatchesKronecker) {
  Rng rng(1);
  const std::vector<Eigen::Index> dims = {2, 3, 2};
  const Vector v = random_gaussian(12, 1, rng).col(0);
  for (int site = 0; site < 3; ++site) {
    const Matrix op = random_gaussian(dims[static_cast<size_t>(site)], dims[static_cast<size_t>(site)], rng);
    EXPECT_LT((apply_site_operator(v, dims, site, op) - chain_operator(dims, {{site, op}}) * v).norm(), 1e-12);
  }
}

TEST(Report, RejectsBadOptions) {
  const GaugeConstruction d10 = build_d10_example();
  EXPECT_ERROR_KIND(check_global_symmetry(d10.pair.a, d10.theta, opts(0)), ErrorKind::SchemaError);
  EXPECT_ERROR_KIND(check_global_symmetry(d10.pair.a, d10.theta, opts(2, 10, 0.0)), ErrorKind::SchemaError);
  EXPECT_ERROR_KIND(check_global_symmetry(d10.pair.a, d10.r, opts(2)), ErrorKind::DimMismatch);
}

TEST(MatterLocal, IdentityAndInvariantSupportPass) {
  Rng rng(2);
  const Catalog cat = builtin_catalog("S3");
  const MpsTensor a = random_tensor(3, 2, 2, rng);
  EXPECT_TRUE(check_local_symmetry_matter(a, trivial_rep(cat.group, 3), opts(3)).passed());
  const Rep theta = direct_sum_rep({cat.by_label("trivial"), cat.by_label("standard")});
  const MpsTensor sym = symmetric_matter(theta, 2, rng);
  EXPECT_TRUE(check_local_symmetry_matter(sym, theta, opts(3), true).passed());
}

TEST(MatterLocal, FirstSiteAgreesWithAllSites) {
  Rng rng(3);
  const Catalog cat = builtin_catalog("D10");
  const GaugeConstruction d10 = build_d10_example();
  for (int trial = 0; trial < 4; ++trial) {
    const MpsTensor a = trial == 0 ? d10.pair.a : random_tensor(2, 2, 2, rng);
    const auto first = check_local_symmetry_matter(a, d10.theta, opts(3));
    const auto all = check_local_symmetry_matter(a, d10.theta, opts(3), true);
    EXPECT_EQ(first.passed(), all.passed());
    EXPECT_NEAR(first.max_residual, all.max_residual, 1e-10);
  }
  EXPECT_FALSE(check_local_symmetry_matter(d10.pair.a, d10.theta, opts(2)).passed());
}

TEST(MatterLocal, TensorLevelAgreesWithBruteForce) {
  Rng rng(4);
  const Catalog cat = builtin_catalog("S3");
  const Rep theta = direct_sum_rep({cat.by_label("trivial"), cat.by_label("trivial"), cat.by_label("sign")});
  const MpsTensor sym = symmetric_matter(theta, 2, rng);
  const MatterLocalAnalysis ok = analyze_matter_local_symmetry(sym, theta, cat);
  EXPECT_TRUE(ok.passed);
  EXPECT_TRUE(ok.flagged.empty());
  EXPECT_TRUE(check_local_symmetry_matter(sym, theta, opts(4)).passed());

  const MpsTensor generic = random_tensor(3, 2, 2, rng);
  const MatterLocalAnalysis bad = analyze_matter_local_symmetry(generic, theta, cat);
  EXPECT_FALSE(bad.passed);
  ASSERT_EQ(bad.flagged.size(), 1u);
  EXPECT_EQ(bad.flagged[0], "sign#0");
  EXPECT_FALSE(check_local_symmetry_matter(generic, theta, opts(4)).passed());
}

TEST(MatterLocal, NonCanonicalInputRejected) {
  const Catalog cat = builtin_catalog("Z3");
  Matrix upper = Matrix::Zero(2, 2);
  upper(0, 1) = 1.0;
  const MpsTensor a({Matrix::Identity(2, 2), upper, Matrix::Identity(2, 2)});
  const Rep theta = trivial_rep(cat.group, 3);
  EXPECT_ERROR_KIND(analyze_matter_local_symmetry(a, theta, cat), ErrorKind::NotInCF);
}

TEST(Global, D10MatterTensorFailsAtOneSite) {
  const GaugeConstruction d10 = build_d10_example();
  const auto report = check_global_symmetry(d10.pair.a, d10.theta, opts(1));
  EXPECT_FALSE(report.passed());
  EXPECT_GE(report.max_residual, 0.1);
  ASSERT_FALSE(report.failures.empty());
  EXPECT_EQ(report.failures.front().n, 1);
}

TEST(Global, WignerEckartTensorPasses) {
  const Catalog cat = builtin_catalog("Q8");
  const Rep& q = cat.by_label("H");
  const WignerEckartTensor w = wigner_eckart_tensor(q, q, cat);
  EXPECT_TRUE(check_global_symmetry(w.a, w.theta, opts(4)).passed());
}

TEST(Global, VanishingVectorsCountAsInvariant) {
  const Catalog cat = su2_catalog(2);
  const MatterCoupling mc = couple_matter_to_gauge(su2_irrep(1), su2_irrep(1), cat, {{0, "j=1"}});
  // Tr A^M = 0 for the spin-one block, so the one-site vector vanishes.
  EXPECT_LT(contract_mpv(mc.a, 1).norm(), 1e-14);
  EXPECT_TRUE(check_global_symmetry(mc.a, mc.theta, opts(3, 10)).passed());
}

TEST(Global, MatchesDenseOperator) {
  Rng rng(5);
  const Catalog cat = builtin_catalog("S3");
  const Rep theta = cat.by_label("standard");
  const MpsTensor a = random_tensor(2, 2, 2, rng);
  const auto report = check_global_symmetry(a, theta, opts(3, 6));
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const Vector psi = contract_mpv(a, n);
    for (int g = 0; g < 6; ++g) worst = std::max(worst, dense_residual(psi, kron_all(std::vector<Matrix>(n, theta.at_index(g)))));
  }
  EXPECT_NEAR(report.max_residual, worst, 1e-10);
}

TEST(GaugeLocal, ElementaryPassesAndD10Fails) {
  const Catalog cat = builtin_catalog("D10");
  const ElementaryBlock ks = elementary_b_block(conjugate_rep(cat.by_label("rho1")), cat.by_label("rho1"));
  EXPECT_TRUE(check_local_symmetry_gauge(ks.b, ks.r, ks.l, opts(3)).passed());
  const GaugeConstruction d10 = build_d10_example();
  const auto report = check_local_symmetry_gauge(d10.pair.b, d10.r, d10.l, opts(2));
  EXPECT_FALSE(report.passed());
  const Rep id = trivial_rep(cat.group, 4);
  EXPECT_TRUE(check_local_symmetry_gauge(d10.pair.b, id, id, opts(3)).passed());
}

TEST(GaugeLocal, MatchesDenseOperator) {
  const GaugeConstruction d10 = build_d10_example();
  const auto report = check_local_symmetry_gauge(d10.pair.b, d10.r, d10.l, opts(3));
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const Vector psi = contract_mpv(d10.pair.b, n);
    const std::vector<Eigen::Index> dims(static_cast<size_t>(n), 4);
    for (int g = 0; g < 10; ++g)
      for (int k = 0; k < n; ++k) {
        const Matrix u = chain_operator(dims, {{k, d10.r.at_index(g)}, {(k + 1) % n, d10.l.at_index(g)}});
        worst = std::max(worst, dense_residual(psi, u));
      }
  }
  EXPECT_NEAR(report.max_residual, worst, 1e-10);
}

TEST(Bab, D10PassesUpToThreePairs) {
  const GaugeConstruction d10 = build_d10_example();
  const auto report = check_local_symmetry_matter_gauge(d10.pair, d10.r, d10.theta, d10.l, opts(3));
  EXPECT_LE(report.max_residual, 1e-10);
  EXPECT_EQ(report.n_values, (std::vector<int>{1, 2, 3}));
}

TEST(Bab, IdentityRepsPass) {
  Rng rng(6);
  const GroupPtr g = builtin_group("Z3");
  const TensorPair pair{random_tensor(2, 2, 3, rng), random_tensor(3, 3, 2, rng)};
  EXPECT_TRUE(check_local_symmetry_matter_gauge(pair, trivial_rep(g, 3), trivial_rep(g, 2), trivial_rep(g, 3), opts(3))
                  .passed());
}

TEST(Bab, MatchesDenseOperatorOnRandomPair) {
  Rng rng(7);
  const GaugeConstruction d10 = build_d10_example();
  const TensorPair pair{random_tensor(2, 2, 2, rng), random_tensor(4, 2, 2, rng)};
  const auto report = check_local_symmetry_matter_gauge(pair, d10.r, d10.theta, d10.l, opts(2));
  double worst = 0.0;
  for (int n = 1; n <= 2; ++n) {
    const Vector psi = contract_pair(pair, n);
    std::vector<Eigen::Index> dims;
    for (int k = 0; k < n; ++k) dims.insert(dims.end(), {2, 4});
    for (int g = 0; g < 10; ++g)
      for (int k = 0; k < n; ++k) {
        const int left = (2 * k - 1 + 2 * n) % (2 * n);
        const Matrix u = chain_operator(dims, {{left, d10.r.at_index(g)}, {2 * k, d10.theta.at_index(g)}, {2 * k + 1, d10.l.at_index(g)}});
        worst = std::max(worst, dense_residual(psi, u));
      }
  }
  EXPECT_GT(worst, 1e-3);
  EXPECT_NEAR(report.max_residual, worst, 1e-10);
}

TEST(Relations, PerturbationIsDetected) {
  const GaugeConstruction d10 = build_d10_example();
  const auto elements = test_elements(*d10.group, 10, 0);
  EXPECT_LE(verify_relation_A(d10.pair.a, d10.theta, d10.x, d10.y, elements).max_residual, 1e-12);
  std::vector<Matrix> mats = d10.pair.a.matrices();
  mats[0](0, 1) = 1e-3;
  const MpsTensor perturbed(mats);
  const double res = verify_relation_A(perturbed, d10.theta, d10.x, d10.y, elements).max_residual;
  EXPECT_GT(res, 1e-4);
  EXPECT_LT(res, 1e-2);
  std::vector<Matrix> bmats = d10.pair.b.matrices();
  bmats[1] += 1e-3 * Matrix::Ones(2, 2);
  EXPECT_GT(verify_relation_B(MpsTensor(bmats), d10.r, d10.l, d10.x, d10.y, elements).max_residual, 1e-4);
}

TEST(Extraction, D10RecoversRho1AndRho2) {
  const Catalog cat = builtin_catalog("D10");
  const GaugeConstruction d10 = build_d10_example();
  const VirtualRep vr = extract_virtual_rep(d10.pair, d10.r, d10.theta, d10.l);
  ASSERT_EQ(vr.elements.size(), 10u);
  for (size_t g = 0; g < vr.elements.size(); ++g) {
    EXPECT_LT(projective_distance(vr.x[g], cat.by_label("rho1").at(vr.elements[g])), 1e-8);
    EXPECT_LT(projective_distance(vr.y[g], cat.by_label("rho2").at(vr.elements[g])), 1e-8);
  }
  EXPECT_LE(vr.relation_a_residual, 1e-9);
  EXPECT_LE(vr.relation_b_residual, 1e-9);
  ASSERT_TRUE(vr.multiplier_x.has_value());
  // rho1 is a linear representation.
  EXPECT_TRUE(vr.multiplier_x->is_trivial(1e-8));
}

TEST(Extraction, MultiplierMatchesR) {
  const Catalog pauli = builtin_catalog("Z2xZ2-pauli");
  const Rep p = pauli.by_label("pauli");
  const ElementaryBlock blk = elementary_b_block(conjugate_rep(p), p);
  const Catalog linear = builtin_catalog("Z2xZ2");
  const WignerEckartTensor w = wigner_eckart_tensor(p, p, linear);
  const TensorPair pair{w.a, blk.b};
  const VirtualRep vr = extract_virtual_rep(pair, blk.r, w.theta, blk.l);
  ASSERT_TRUE(vr.multiplier_x.has_value());
  // R = 1 (x) X carries the multiplier of X.
  const Multiplier r_mult = check_projective_rep(blk.r.matrices(), pauli.group->finite());
  EXPECT_TRUE(vr.multiplier_x->approx_equal(r_mult, 1e-8));
  EXPECT_FALSE(vr.multiplier_x->is_trivial(1e-8));
}

TEST(Extraction, TrivialRepsGiveIdentity) {
  Rng rng(8);
  const GroupPtr g = builtin_group("S3");
  const TensorPair pair{random_tensor(2, 2, 2, rng), random_tensor(2, 2, 2, rng)};
  const VirtualRep vr = extract_virtual_rep(pair, trivial_rep(g, 2), trivial_rep(g, 2), trivial_rep(g, 2));
  for (size_t k = 0; k < vr.x.size(); ++k) {
    EXPECT_LT(projective_distance(vr.x[k], Matrix::Identity(2, 2)), 1e-8);
    EXPECT_LT(projective_distance(vr.y[k], Matrix::Identity(2, 2)), 1e-8);
  }
}

TEST(Extraction, NonNormalRejected) {
  Rng rng(9);
  const GaugeConstruction d10 = build_d10_example();
  const MpsTensor a = direct_sum(d10.pair.a, d10.pair.a);
  const MpsTensor b = direct_sum(d10.pair.b, d10.pair.b);
  EXPECT_ERROR_KIND(extract_virtual_rep({a, b}, d10.r, d10.theta, d10.l), ErrorKind::NotNormal);
}

TEST(Extraction, GlobalRecoversVirtualRep) {
  const Catalog cat = builtin_catalog("S3");
  const Rep& s = cat.by_label("standard");
  const WignerEckartTensor w = wigner_eckart_tensor(s, s, cat);
  const VirtualRep vr = extract_global_virtual_rep(w.a, w.theta);
  for (size_t k = 0; k < vr.elements.size(); ++k) {
    EXPECT_LT(projective_distance(vr.x[k], s.at(vr.elements[k])), 1e-8);
    EXPECT_NEAR(std::abs(vr.x[k].determinant() - 1.0), 0.0, 1e-8);
  }
  EXPECT_LE(vr.relation_a_residual, 1e-9);
}

TEST(GaugeHilbert, ElementaryIsKogutSusskind) {
  const Catalog cat = builtin_catalog("S3");
  const Rep& s = cat.by_label("standard");
  const ElementaryBlock blk = elementary_b_block(conjugate_rep(s), s);
  const GaugeHilbertAnalysis h = analyze_gauge_hilbert(blk.b, blk.r, blk.l, cat);
  ASSERT_EQ(h.sectors.size(), 1u);
  EXPECT_EQ(h.sectors[0].right, "standard");
  EXPECT_EQ(h.sectors[0].multiplicity, 1);
  EXPECT_TRUE(h.kogut_susskind);
  EXPECT_EQ(h.support.cols(), 4);
  EXPECT_LE(h.commutator_residual, 1e-12);
}

TEST(GaugeHilbert, D10IsNotKogutSusskind) {
  const Catalog cat = builtin_catalog("D10");
  const GaugeConstruction d10 = build_d10_example();
  const GaugeHilbertAnalysis h = analyze_gauge_hilbert(d10.pair.b, d10.r, d10.l, cat);
  ASSERT_EQ(h.sectors.size(), 1u);
  EXPECT_EQ(h.sectors[0].right, "rho1");
  EXPECT_EQ(h.sectors[0].left, "rho2");
  EXPECT_FALSE(h.kogut_susskind);
}

TEST(GaugeHilbert, TwoBlocksGiveTwoSectors) {
  const Catalog cat = builtin_catalog("D10");
  const Rep rho1 = cat.by_label("rho1"), rho2 = cat.by_label("rho2");
  const ElementaryBlock b1 = elementary_b_block(conjugate_rep(rho1), rho1);
  const ElementaryBlock b2 = elementary_b_block(conjugate_rep(rho2), rho2);
  // Physical spaces stack; virtual spaces stack too.
  std::vector<Matrix> mats;
  for (const auto& m : b1.b.matrices()) {
    Matrix big = Matrix::Zero(4, 4);
    big.topLeftCorner(2, 2) = m;
    mats.push_back(big);
  }
  for (const auto& m : b2.b.matrices()) {
    Matrix big = Matrix::Zero(4, 4);
    big.bottomRightCorner(2, 2) = m;
    mats.push_back(big);
  }
  const MpsTensor b(mats);
  const Rep r = direct_sum_rep({b1.r, b2.r}), l = direct_sum_rep({b1.l, b2.l});
  const GaugeHilbertAnalysis h = analyze_gauge_hilbert(b, r, l, cat);
  EXPECT_EQ(h.sectors.size(), 2u);
  EXPECT_TRUE(h.kogut_susskind);
  const Rep x = direct_sum_rep({rho1, rho2}), y = direct_sum_rep({rho1, rho2});
  const BStructureAnalysis s = analyze_b_structure(b, r, l, x, y, cat);
  EXPECT_TRUE(s.condition1 && s.condition2 && s.condition3);
  EXPECT_LE(s.max_unmatched_norm, 1e-12);
  EXPECT_TRUE(check_local_symmetry_gauge(b, r, l, opts(2)).passed());
}

TEST(GaugeHilbert, NonCommutingActionsRejected) {
  const Catalog cat = builtin_catalog("S3");
  const Rep& s = cat.by_label("standard");
  const ElementaryBlock blk = elementary_b_block(conjugate_rep(s), s);
  // R and L acting on the same tensor factor fail to commute.
  const Rep l = tensor_product_rep(trivial_rep(s.group_ptr(), 2), s);
  EXPECT_ERROR_KIND(analyze_gauge_hilbert(blk.b, blk.r, l, cat), ErrorKind::NotDecomposable);
}

TEST(BStructure, ElementaryHasOneMatchedBlock) {
  const Catalog cat = builtin_catalog("S3");
  const Rep& s = cat.by_label("standard");
  const ElementaryBlock blk = elementary_b_block(conjugate_rep(s), s);
  const BStructureAnalysis a = analyze_b_structure(blk.b, blk.r, blk.l, blk.x, blk.y, cat);
  int matched = 0;
  for (const auto& e : a.blocks)
    if (e.matched) {
      ++matched;
      EXPECT_NEAR(std::abs(e.constant), 1.0, 1e-12);
      EXPECT_LE(e.shape_residual, 1e-12);
    }
  EXPECT_EQ(matched, 1);
  EXPECT_TRUE(a.condition1 && a.condition2 && a.condition3);
  EXPECT_FALSE(a.normality_contradiction);
}

TEST(BStructure, MismatchedBlocksVanish) {
  const Catalog cat = builtin_catalog("D10");
  const GaugeConstruction d10 = build_d10_example();
  const BStructureAnalysis a = analyze_b_structure(d10.pair.b, d10.r, d10.l, d10.x, d10.y, cat, &d10.pair.a);
  EXPECT_LE(a.max_unmatched_norm, 1e-12);
  EXPECT_TRUE(a.condition1);
  EXPECT_FALSE(a.normality_contradiction);
  ASSERT_TRUE(a.pair_normal.has_value());
  EXPECT_TRUE(*a.pair_normal);
}

TEST(BStructure, ZeroRowGivesContradiction) {
  const Catalog cat = builtin_catalog("D10");
  const Rep rho1 = cat.by_label("rho1"), rho2 = cat.by_label("rho2");
  const ElementaryBlock blk = elementary_b_block(conjugate_rep(rho1), rho1);
  std::vector<Matrix> padded;
  for (const auto& m : blk.b.matrices()) {
    Matrix big = Matrix::Zero(4, 2);
    big.topRows(2) = m;
    padded.push_back(big);
  }
  const MpsTensor b(padded);
  const Rep y = direct_sum_rep({rho1, rho2});
  Rng rng(10);
  const MpsTensor a = random_tensor(3, 2, 4, rng);
  const BStructureAnalysis s = analyze_b_structure(b, blk.r, blk.l, rho1, y, cat, &a);
  EXPECT_LE(verify_relation_B(b, blk.r, blk.l, rho1, y, test_elements(*cat.group, 10, 0)).max_residual, 1e-12);
  EXPECT_FALSE(s.condition2);
  EXPECT_TRUE(s.normality_contradiction);
  ASSERT_TRUE(s.pair_normal.has_value());
  EXPECT_FALSE(*s.pair_normal);
}

TEST(Gauss, ValidateRejectsBrokenAlgebra) {
  Su2Options o;
  const Su2Example ex = build_su2_example(o);
  GaussOperators broken = ex.gauss;
  broken.q[0] *= 2.0;
  EXPECT_ERROR_KIND(broken.validate(), ErrorKind::BadAlgebra);
  GaussOperators sizes = ex.gauss;
  sizes.l.pop_back();
  EXPECT_ERROR_KIND(sizes.validate(), ErrorKind::BadAlgebra);
}

TEST(Gauss, AbelianChargeEqualsDivergence) {
  // U(1): virtual charges x on both bonds; A^{(a,b)} = |a><b| carries y_b - x_a, B^{(c)} = |c><c|.
  const std::vector<double> charge = {0.0, 1.0, -1.0};
  const Eigen::Index d = 3;
  std::vector<Matrix> amats, bmats;
  Matrix q = Matrix::Zero(d * d, d * d), r = Matrix::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) {
      Matrix m = Matrix::Zero(d, d);
      m(a, b) = 1.0 + 0.1 * static_cast<double>(a + 2 * b);
      amats.push_back(m);
      q(a * d + b, a * d + b) = charge[static_cast<size_t>(b)] - charge[static_cast<size_t>(a)];
    }
  for (Eigen::Index c = 0; c < d; ++c) {
    Matrix m = Matrix::Zero(d, d);
    m(c, c) = 1.0;
    bmats.push_back(m);
    r(c, c) = charge[static_cast<size_t>(c)];
  }
  GaussOperators ops{{r}, {q}, {-r}, GaussOperators::abelian(1)};
  EXPECT_NO_THROW(ops.validate());
  const TensorPair pair{MpsTensor(amats), MpsTensor(bmats)};
  const GaussReport report = check_gauss_law(pair, ops, opts(3, 5));
  EXPECT_LE(report.max_residual, 1e-12);
  // Breaking charge conservation on the matter site shows up at once.
  GaussOperators shifted = ops;
  shifted.q[0] += Matrix::Identity(d * d, d * d);
  EXPECT_GT(check_gauss_law(pair, shifted, opts(2, 5)).max_residual, 0.5);
}

TEST(Gauss, ZeroGeneratorsTrivial) {
  Rng rng(11);
  const TensorPair pair{random_tensor(2, 2, 2, rng), random_tensor(3, 2, 2, rng)};
  GaussOperators ops{{Matrix::Zero(3, 3)}, {Matrix::Zero(2, 2)}, {Matrix::Zero(3, 3)}, GaussOperators::abelian(1)};
  EXPECT_EQ(check_gauss_law(pair, ops, opts(2, 3)).max_residual, 0.0);
}

TEST(Gauss, DimensionMismatch) {
  Rng rng(12);
  const TensorPair pair{random_tensor(2, 2, 2, rng), random_tensor(3, 2, 2, rng)};
  GaussOperators ops{{Matrix::Zero(2, 2)}, {Matrix::Zero(2, 2)}, {Matrix::Zero(2, 2)}, GaussOperators::abelian(1)};
  EXPECT_ERROR_KIND(check_gauss_law(pair, ops, opts(2)), ErrorKind::DimMismatch);
}

TEST(Gauss, RotationPreservesTotalViolation) {
  Su2Options o;
  const Su2Example ex = build_su2_example(o);
  Rng rng(13);
  const MpsTensor& a0 = ex.construction.pair.a;
  const TensorPair pair{random_tensor(a0.phys_dim(), a0.left_dim(), a0.right_dim(), rng), ex.construction.pair.b};
  const GaussReport report = check_gauss_law(pair, ex.gauss, opts(2, 4));
  std::map<std::tuple<int, int, int>, double> total;
  for (const auto& e : report.entries) total[{e.n, e.site, e.sample}] += e.residual * e.residual;
  std::map<std::pair<int, int>, double> reference;
  for (const auto& [key, value] : total)
    if (std::get<2>(key) == -1) reference[{std::get<0>(key), std::get<1>(key)}] = value;
  ASSERT_FALSE(reference.empty());
  double largest = 0.0;
  for (const auto& [key, value] : total) {
    const double ref = reference.at({std::get<0>(key), std::get<1>(key)});
    largest = std::max(largest, ref);
    EXPECT_NEAR(value, ref, 1e-10 * std::max(1.0, ref));
  }
  EXPECT_GT(largest, 1e-3);
}

TEST(EveryComponent, SingleComponentMatchesFull) {
  const GaugeConstruction d10 = build_d10_example();
  const EveryComponentReport r = check_every_component_invariant(d10.pair, d10.r, d10.theta, d10.l, opts(2));
  ASSERT_EQ(r.components.size(), 1u);
  EXPECT_TRUE(r.full.passed());
  EXPECT_TRUE(r.components[0].report.passed());
  EXPECT_FALSE(r.counterexample);
}

TEST(EveryComponent, StackedSymmetricPairs) {
  const GaugeConstruction d10 = build_d10_example();
  Rng rng(14);
  const Matrix u = random_unitary(2, rng);
  // Second copy in a different gauge; the symmetry operators are unchanged.
  const TensorPair second{d10.pair.a.sandwiched(u.adjoint(), Matrix::Identity(2, 2)).scaled(0.6),
                          d10.pair.b.sandwiched(Matrix::Identity(2, 2), u)};
  const TensorPair stacked{direct_sum(d10.pair.a, second.a), direct_sum(d10.pair.b, second.b)};
  const EveryComponentReport r = check_every_component_invariant(stacked, d10.r, d10.theta, d10.l, opts(2));
  EXPECT_TRUE(r.full.passed());
  EXPECT_GE(r.components.size(), 1u);
  for (const auto& c : r.components) EXPECT_TRUE(c.report.passed());
  EXPECT_FALSE(r.counterexample);
}

TEST(EveryComponent, RandomStacksNeverCounterexample) {
  const Catalog cat = builtin_catalog("D10");
  const GaugeConstruction d10 = build_d10_example();
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Rng rng(100 + seed);
    const TensorPair extra{random_tensor(2, 1, 1, rng), random_tensor(4, 1, 1, rng)};
    const TensorPair stacked{direct_sum(d10.pair.a, extra.a), direct_sum(d10.pair.b, extra.b)};
    const EveryComponentReport r = check_every_component_invariant(stacked, d10.r, d10.theta, d10.l, opts(2));
    EXPECT_FALSE(r.counterexample);
  }
}

TEST(Coupling, KogutSusskindFormApplies) {
  const Catalog cat = builtin_catalog("D10");
  const Rep rho1 = cat.by_label("rho1");
  const MatterCoupling mc = couple_matter_to_gauge(rho1, rho1, cat);
  const ElementaryBlock blk = elementary_b_block(conjugate_rep(rho1), rho1);
  const CouplingVerdict v = check_coupling_implies_global(mc.a, blk.b, mc.theta, blk.r, blk.l, opts(3));
  EXPECT_TRUE(v.identity_in_span);
  EXPECT_TRUE(v.applies);
  ASSERT_TRUE(v.global_report.has_value());
  EXPECT_TRUE(v.global_report->passed());
}

TEST(Coupling, D10FailsPrecondition) {
  const GaugeConstruction d10 = build_d10_example();
  const CouplingVerdict v = check_coupling_implies_global(d10.pair.a, d10.pair.b, d10.theta, d10.r, d10.l, opts(2));
  EXPECT_TRUE(v.identity_in_span);
  EXPECT_FALSE(v.gauge_report.passed());
  EXPECT_FALSE(v.applies);
  EXPECT_FALSE(v.global_report.has_value());
}

TEST(Coupling, IdentityLinkApplies) {
  Rng rng(15);
  const Catalog cat = builtin_catalog("S3");
  const Rep theta = direct_sum_rep({cat.by_label("trivial"), cat.by_label("sign")});
  const MpsTensor a = symmetric_matter(theta, 2, rng);
  const MpsTensor b({Matrix::Identity(2, 2)});
  const Rep one = trivial_rep(cat.group, 1);
  const CouplingVerdict v = check_coupling_implies_global(a, b, theta, one, one, opts(3));
  EXPECT_TRUE(v.applies);
  ASSERT_TRUE(v.global_report.has_value());
  EXPECT_TRUE(v.global_report->passed());
}

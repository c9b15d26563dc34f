#include "gauge_mpv/canonical_form.hpp"
#include "gauge_mpv/mps_tensor.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

using namespace gauge_mpv;

namespace {

MpsTensor random_tensor(Eigen::Index d, Eigen::Index d1, Eigen::Index d2, Rng& rng) {
  std::vector<Matrix> mats;
  for (Eigen::Index i = 0; i < d; ++i) mats.push_back(random_gaussian(d1, d2, rng));
  return MpsTensor(mats);
}

MpsTensor periodic_z2() {
  Matrix a0 = Matrix::Zero(2, 2), a1 = Matrix::Zero(2, 2);
  a0(0, 1) = 1.0;
  a1(1, 0) = 1.0;
  return MpsTensor({a0, a1});
}

// Coefficients computed by enumerating every index string and multiplying matrices directly.
Vector brute_force_coefficients(const MpsTensor& t, int n) {
  const Eigen::Index d = t.phys_dim();
  Eigen::Index total = 1;
  for (int k = 0; k < n; ++k) total *= d;
  Vector out(total);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Matrix prod = Matrix::Identity(t.left_dim(), t.left_dim());
    Eigen::Index rest = idx, stride = total / d;
    for (int k = 0; k < n; ++k) {
      prod = prod * t[rest / stride];
      rest %= stride;
      stride = std::max<Eigen::Index>(stride / d, 1);
    }
    out(idx) = prod.trace();
  }
  return out;
}

// Normal tensor with radius 1: random injective tensor rescaled.
MpsTensor random_normal(Eigen::Index d, Eigen::Index dim, Rng& rng) {
  MpsTensor t = random_tensor(d, dim, dim, rng);
  return t.scaled(1.0 / std::sqrt(spectral_radius(t)));
}

MpsTensor stack(const MpsTensor& a, const MpsTensor& b) { return direct_sum(a, b); }

double max_diff(const MpsTensor& a, const MpsTensor& b) {
  double out = 0.0;
  for (Eigen::Index i = 0; i < a.phys_dim(); ++i) out = std::max(out, (a[i] - b[i]).cwiseAbs().maxCoeff());
  return out;
}

}  // namespace

TEST(ContractMpv, IdentityTensorGivesBondDimension) {
  MpsTensor t({Matrix::Identity(2, 2), Matrix::Zero(2, 2)});
  Vector c = contract_mpv(t, 3);
  ASSERT_EQ(c.size(), 8);
  EXPECT_NEAR(std::abs(c(0) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(c.tail(7).norm(), 0.0, 1e-15);
}

TEST(ContractMpv, MatchesBruteForce) {
  Rng rng(3);
  MpsTensor t = random_tensor(3, 3, 3, rng);
  for (int n = 1; n <= 4; ++n) EXPECT_LT((contract_mpv(t, n) - brute_force_coefficients(t, n)).norm(), 1e-10 * contract_mpv(t, n).norm());
}

TEST(ContractMpv, SizeLimitRaised) {
  MpsTensor t({Matrix::Identity(1, 1), Matrix::Identity(1, 1)});
  EXPECT_ERROR_KIND(contract_mpv(t, 30), ErrorKind::SizeLimit);
}

TEST(ContractMpv, PairChainIsAlternatingSites) {
  Rng rng(5);
  TensorPair p{random_tensor(2, 2, 3, rng), random_tensor(3, 3, 2, rng)};
  EXPECT_LT((contract_pair(p, 2) - contract_mpv(product_tensor(p.a, p.b), 2)).norm(), 1e-12);
  EXPECT_ERROR_KIND((TensorPair{p.a, p.a}.validate()), ErrorKind::DimMismatch);
}

TEST(Block, OneIsIdentity) {
  Rng rng(7);
  MpsTensor t = random_tensor(2, 3, 3, rng);
  EXPECT_EQ(max_diff(block(t, 1), t), 0.0);
}

TEST(Block, RegroupsIndices) {
  Rng rng(11);
  for (Eigen::Index d : {2, 3}) {
    MpsTensor t = random_tensor(d, 2, 2, rng);
    for (int b = 1; b <= 3; ++b)
      for (int n = 1; b * n <= (d == 2 ? 9 : 6); ++n) {
        Vector lhs = contract_mpv(block(t, b), n), rhs = contract_mpv(t, b * n);
        EXPECT_LT((lhs - rhs).norm(), 1e-12 * rhs.norm()) << "d=" << d << " b=" << b << " n=" << n;
      }
  }
}

TEST(Block, RemovesPeriodicity) {
  MpsTensor t = periodic_z2();
  // Transfer spectrum of the periodic tensor: eigenvalues +1 and -1.
  auto before = transfer_spectrum(t);
  EXPECT_NEAR(std::abs(before[0]), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(before[1]), 1.0, 1e-12);
  EXPECT_EQ(peripheral_count(t), 2);
  EXPECT_EQ(peripheral_count(block(t, 2)), 1 + 1);  // block is a direct sum of two primitive pieces
  CanonicalFormResult cf = canonical_form(t);
  EXPECT_EQ(cf.blocking_factor, 2);
  for (const auto& b : cf.blocks) EXPECT_EQ(peripheral_count(b.tensor), 1);
}

TEST(Transfer, UnitaryKraus) {
  Rng rng(13);
  Matrix u = random_unitary(3, rng), x = random_gaussian(3, 3, rng);
  EXPECT_LT((apply_transfer(MpsTensor({u}), x) - u * x * u.adjoint()).norm(), 1e-12);
}

TEST(Transfer, KrausMixingInvariance) {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    MpsTensor t = random_tensor(3, 4, 4, rng);
    Matrix u = random_unitary(3, rng), x = random_gaussian(4, 4, rng);
    EXPECT_LT((apply_transfer(t, x) - apply_transfer(t.physical_action(u), x)).norm(), 1e-12 * apply_transfer(t, x).norm());
  }
}

TEST(Transfer, MatrixMatchesMap) {
  Rng rng(19);
  MpsTensor t = random_tensor(2, 3, 3, rng);
  Matrix x = random_gaussian(3, 3, rng);
  Vector lhs = transfer_matrix(t) * vec_rows(x);
  EXPECT_LT((lhs - vec_rows(apply_transfer(t, x))).norm(), 1e-12);
  Matrix y = random_gaussian(3, 3, rng);
  // <y, E(x)> = <E*(y), x>
  EXPECT_NEAR(std::abs((y.adjoint() * apply_transfer(t, x)).trace() - (apply_dual_transfer(t, y).adjoint() * x).trace()), 0.0, 1e-12);
}

TEST(SpectralRadius, ChannelIsOne) {
  Rng rng(23);
  // Kraus operators from the columns of an isometry form a trace-preserving channel.
  Matrix v = random_unitary(6, rng).leftCols(2);
  std::vector<Matrix> kraus;
  for (int i = 0; i < 3; ++i) kraus.push_back(v.middleRows(2 * i, 2));
  EXPECT_NEAR(spectral_radius(MpsTensor(kraus)), 1.0, 1e-12);
}

TEST(SpectralRadius, Homogeneous) {
  Rng rng(29);
  MpsTensor t = random_tensor(2, 3, 3, rng);
  const cplx c(0.6, -1.3);
  EXPECT_NEAR(spectral_radius(t.scaled(c)), std::norm(c) * spectral_radius(t), 1e-10 * spectral_radius(t));
}

TEST(SpectralRadius, ProductOrderInvariant) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    TensorPair p{random_tensor(2, 2, 3, rng), random_tensor(2, 3, 2, rng)};
    const double ab = spectral_radius(product_tensor(p.a, p.b));
    const double ba = spectral_radius(product_tensor(p.b, p.a));
    EXPECT_NEAR(ab, ba, 1e-10 * ab);
  }
}

TEST(Injective, PauliBasis) {
  Matrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, cplx(0, -1), cplx(0, 1), 0;
  z << 1, 0, 0, -1;
  EXPECT_TRUE(is_injective(MpsTensor({Matrix::Identity(2, 2), x, y, z})));
  EXPECT_FALSE(is_injective(MpsTensor({Matrix::Identity(2, 2)})));
}

TEST(Normal, InjectiveIsNormalAtLengthOne) {
  Rng rng(37);
  MpsTensor t = random_tensor(4, 2, 2, rng);
  auto r = is_normal(t);
  EXPECT_TRUE(r.normal());
  ASSERT_TRUE(r.length.has_value());
  EXPECT_EQ(*r.length, 1);
}

TEST(Normal, BlockingLengthGreaterThanOne) {
  Rng rng(41);
  // Two Kraus operators on D=3 span at most 2 < 9 matrices; injectivity needs longer words.
  MpsTensor t = random_tensor(2, 3, 3, rng);
  auto r = is_normal(t);
  EXPECT_TRUE(r.normal());
  ASSERT_TRUE(r.length.has_value());
  EXPECT_GT(*r.length, 1);
  EXPECT_TRUE(is_injective(block(t, *r.length)));
  EXPECT_FALSE(is_injective(block(t, *r.length - 1)));
}

TEST(Normal, DirectSumAndPeriodicAreNot) {
  Rng rng(43);
  auto r = is_normal(stack(random_tensor(3, 2, 2, rng), random_tensor(3, 2, 2, rng)));
  EXPECT_FALSE(r.normal());
  EXPECT_FALSE(r.length.has_value());
  auto p = is_normal(periodic_z2());
  EXPECT_FALSE(p.normal());
  EXPECT_FALSE(p.length.has_value());
}

TEST(Normal, RespectsNormalizeFlag) {
  Rng rng(47);
  MpsTensor t = random_normal(3, 2, rng).scaled(2.0);
  EXPECT_TRUE(is_normal(t, true).normal());
  EXPECT_FALSE(is_normal(t, false).normal());
}

TEST(Normal, PhysicalBasisChangePreservesVerdict) {
  Rng rng(53);
  for (const MpsTensor& t : {random_tensor(3, 2, 2, rng), stack(random_tensor(2, 2, 2, rng), random_tensor(2, 1, 1, rng)), periodic_z2()}) {
    Matrix u = random_unitary(t.phys_dim(), rng);
    EXPECT_EQ(is_normal(t).verdict, is_normal(t.physical_action(u)).verdict);
  }
}

TEST(CanonicalForm, NormalTensorSingleBlock) {
  Rng rng(59);
  MpsTensor t = random_tensor(3, 3, 3, rng);
  auto cf = canonical_form(t);
  EXPECT_EQ(cf.blocking_factor, 1);
  ASSERT_EQ(cf.blocks.size(), 1u);
  ASSERT_EQ(cf.blocks[0].copies.size(), 1u);
  EXPECT_LT(cf.reassembly_error, 1e-8);
  EXPECT_EQ(cf.checked_lengths.size(), 6u);
}

// Every block: radius 1, a single peripheral eigenvalue, trace preserving, positive diagonal fixed point.
void expect_cfii(const CanonicalFormResult& cf) {
  for (const auto& b : cf.blocks) {
    const Eigen::Index dim = b.tensor.left_dim();
    EXPECT_TRUE(is_normal(b.tensor, false).normal());
    EXPECT_NEAR(spectral_radius(b.tensor), 1.0, 1e-9);
    EXPECT_EQ(peripheral_count(b.tensor), 1);
    EXPECT_LT((apply_dual_transfer(b.tensor, Matrix::Identity(dim, dim)) - Matrix::Identity(dim, dim)).norm(), 1e-9);
    Matrix lambda = b.fixed_point;
    EXPECT_LT((lambda - Matrix(lambda.diagonal().asDiagonal())).norm(), 1e-12);
    for (Eigen::Index k = 0; k < dim; ++k) {
      EXPECT_GT(lambda(k, k).real(), 0.0);
      EXPECT_NEAR(lambda(k, k).imag(), 0.0, 1e-12);
    }
    EXPECT_NEAR(std::abs(lambda.trace() - 1.0), 0.0, 1e-10);
    EXPECT_LT((apply_transfer(b.tensor, lambda) - lambda).norm(), 1e-9);
  }
}

TEST(CanonicalForm, TwoDistinctBlocks) {
  Rng rng(61);
  MpsTensor t = stack(random_tensor(2, 2, 2, rng), random_tensor(2, 3, 3, rng));
  auto cf = canonical_form(t);
  EXPECT_EQ(cf.blocking_factor, 1);
  ASSERT_EQ(cf.blocks.size(), 2u);
  for (const auto& b : cf.blocks) EXPECT_EQ(b.copies.size(), 1u);
  EXPECT_LT(cf.reassembly_error, 1e-8);
  expect_cfii(cf);
}

TEST(CanonicalForm, HiddenBlockStructure) {
  Rng rng(67);
  MpsTensor inner = stack(random_tensor(2, 2, 2, rng), random_tensor(2, 2, 2, rng));
  Matrix s = random_gaussian(4, 4, rng);
  MpsTensor t = inner.sandwiched(s, s.inverse());
  auto cf = canonical_form(t);
  EXPECT_EQ(cf.blocks.size(), 2u);
  EXPECT_LT(cf.reassembly_error, 1e-8);
  expect_cfii(cf);
}

TEST(CanonicalForm, RecoversCopiesWithWeightAndSimilarity) {
  Rng rng(71);
  MpsTensor a = random_normal(3, 2, rng);
  Matrix v = random_gaussian(2, 2, rng);
  const cplx mu(0.4, 0.3);
  MpsTensor t = stack(a.sandwiched(v.inverse(), v).scaled(mu), a);
  auto cf = canonical_form(t);
  ASSERT_EQ(cf.blocks.size(), 1u);
  const auto& block0 = cf.blocks[0];
  ASSERT_EQ(block0.copies.size(), 2u);
  std::vector<double> moduli = {std::abs(block0.copies[0].weight), std::abs(block0.copies[1].weight)};
  std::sort(moduli.begin(), moduli.end());
  EXPECT_NEAR(moduli[0], std::abs(mu), 1e-9);
  EXPECT_NEAR(moduli[1], 1.0, 1e-9);
  // Weight ratio between the two copies reproduces mu exactly, phase included.
  const auto& small = std::abs(block0.copies[0].weight) < std::abs(block0.copies[1].weight) ? block0.copies[0] : block0.copies[1];
  const auto& large = &small == &block0.copies[0] ? block0.copies[1] : block0.copies[0];
  EXPECT_NEAR(std::abs(small.weight / large.weight - mu), 0.0, 1e-9);
  // Each copy's similarity maps the block tensor back onto the corresponding input block.
  MpsTensor rebuilt_small = block0.tensor.sandwiched(small.similarity.inverse(), small.similarity).scaled(small.weight);
  MpsTensor rebuilt_large = block0.tensor.sandwiched(large.similarity.inverse(), large.similarity).scaled(large.weight);
  EXPECT_LT(max_diff(rebuilt_large, a), 1e-8);
  EXPECT_LT(max_diff(rebuilt_small, a.sandwiched(v.inverse(), v).scaled(mu)), 1e-8);
  EXPECT_LT(cf.reassembly_error, 1e-8);
  expect_cfii(cf);
}

TEST(CanonicalForm, ReassemblyMatchesBlockedInput) {
  Rng rng(73);
  MpsTensor t = stack(periodic_z2(), random_tensor(2, 2, 2, rng).scaled(0.5));
  auto cf = canonical_form(t);
  EXPECT_EQ(cf.blocking_factor, 2);
  MpsTensor re = cf.reassemble();
  for (int n = 1; n <= 4; ++n) {
    Vector expected = contract_mpv(t, 2 * n);
    EXPECT_LT((contract_mpv(re, n) - expected).norm(), 1e-8 * expected.norm());
  }
  expect_cfii(cf);
}

TEST(CanonicalForm, SeedReproducible) {
  Rng rng(79);
  MpsTensor t = stack(random_tensor(2, 2, 2, rng), random_tensor(2, 2, 2, rng));
  auto c1 = canonical_form(t, {5, 6});
  auto c2 = canonical_form(t, {5, 6});
  ASSERT_EQ(c1.blocks.size(), c2.blocks.size());
  for (size_t k = 0; k < c1.blocks.size(); ++k) EXPECT_EQ(max_diff(c1.blocks[k].tensor, c2.blocks[k].tensor), 0.0);
}

TEST(InvariantSubspace, FindsUpperTriangularSubspace) {
  Rng rng(83);
  std::vector<Matrix> gens;
  for (int k = 0; k < 2; ++k) {
    Matrix m = random_gaussian(3, 3, rng);
    m.bottomLeftCorner(2, 1).setZero();  // e_0 invariant
    gens.push_back(m);
  }
  auto sub = minimal_invariant_subspace(gens, rng);
  ASSERT_TRUE(sub.has_value());
  ASSERT_EQ(sub->cols(), 1);
  for (const auto& g : gens) {
    Matrix image = g * *sub;
    EXPECT_LT((image - *sub * (sub->adjoint() * image)).norm(), 1e-10);
  }
  std::vector<Matrix> full = {random_gaussian(3, 3, rng), random_gaussian(3, 3, rng)};
  EXPECT_FALSE(minimal_invariant_subspace(full, rng).has_value());
}

TEST(AlgebraBasis, RoundoffProductsAreDropped) {
  // Matrix units scaled so that some products vanish only up to roundoff.
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<Matrix> gens;
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n) {
      Matrix g = Matrix::Zero(4, 4);
      g(m, n) = s;
      g(2 + m, 2 + n) = cplx(0.0, 0.3 * s);
      gens.push_back(g);
      Matrix h = Matrix::Zero(4, 4);
      h(m, n) = 0.7 * s;
      h(2 + m, 2 + n) = -0.1;
      gens.push_back(h);
    }
  EXPECT_EQ(algebra_basis(gens).cols(), 8);
}

TEST(GaugeBetween, IdentityRelation) {
  Rng rng(89);
  MpsTensor t = random_normal(2, 3, rng);
  auto g = find_gauge_between(t, t);
  ASSERT_EQ(g.permutation.size(), 1u);
  EXPECT_EQ(g.permutation[0], 0);
  EXPECT_LT(projective_distance(g.x[0], Matrix::Identity(3, 3)), 1e-8);
  EXPECT_NEAR(std::abs(g.phases[0] - 1.0), 0.0, 1e-9);
}

TEST(GaugeBetween, RecoversUnitary) {
  Rng rng(97);
  MpsTensor t = random_normal(3, 3, rng);
  Matrix u = random_unitary(3, rng);
  MpsTensor t2 = t.sandwiched(u.adjoint(), u);
  auto g = find_gauge_between(t, t2);
  EXPECT_LT(projective_distance(g.x[0], u.adjoint()), 1e-8);
  EXPECT_TRUE(is_unitary(g.x[0] / (g.x[0].norm() / std::sqrt(3.0)), 1e-8));
  EXPECT_LT(max_diff(g.apply(t), t2), 1e-9);
}

TEST(GaugeBetween, BlockSwapIsTransposition) {
  Rng rng(101);
  MpsTensor a = random_normal(2, 2, rng), b = random_normal(2, 3, rng).scaled(0.7);
  MpsTensor t1 = stack(a, b), t2 = stack(b, a);
  auto g = find_gauge_between(t1, t2);
  ASSERT_EQ(g.permutation.size(), 2u);
  EXPECT_EQ(g.permutation[0], 1);
  EXPECT_EQ(g.permutation[1], 0);
  EXPECT_LT(max_diff(g.apply(t1), t2), 1e-9);
}

TEST(GaugeBetween, PhaseOnOneBlock) {
  Rng rng(103);
  MpsTensor a = random_normal(2, 2, rng), b = random_normal(2, 2, rng);
  const cplx w = std::polar(1.0, 2.0 * M_PI / 3.0);
  // A phase that is a root of unity of order 3 changes the MPV at N=1, so compare against the same phase.
  MpsTensor t1 = stack(a, b.scaled(w)), t2 = stack(a, b.scaled(w));
  auto g = find_gauge_between(t1, t2);
  EXPECT_NEAR(std::abs(g.phases[1] - 1.0), 0.0, 1e-9);
}

TEST(GaugeBetween, Errors) {
  Rng rng(107);
  MpsTensor a = random_normal(2, 2, rng), b = random_normal(2, 2, rng);
  EXPECT_ERROR_KIND(find_gauge_between(a, b), ErrorKind::NotEquivalent);
  EXPECT_ERROR_KIND(find_gauge_between(a, random_normal(3, 2, rng)), ErrorKind::NotEquivalent);
}

TEST(PairDecompose, StackOfTwoPairs) {
  Rng rng(109);
  TensorPair p1{random_tensor(2, 2, 3, rng), random_tensor(2, 3, 2, rng)};
  TensorPair p2{random_tensor(2, 1, 2, rng), random_tensor(2, 2, 1, rng)};
  TensorPair p{direct_sum(p1.a, p2.a), direct_sum(p1.b, p2.b)};
  auto dec = pair_decompose(p);
  EXPECT_EQ(dec.blocking_factor, 1);
  ASSERT_EQ(dec.components.size(), 2u);
  EXPECT_LT(dec.reassembly_error, 1e-8);
  for (const auto& c : dec.components) {
    EXPECT_NEAR(spectral_radius(product_tensor(c.pair.a, c.pair.b)), 1.0, 1e-9);
    EXPECT_NEAR(spectral_radius(product_tensor(c.pair.b, c.pair.a)), 1.0, 1e-9);
    EXPECT_TRUE(is_normal(product_tensor(c.pair.a, c.pair.b), false).normal());
    EXPECT_TRUE(is_normal(product_tensor(c.pair.b, c.pair.a), false).normal());
  }
}

TEST(PairDecompose, ReducibleOnlyOnOneSide) {
  Rng rng(113);
  // A maps D2=2 into D1=1 and B back; AB is 1x1 (irreducible) while BA has rank one per word.
  TensorPair p{random_tensor(2, 1, 2, rng), random_tensor(2, 2, 1, rng)};
  auto dec = pair_decompose(p);
  ASSERT_EQ(dec.components.size(), 1u);
  EXPECT_LT(dec.reassembly_error, 1e-8);
}

TEST(PairDecompose, PeriodicPairIsBlocked) {
  // AB is the Z2-periodic tensor; B is trivial.
  MpsTensor a = periodic_z2();
  TensorPair p{a, MpsTensor({Matrix::Identity(2, 2)})};
  auto dec = pair_decompose(p);
  EXPECT_EQ(dec.blocking_factor, 2);
  EXPECT_EQ(dec.left_words + dec.right_words + 1, 2);
  EXPECT_FALSE(dec.components.empty());
  EXPECT_LT(dec.reassembly_error, 1e-8);
}

TEST(PairDecompose, BlockPairThreeSites) {
  Rng rng(127);
  TensorPair p{random_tensor(2, 2, 2, rng), random_tensor(2, 2, 2, rng)};
  TensorPair q = block_pair(p, 1, 1);
  EXPECT_EQ(q.a.phys_dim(), 8);
  // A~^{(i,j,k)} = A^i B^j A^k
  EXPECT_LT((q.a[5] - p.a[1] * p.b[0] * p.a[1]).norm(), 1e-14);
  EXPECT_LT((contract_pair(q, 1) - contract_pair(p, 3)).norm(), 1e-12 * contract_pair(p, 3).norm());
}

#include "gauge_mpv/errors.hpp"
#include "gauge_mpv/symmetry.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace gauge_mpv {

namespace {

struct LeadingPair {
  cplx value;
  Matrix vector;
};

// Leading eigenpair of Z -> sum_i t1^i Z t2^i^dagger; ExtractionDegenerate unless it sits at
// modulus `radius` and is separated from the rest of the spectrum.
LeadingPair leading_mixed(const MpsTensor& t1, const MpsTensor& t2, double radius) {
  Eigen::ComplexEigenSolver<Matrix> es(mixed_transfer_matrix(t1, t2));
  const auto& values = es.eigenvalues();
  Eigen::Index lead = 0;
  for (Eigen::Index k = 1; k < values.size(); ++k)
    if (std::abs(values(k)) > std::abs(values(lead))) lead = k;
  double second = 0.0;
  for (Eigen::Index k = 0; k < values.size(); ++k)
    if (k != lead) second = std::max(second, std::abs(values(k)));
  const double top = std::abs(values(lead));
  if (std::abs(top - radius) > 1e-6 * radius || second > (1.0 - 1e-6) * top)
    throw Error(ErrorKind::ExtractionDegenerate,
                "mixed transfer map has no isolated eigenvalue of modulus " + std::to_string(radius) +
                    " (leading " + std::to_string(top) + ", next " + std::to_string(second) + ")");
  return {values(lead), unvec_rows(es.eigenvectors().col(lead), t1.left_dim(), t2.left_dim())};
}

// Least-squares c with target ~ c * basis.
cplx fit_scale(const std::vector<Matrix>& basis, const std::vector<Matrix>& target) {
  cplx num = 0.0;
  double den = 0.0;
  for (size_t i = 0; i < basis.size(); ++i) {
    num += (basis[i].adjoint() * target[i]).trace();
    den += basis[i].squaredNorm();
  }
  if (den == 0.0) throw Error(ErrorKind::ExtractionDegenerate, "B vanishes");
  return num / den;
}

std::optional<Multiplier> multiplier_of(const Rep& like, const std::vector<Matrix>& mats) {
  if (!like.group().is_finite()) return std::nullopt;
  try {
    return check_projective_rep(mats, like.group().finite(), 1e-8);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

VirtualRep extract_virtual_rep(const TensorPair& pair, const Rep& r, const Rep& theta, const Rep& l,
                               const CheckOptions& options) {
  pair.validate();
  const MpsTensor ab = product_tensor(pair.a, pair.b);
  const MpsTensor ba = product_tensor(pair.b, pair.a);
  if (!is_normal(ab).normal() || !is_normal(ba).normal())
    throw Error(ErrorKind::NotNormal, "AB and BA must both be normal");
  const double radius = spectral_radius(ab);
  const Matrix rho_inv = leading_fixed_points(ab).right.inverse();
  const Matrix sigma_inv = leading_fixed_points(ba).right.inverse();

  VirtualRep out;
  out.elements = test_elements(r.group(), options.samples, options.seed);
  for (const auto& g : out.elements) {
    const MpsTensor a2 = pair.a.physical_action(theta.at(g));
    const MpsTensor rb = pair.b.physical_action(r.at(g));
    const MpsTensor b2 = rb.physical_action(l.at(g));

    // A'B' = X^{-1} (AB) X, so the mixed fixed point is X^{-1} rho.
    const Matrix x0 = (leading_mixed(product_tensor(a2, b2), ab, radius).vector * rho_inv).inverse();
    std::vector<Matrix> bx, rbm;
    for (Eigen::Index i = 0; i < pair.b.phys_dim(); ++i) {
      bx.push_back(pair.b[i] * x0);
      rbm.push_back(rb[i]);
    }
    out.x.push_back(fit_scale(bx, rbm) * x0);

    // B'A' = Y^{-1} (BA) Y.
    const Matrix y0_inv = leading_mixed(product_tensor(b2, a2), ba, radius).vector * sigma_inv;
    const MpsTensor lb = pair.b.physical_action(l.at(g));
    std::vector<Matrix> yb, lbm;
    for (Eigen::Index i = 0; i < pair.b.phys_dim(); ++i) {
      yb.push_back(y0_inv * pair.b[i]);
      lbm.push_back(lb[i]);
    }
    out.y.push_back((fit_scale(yb, lbm) * y0_inv).inverse());
  }
  out.multiplier_x = multiplier_of(r, out.x);
  out.multiplier_y = multiplier_of(r, out.y);
  out.relation_a_residual = verify_relation_A(pair.a, theta, out.elements, out.x, out.y).max_residual;
  out.relation_b_residual = verify_relation_B(pair.b, r, l, out.elements, out.x, out.y).max_residual;
  return out;
}

VirtualRep extract_global_virtual_rep(const MpsTensor& a, const Rep& theta, const CheckOptions& options) {
  if (!a.is_square()) throw Error(ErrorKind::DimMismatch, "tensor must be square");
  if (!is_normal(a).normal()) throw Error(ErrorKind::NotNormal, "tensor must be normal");
  const double radius = spectral_radius(a);
  const Matrix rho_inv = leading_fixed_points(a).right.inverse();
  const Eigen::Index dim = a.left_dim();

  VirtualRep out;
  out.elements = test_elements(theta.group(), options.samples, options.seed);
  for (const auto& g : out.elements) {
    // Theta.A = e^{i phi} X^{-1} A X gives the fixed point X^{-1} rho with eigenvalue e^{i phi} radius.
    const LeadingPair lead = leading_mixed(a.physical_action(theta.at(g)), a, radius);
    Matrix x = (lead.vector * rho_inv).inverse();
    x /= std::pow(x.determinant(), 1.0 / static_cast<double>(dim));
    Matrix best = x;
    for (Eigen::Index k = 1; k < dim; ++k) {
      const Matrix cand = std::polar(1.0, 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(dim)) * x;
      if (cand.trace().real() > best.trace().real() + 1e-12) best = cand;
    }
    const cplx phase = lead.value / radius;
    out.phases.push_back(phase / std::abs(phase));
    out.x.push_back(best);
    out.y.push_back(out.phases.back() * best);
  }
  out.multiplier_x = multiplier_of(theta, out.x);
  out.multiplier_y = out.multiplier_x;
  out.relation_a_residual = verify_relation_A(a, theta, out.elements, out.x, out.y).max_residual;
  return out;
}

}  // namespace gauge_mpv

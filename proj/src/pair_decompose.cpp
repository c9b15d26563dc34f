#include "gauge_mpv/canonical_form.hpp"
#include "gauge_mpv/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gauge_mpv {

namespace {

std::vector<Matrix> products(const MpsTensor& x, const MpsTensor& y) { return product_tensor(x, y).matrices(); }

std::vector<TensorPair> split_pair(const TensorPair& p, Rng& rng) {
  std::vector<TensorPair> out;
  std::vector<TensorPair> stack = {p};
  while (!stack.empty()) {
    TensorPair cur = stack.back();
    stack.pop_back();
    if (auto sub = minimal_invariant_subspace(products(cur.a, cur.b), rng)) {
      const Matrix comp = orthogonal_complement(*sub);
      stack.push_back({cur.a.sandwiched(comp.adjoint(), Matrix::Identity(cur.a.right_dim(), cur.a.right_dim())),
                       cur.b.sandwiched(Matrix::Identity(cur.b.left_dim(), cur.b.left_dim()), comp)});
      stack.push_back({cur.a.sandwiched(sub->adjoint(), Matrix::Identity(cur.a.right_dim(), cur.a.right_dim())),
                       cur.b.sandwiched(Matrix::Identity(cur.b.left_dim(), cur.b.left_dim()), *sub)});
      continue;
    }
    if (auto sub = minimal_invariant_subspace(products(cur.b, cur.a), rng)) {
      const Matrix comp = orthogonal_complement(*sub);
      stack.push_back({cur.a.sandwiched(Matrix::Identity(cur.a.left_dim(), cur.a.left_dim()), comp),
                       cur.b.sandwiched(comp.adjoint(), Matrix::Identity(cur.b.right_dim(), cur.b.right_dim()))});
      stack.push_back({cur.a.sandwiched(Matrix::Identity(cur.a.left_dim(), cur.a.left_dim()), *sub),
                       cur.b.sandwiched(sub->adjoint(), Matrix::Identity(cur.b.right_dim(), cur.b.right_dim()))});
      continue;
    }
    out.push_back(cur);
  }
  return out;
}

std::vector<TensorPair> drop_zero(std::vector<TensorPair> comps) {
  std::vector<double> radii;
  double top = 0.0;
  for (const auto& c : comps) {
    radii.push_back(spectral_radius(product_tensor(c.a, c.b)));
    top = std::max(top, radii.back());
  }
  std::vector<TensorPair> out;
  for (size_t k = 0; k < comps.size(); ++k)
    if (radii[k] > 0.0 && radii[k] > 1e-20 * top) out.push_back(std::move(comps[k]));
  return out;
}

}  // namespace

TensorPair block_pair(const TensorPair& p, int left_words, int right_words) {
  p.validate();
  MpsTensor a = p.a, b = p.b;
  for (int k = 0; k < left_words; ++k) a = product_tensor(product_tensor(a, p.b), p.a);
  for (int k = 0; k < right_words; ++k) b = product_tensor(product_tensor(b, p.a), p.b);
  return {a, b};
}

PairDecomposition pair_decompose(const TensorPair& p, std::uint64_t seed, int check_length) {
  p.validate();
  Rng rng(seed);
  PairDecomposition out;
  double scale = std::max(p.a.norm(), p.b.norm());
  if (scale == 0.0) return out;
  const TensorPair unit{p.a.scaled(1.0 / p.a.norm()), p.b.scaled(1.0 / p.b.norm())};
  const double unit_scale = p.a.norm() * p.b.norm();

  std::vector<TensorPair> comps = drop_zero(split_pair(unit, rng));
  std::uint64_t b = 1;
  for (const auto& c : comps)
    b = lcm(b, static_cast<std::uint64_t>(std::max(1, peripheral_count(product_tensor(c.a, c.b)))));
  out.blocking_factor = static_cast<int>(b);
  out.left_words = static_cast<int>((b - 1) / 2);
  out.right_words = static_cast<int>(b - 1) - out.left_words;
  if (b > 1) {
    std::vector<TensorPair> blocked;
    for (const auto& c : comps)
      for (auto& piece : split_pair(block_pair(c, out.left_words, out.right_words), rng))
        blocked.push_back(std::move(piece));
    comps = drop_zero(std::move(blocked));
  }

  const double pair_unit = std::pow(unit_scale, static_cast<double>(b));
  for (const auto& c : comps) {
    const double radius = spectral_radius(product_tensor(c.a, c.b));
    const double mu = std::sqrt(radius);
    TensorPair normalized{c.a.scaled(1.0 / mu), c.b};
    if (!is_normal(product_tensor(normalized.a, normalized.b), false).normal() ||
        !is_normal(product_tensor(normalized.b, normalized.a), false).normal())
      throw Error(ErrorKind::NumericalDegeneracy, "pair component is not normal after reduction");
    out.components.push_back({normalized, mu * pair_unit});
  }

  if (!out.components.empty()) {
    const TensorPair blocked = block_pair(p, out.left_words, out.right_words);
    const double site = static_cast<double>(blocked.a.phys_dim() * blocked.b.phys_dim());
    const double budget = std::min<double>(static_cast<double>(size_limit()), 1 << 20);
    for (int n = 1; n <= check_length && std::pow(site, n) <= budget; ++n) {
      const Vector expected = contract_pair(blocked, n);
      Vector got = Vector::Zero(expected.size());
      for (const auto& c : out.components) got += std::pow(c.weight, n) * contract_pair(c.pair, n);
      const double floor = 1e-10 * std::pow(scale * scale, n * out.blocking_factor);
      out.reassembly_error = std::max(out.reassembly_error, (expected - got).norm() / std::max(expected.norm(), floor));
      out.checked_lengths.push_back(n);
    }
  }
  return out;
}

}  // namespace gauge_mpv

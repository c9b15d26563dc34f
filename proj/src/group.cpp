#include "gauge_mpv/group.hpp"

#include "gauge_mpv/errors.hpp"

#include <cmath>
#include <set>

namespace gauge_mpv {

FiniteGroup FiniteGroup::validate(Table table, std::vector<std::string> element_names) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw Error(ErrorKind::SchemaError, "empty multiplication table");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw Error(ErrorKind::SchemaError, "table is not square");
    for (int v : row)
      if (v < 0 || v >= n) throw Error(ErrorKind::SchemaError, "table entry out of range");
  }

  int identity = -1;
  for (int e = 0; e < n && identity < 0; ++e) {
    bool ok = true;
    for (int g = 0; g < n && ok; ++g) ok = table[e][g] == g && table[g][e] == g;
    if (ok) identity = e;
  }
  if (identity < 0) throw Error(ErrorKind::NoIdentity, "no element acts as identity on both sides");

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw Error(ErrorKind::NonAssociative, "triple (" + std::to_string(a) + ", " + std::to_string(b) +
                                                     ", " + std::to_string(c) + ")");

  std::vector<int> inverse(n, -1);
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h)
      if (table[g][h] == identity && table[h][g] == identity) {
        inverse[g] = h;
        break;
      }
    if (inverse[g] < 0) throw Error(ErrorKind::MissingInverse, "element " + std::to_string(g));
  }

  if (!element_names.empty() && static_cast<int>(element_names.size()) != n)
    throw Error(ErrorKind::SchemaError, "element_names length differs from order");

  FiniteGroup out;
  out.table_ = std::move(table);
  out.inverse_ = std::move(inverse);
  out.identity_ = identity;
  out.names_ = std::move(element_names);

  std::set<int> reached = {identity};
  for (int g = 0; g < n && static_cast<int>(reached.size()) < n; ++g) {
    if (reached.count(g)) continue;
    out.generators_.push_back(g);
    std::vector<int> frontier(reached.begin(), reached.end());
    while (!frontier.empty()) {
      std::vector<int> next;
      for (int x : frontier)
        for (int s : out.generators_) {
          const int y = out.table_[x][s];
          if (reached.insert(y).second) next.push_back(y);
        }
      frontier = std::move(next);
    }
  }
  return out;
}

std::string FiniteGroup::element_name(int g) const {
  if (!names_.empty()) return names_[g];
  return std::to_string(g);
}

Multiplier Multiplier::trivial(int order) { return {Matrix::Ones(order, order)}; }

bool Multiplier::is_trivial(double tol) const {
  return (values - Matrix::Ones(values.rows(), values.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool Multiplier::approx_equal(const Multiplier& other, double tol) const {
  if (values.rows() != other.values.rows()) return false;
  if (values.size() == 0) return true;
  return (values - other.values).cwiseAbs().maxCoeff() <= tol;
}

Multiplier Multiplier::inverse() const { return {values.conjugate()}; }

Multiplier Multiplier::times(const Multiplier& other) const {
  return {values.cwiseProduct(other.values)};
}

namespace {

struct Quaternion {
  double a;
  std::array<double, 3> b;
};

Quaternion to_quaternion(const Su2Params& phi) {
  const double norm = std::sqrt(phi[0] * phi[0] + phi[1] * phi[1] + phi[2] * phi[2]);
  Quaternion q{std::cos(norm / 2.0), {0.0, 0.0, 0.0}};
  if (norm > 0.0)
    for (int k = 0; k < 3; ++k) q.b[k] = std::sin(norm / 2.0) * phi[k] / norm;
  return q;
}

Su2Params from_quaternion(const Quaternion& q) {
  const double bn = std::sqrt(q.b[0] * q.b[0] + q.b[1] * q.b[1] + q.b[2] * q.b[2]);
  Su2Params phi{0.0, 0.0, 0.0};
  if (bn > 0.0) {
    const double angle = 2.0 * std::atan2(bn, q.a);
    for (int k = 0; k < 3; ++k) phi[k] = angle * q.b[k] / bn;
  }
  return phi;
}

}  // namespace

// (a1 + i b1.sigma)(a2 + i b2.sigma) = (a1 a2 - b1.b2) + i (a1 b2 + a2 b1 - b1 x b2).sigma
Su2Params su2_compose(const Su2Params& g, const Su2Params& h) {
  const Quaternion p = to_quaternion(g);
  const Quaternion q = to_quaternion(h);
  Quaternion r{p.a * q.a - (p.b[0] * q.b[0] + p.b[1] * q.b[1] + p.b[2] * q.b[2]), {}};
  const std::array<double, 3> cross = {p.b[1] * q.b[2] - p.b[2] * q.b[1], p.b[2] * q.b[0] - p.b[0] * q.b[2],
                                       p.b[0] * q.b[1] - p.b[1] * q.b[0]};
  for (int k = 0; k < 3; ++k) r.b[k] = p.a * q.b[k] + q.a * p.b[k] - cross[k];
  return from_quaternion(r);
}

Su2Params su2_inverse(const Su2Params& g) { return {-g[0], -g[1], -g[2]}; }

Su2Params su2_sample(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Quaternion q{0.0, {}};
  double norm = 0.0;
  while (norm < 1e-6) {
    q.a = normal(rng);
    for (auto& x : q.b) x = normal(rng);
    norm = std::sqrt(q.a * q.a + q.b[0] * q.b[0] + q.b[1] * q.b[1] + q.b[2] * q.b[2]);
  }
  q.a /= norm;
  for (auto& x : q.b) x /= norm;
  return from_quaternion(q);
}

std::shared_ptr<const Group> Group::finite(FiniteGroup g, std::string name) {
  auto out = std::make_shared<Group>();
  out->finite_ = std::make_shared<const FiniteGroup>(std::move(g));
  out->name_ = std::move(name);
  return out;
}

std::shared_ptr<const Group> Group::su2() {
  static const std::shared_ptr<const Group> instance = [] {
    auto g = std::make_shared<Group>();
    g->name_ = "SU2";
    return std::shared_ptr<const Group>(g);
  }();
  return instance;
}

std::vector<GroupElement> test_elements(const Group& group, int samples, std::uint64_t seed) {
  std::vector<GroupElement> out;
  if (group.is_finite()) {
    for (int g = 0; g < group.finite().order(); ++g) out.push_back({g, {}});
    return out;
  }
  Rng rng(seed);
  for (int k = 0; k < samples; ++k) out.push_back({k, su2_sample(rng)});
  return out;
}

}  // namespace gauge_mpv

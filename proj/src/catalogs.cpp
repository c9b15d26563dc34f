#include "gauge_mpv/catalogs.hpp"

#include "gauge_mpv/errors.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <mutex>

namespace gauge_mpv {

namespace {

Matrix scalar(cplx v) { return Matrix::Constant(1, 1, v); }

FiniteGroup cyclic_group(int n) {
  FiniteGroup::Table table(n, std::vector<int>(n));
  std::vector<std::string> names;
  for (int a = 0; a < n; ++a) {
    names.push_back(a == 0 ? "e" : "g" + std::to_string(a));
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  }
  return FiniteGroup::validate(table, names);
}

// s^a r^b at index a*n + b; r^b s^c = s^c r^{(-1)^c b}.
FiniteGroup dihedral_group(int n) {
  const int order = 2 * n;
  FiniteGroup::Table table(order, std::vector<int>(order));
  std::vector<std::string> names;
  for (int x = 0; x < order; ++x) {
    const int a = x / n, b = x % n;
    std::string name = a ? "s" : "";
    if (b == 1) name += "r";
    if (b > 1) name += "r" + std::to_string(b);
    names.push_back(name.empty() ? "e" : name);
    for (int y = 0; y < order; ++y) {
      const int c = y / n, d = y % n;
      const int rb = c ? (n - b) % n : b;
      table[x][y] = ((a + c) % 2) * n + (rb + d) % n;
    }
  }
  return FiniteGroup::validate(table, names);
}

std::vector<Matrix> quaternion_matrices() {
  const cplx i(0.0, 1.0);
  Matrix one = Matrix::Identity(2, 2);
  Matrix qi(2, 2), qj(2, 2), qk(2, 2);
  qi << i, 0, 0, -i;
  qj << 0, 1, -1, 0;
  qk << 0, i, i, 0;
  return {one, -one, qi, -qi, qj, -qj, qk, -qk};
}

int match_matrix(const std::vector<Matrix>& mats, const Matrix& m) {
  for (size_t k = 0; k < mats.size(); ++k)
    if ((mats[k] - m).norm() < 1e-12) return static_cast<int>(k);
  return -1;
}

FiniteGroup quaternion_group() {
  const auto mats = quaternion_matrices();
  FiniteGroup::Table table(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) table[a][b] = match_matrix(mats, mats[a] * mats[b]);
  return FiniteGroup::validate(table, {"1", "-1", "i", "-i", "j", "-j", "k", "-k"});
}

// (a, b) at index 2a + b.
FiniteGroup klein_group() {
  FiniteGroup::Table table(4, std::vector<int>(4));
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) table[x][y] = x ^ y;
  return FiniteGroup::validate(table, {"e", "z", "x", "xz"});
}

std::vector<Matrix> one_dim(const std::vector<cplx>& values) {
  std::vector<Matrix> out;
  for (cplx v : values) out.push_back(scalar(v));
  return out;
}

Catalog cyclic_catalog(const GroupPtr& group, int n) {
  Catalog cat{group, {}};
  for (int k = 0; k < n; ++k) {
    std::vector<cplx> values;
    for (int g = 0; g < n; ++g) values.push_back(std::polar(1.0, 2.0 * M_PI * k * g / n));
    cat.irreps.push_back(Rep::finite(group, one_dim(values), "chi" + std::to_string(k)));
  }
  return cat;
}

Catalog dihedral_catalog(const GroupPtr& group, int n, bool s3_labels) {
  Catalog cat{group, {}};
  const int order = 2 * n;
  auto character = [&](int r_sign, int s_sign) {
    std::vector<cplx> values;
    for (int x = 0; x < order; ++x) {
      const int a = x / n, b = x % n;
      values.push_back(std::pow(static_cast<double>(s_sign), a) * std::pow(static_cast<double>(r_sign), b));
    }
    return one_dim(values);
  };
  cat.irreps.push_back(Rep::finite(group, character(1, 1), s3_labels ? "trivial" : "A1"));
  cat.irreps.push_back(Rep::finite(group, character(1, -1), s3_labels ? "sign" : "A2"));
  if (n % 2 == 0) {
    cat.irreps.push_back(Rep::finite(group, character(-1, 1), "B1"));
    cat.irreps.push_back(Rep::finite(group, character(-1, -1), "B2"));
  }
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  for (int k = 1; 2 * k < n; ++k) {
    const double theta = 2.0 * M_PI * k / n;
    Matrix rot = Matrix::Zero(2, 2);
    rot(0, 0) = std::polar(1.0, theta);
    rot(1, 1) = std::polar(1.0, -theta);
    std::vector<Matrix> mats;
    for (int x = 0; x < order; ++x) {
      const int a = x / n, b = x % n;
      Matrix m = Matrix::Identity(2, 2);
      if (a) m = swap;
      for (int t = 0; t < b; ++t) m = m * rot;
      mats.push_back(m);
    }
    cat.irreps.push_back(Rep::finite(group, mats, s3_labels ? "standard" : "rho" + std::to_string(k)));
  }
  return cat;
}

Catalog quaternion_catalog(const GroupPtr& group) {
  Catalog cat{group, {}};
  cat.irreps.push_back(Rep::finite(group, one_dim({1, 1, 1, 1, 1, 1, 1, 1}), "trivial"));
  cat.irreps.push_back(Rep::finite(group, one_dim({1, 1, 1, 1, -1, -1, -1, -1}), "Ai"));
  cat.irreps.push_back(Rep::finite(group, one_dim({1, 1, -1, -1, 1, 1, -1, -1}), "Aj"));
  cat.irreps.push_back(Rep::finite(group, one_dim({1, 1, -1, -1, -1, -1, 1, 1}), "Ak"));
  cat.irreps.push_back(Rep::finite(group, quaternion_matrices(), "H"));
  return cat;
}

Catalog klein_catalog(const GroupPtr& group) {
  Catalog cat{group, {}};
  cat.irreps.push_back(Rep::finite(group, one_dim({1, 1, 1, 1}), "chi00"));
  cat.irreps.push_back(Rep::finite(group, one_dim({1, -1, 1, -1}), "chi01"));
  cat.irreps.push_back(Rep::finite(group, one_dim({1, 1, -1, -1}), "chi10"));
  cat.irreps.push_back(Rep::finite(group, one_dim({1, -1, -1, 1}), "chi11"));
  return cat;
}

Catalog pauli_catalog(const GroupPtr& group) {
  Matrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  return {group, {Rep::finite(group, {Matrix::Identity(2, 2), z, x, x * z}, "pauli")}};
}

int parse_suffix(const std::string& name, size_t prefix) {
  if (name.size() <= prefix) return -1;
  for (size_t k = prefix; k < name.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(name[k]))) return -1;
  return std::stoi(name.substr(prefix));
}

}  // namespace

GroupPtr builtin_group(const std::string& name) {
  static std::mutex mutex;
  static std::map<std::string, GroupPtr> cache;
  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = cache.find(name); it != cache.end()) return it->second;

  GroupPtr group;
  if (name == "S3") {
    group = Group::finite(dihedral_group(3), name);
  } else if (name == "Q8") {
    group = Group::finite(quaternion_group(), name);
  } else if (name == "Z2xZ2") {
    group = Group::finite(klein_group(), name);
  } else if (name == "SU2") {
    group = Group::su2();
  } else if (name.rfind("Z", 0) == 0) {
    const int n = parse_suffix(name, 1);
    if (n < 1 || n > 12) throw Error(ErrorKind::SchemaError, "unsupported group '" + name + "'");
    group = Group::finite(cyclic_group(n), name);
  } else if (name.rfind("D", 0) == 0) {
    const int order = parse_suffix(name, 1);
    if (order < 4 || order > 12 || order % 2) throw Error(ErrorKind::SchemaError, "unsupported group '" + name + "'");
    group = Group::finite(dihedral_group(order / 2), name);
  } else {
    throw Error(ErrorKind::SchemaError, "unsupported group '" + name + "'");
  }
  cache[name] = group;
  return group;
}

Catalog builtin_catalog(const std::string& name) {
  if (name == "Z2xZ2-pauli") return pauli_catalog(builtin_group("Z2xZ2"));
  const GroupPtr group = builtin_group(name);
  if (name == "SU2") return su2_catalog(4);
  if (name == "S3") return dihedral_catalog(group, 3, true);
  if (name == "Q8") return quaternion_catalog(group);
  if (name == "Z2xZ2") return klein_catalog(group);
  if (name[0] == 'Z') return cyclic_catalog(group, group->finite().order());
  return dihedral_catalog(group, group->finite().order() / 2, false);
}

std::vector<std::string> builtin_catalog_names() {
  std::vector<std::string> out;
  for (int n = 1; n <= 12; ++n) out.push_back("Z" + std::to_string(n));
  for (int n = 2; n <= 6; ++n) out.push_back("D" + std::to_string(2 * n));
  for (const char* extra : {"S3", "Q8", "Z2xZ2", "Z2xZ2-pauli", "SU2"}) out.push_back(extra);
  return out;
}

std::vector<Matrix> spin_generators(int twice_spin) {
  if (twice_spin < 0) throw Error(ErrorKind::BadSpinSet, "negative spin");
  const int dim = twice_spin + 1;
  const double j = twice_spin / 2.0;
  Matrix plus = Matrix::Zero(dim, dim), tz = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double m = j - k;
    tz(k, k) = m;
    if (k > 0) plus(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const Matrix minus = plus.adjoint();
  const Matrix tx = 0.5 * (plus + minus);
  const Matrix ty = cplx(0.0, -0.5) * (plus - minus);
  return {tx, ty, tz};
}

std::string spin_label(int twice_spin) {
  if (twice_spin % 2 == 0) return "j=" + std::to_string(twice_spin / 2);
  return "j=" + std::to_string(twice_spin) + "/2";
}

Rep su2_irrep(int twice_spin) { return Rep::lie(Group::su2(), spin_generators(twice_spin), spin_label(twice_spin)); }

Catalog su2_catalog(int max_twice_spin) {
  Catalog cat{Group::su2(), {}};
  for (int t = 0; t <= max_twice_spin; ++t) cat.irreps.push_back(su2_irrep(t));
  return cat;
}

}  // namespace gauge_mpv

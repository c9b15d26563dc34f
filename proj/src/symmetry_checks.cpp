#include "gauge_mpv/errors.hpp"
#include "symmetry_internal.hpp"

#include <algorithm>
#include <tuple>

namespace gauge_mpv {

std::string to_string(SettingKind kind) {
  switch (kind) {
    case SettingKind::MatterLocal: return "matter-local";
    case SettingKind::MatterGlobal: return "matter-global";
    case SettingKind::GaugeLocal: return "gauge-local";
    case SettingKind::MatterGaugeLocal: return "bab";
  }
  return "";
}

SettingKind parse_setting(const std::string& name) {
  if (name == "matter-local") return SettingKind::MatterLocal;
  if (name == "matter-global" || name == "global") return SettingKind::MatterGlobal;
  if (name == "gauge-local") return SettingKind::GaugeLocal;
  if (name == "bab") return SettingKind::MatterGaugeLocal;
  throw Error(ErrorKind::SchemaError, "unknown setting '" + name + "'");
}

Vector apply_site_operator(const Vector& v, const std::vector<Eigen::Index>& dims, int site, const Matrix& op) {
  const Eigen::Index d = dims.at(static_cast<size_t>(site));
  if (op.rows() != d || op.cols() != d) throw Error(ErrorKind::DimMismatch, "site operator dimension mismatch");
  Eigen::Index inner = 1;
  for (size_t k = static_cast<size_t>(site) + 1; k < dims.size(); ++k) inner *= dims[k];
  const Eigen::Index outer = v.size() / (d * inner);
  Vector out(v.size());
  for (Eigen::Index o = 0; o < outer; ++o) {
    // Rows of the slice are the site index, columns the trailing sites.
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> in(v.data() + o * d * inner, d, inner);
    Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> dst(out.data() + o * d * inner, d, inner);
    dst.noalias() = op * in;
  }
  return out;
}

double window_residual(const Vector& psi, const std::vector<Eigen::Index>& dims, const std::vector<SiteOperator>& ops,
                       double scale) {
  const double norm = psi.norm();
  if (norm == 0.0 || norm <= kVanishingRatio * scale) return 0.0;
  Vector v = psi;
  for (const auto& s : ops) v = apply_site_operator(v, dims, s.site, s.op);
  return (v - psi).norm() / norm;
}

double mpv_norm_bound(const MpsTensor& t, int n) {
  return std::sqrt(static_cast<double>(t.left_dim())) * std::pow(t.norm(), n);
}

double pair_norm_bound(const TensorPair& pair, int n) {
  return std::sqrt(static_cast<double>(pair.a.left_dim())) * std::pow(pair.a.norm() * pair.b.norm(), n);
}

namespace detail {

std::string element_label(const Group& group, const GroupElement& g) {
  if (group.is_finite()) return group.finite().element_name(g.index);
  return "sample" + std::to_string(g.index);
}

}  // namespace detail

namespace {

SymmetryReport new_report(SettingKind kind, const CheckOptions& options) {
  if (options.n_max < 1) throw Error(ErrorKind::SchemaError, "n_max must be at least 1");
  if (!(options.tol > 0.0)) throw Error(ErrorKind::SchemaError, "tolerance must be positive");
  SymmetryReport report;
  report.setting = to_string(kind);
  report.tolerance = options.tol;
  return report;
}

// Rejects n_max before any contraction when the longest chain would exceed the size cap.
void require_chain_size(double site_dim, int sites) {
  if (std::pow(site_dim, sites) > static_cast<double>(size_limit()))
    throw Error(ErrorKind::SizeLimit, "chain of " + std::to_string(sites) + " sites has more than " +
                                          std::to_string(size_limit()) + " coefficients");
}

void record(SymmetryReport& report, int n, const Group& group, const GroupElement& g, int site, double residual) {
  report.max_residual = std::max(report.max_residual, residual);
  if (residual > report.tolerance)
    report.failures.push_back({n, g.index, detail::element_label(group, g), site, residual});
}

void finish(SymmetryReport& report) {
  std::stable_sort(report.failures.begin(), report.failures.end(), [](const auto& x, const auto& y) {
    return std::tie(x.n, x.element, x.site) < std::tie(y.n, y.element, y.site);
  });
}

void require_dim(const Rep& rep, Eigen::Index d, const char* what) {
  if (rep.dim() != d) throw Error(ErrorKind::DimMismatch, std::string(what) + " dimension differs from physical dimension");
}

void require_same_group(const Rep& a, const Rep& b) {
  if (a.group_ptr() != b.group_ptr()) throw Error(ErrorKind::GroupMismatch, "representations of different groups");
}

double tensor_distance(const MpsTensor& x, const MpsTensor& y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.phys_dim(); ++i) s += (x[i] - y[i]).squaredNorm();
  return std::sqrt(s);
}

}  // namespace

SymmetryReport check_local_symmetry_matter(const MpsTensor& a, const Rep& theta, const CheckOptions& options,
                                           bool all_sites) {
  require_dim(theta, a.phys_dim(), "Theta");
  SymmetryReport report = new_report(SettingKind::MatterLocal, options);
  require_chain_size(static_cast<double>(a.phys_dim()), options.n_max);
  const auto elements = test_elements(theta.group(), options.samples, options.seed);
  for (int n = 1; n <= options.n_max; ++n) {
    report.n_values.push_back(n);
    const Vector psi = contract_mpv(a, n);
    const double scale = mpv_norm_bound(a, n);
    const std::vector<Eigen::Index> dims(static_cast<size_t>(n), a.phys_dim());
    for (const auto& g : elements) {
      const Matrix u = theta.at(g);
      for (int site = 0; site < (all_sites ? n : 1); ++site)
        record(report, n, theta.group(), g, site, window_residual(psi, dims, {{site, u}}, scale));
    }
  }
  finish(report);
  return report;
}

SymmetryReport check_global_symmetry(const MpsTensor& a, const Rep& theta, const CheckOptions& options) {
  require_dim(theta, a.phys_dim(), "Theta");
  SymmetryReport report = new_report(SettingKind::MatterGlobal, options);
  require_chain_size(static_cast<double>(a.phys_dim()), options.n_max);
  const auto elements = test_elements(theta.group(), options.samples, options.seed);
  for (int n = 1; n <= options.n_max; ++n) {
    report.n_values.push_back(n);
    const Vector psi = contract_mpv(a, n);
    const double scale = mpv_norm_bound(a, n);
    const std::vector<Eigen::Index> dims(static_cast<size_t>(n), a.phys_dim());
    for (const auto& g : elements) {
      const Matrix u = theta.at(g);
      std::vector<SiteOperator> ops;
      for (int site = 0; site < n; ++site) ops.push_back({site, u});
      record(report, n, theta.group(), g, 0, window_residual(psi, dims, ops, scale));
    }
  }
  finish(report);
  return report;
}

SymmetryReport check_local_symmetry_gauge(const MpsTensor& b, const Rep& r, const Rep& l, const CheckOptions& options) {
  require_dim(r, b.phys_dim(), "R");
  require_dim(l, b.phys_dim(), "L");
  require_same_group(r, l);
  SymmetryReport report = new_report(SettingKind::GaugeLocal, options);
  require_chain_size(static_cast<double>(b.phys_dim()), options.n_max);
  const auto elements = test_elements(r.group(), options.samples, options.seed);
  for (int n = 1; n <= options.n_max; ++n) {
    report.n_values.push_back(n);
    const Vector psi = contract_mpv(b, n);
    const double scale = mpv_norm_bound(b, n);
    const std::vector<Eigen::Index> dims(static_cast<size_t>(n), b.phys_dim());
    for (const auto& g : elements) {
      const Matrix rg = r.at(g), lg = l.at(g);
      for (int k = 0; k < n; ++k) {
        std::vector<SiteOperator> ops;
        if (n == 1) ops = {{0, lg * rg}};
        else ops = {{k, rg}, {(k + 1) % n, lg}};
        record(report, n, r.group(), g, k, window_residual(psi, dims, ops, scale));
      }
    }
  }
  finish(report);
  return report;
}

namespace detail {

SymmetryReport check_bab_windows(const std::function<Vector(int)>& psi_of, const std::function<double(int)>& scale_of,
                                 int pairs_per_unit, Eigen::Index da,
                                 Eigen::Index db, const Rep& r, const Rep& theta, const Rep& l,
                                 const CheckOptions& options, int n_max) {
  require_dim(theta, da, "Theta");
  require_dim(r, db, "R");
  require_dim(l, db, "L");
  require_same_group(r, theta);
  require_same_group(r, l);
  SymmetryReport report = new_report(SettingKind::MatterGaugeLocal, options);
  require_chain_size(static_cast<double>(da * db), n_max * pairs_per_unit);
  const auto elements = test_elements(r.group(), options.samples, options.seed);
  for (int n = 1; n <= n_max; ++n) {
    report.n_values.push_back(n);
    const Vector psi = psi_of(n);
    const double scale = scale_of(n);
    const int pairs = n * pairs_per_unit;
    std::vector<Eigen::Index> dims;
    for (int k = 0; k < pairs; ++k) {
      dims.push_back(da);
      dims.push_back(db);
    }
    for (const auto& g : elements) {
      const Matrix rg = r.at(g), tg = theta.at(g), lg = l.at(g);
      for (int k = 0; k < pairs; ++k) {
        const int a_site = 2 * k;
        const int left_b = (a_site - 1 + 2 * pairs) % (2 * pairs);
        const int right_b = a_site + 1;
        std::vector<SiteOperator> ops;
        if (left_b == right_b) ops = {{a_site, tg}, {right_b, lg * rg}};
        else ops = {{left_b, rg}, {a_site, tg}, {right_b, lg}};
        record(report, n, r.group(), g, a_site, window_residual(psi, dims, ops, scale));
      }
    }
  }
  finish(report);
  return report;
}

}  // namespace detail

SymmetryReport check_local_symmetry_matter_gauge(const TensorPair& pair, const Rep& r, const Rep& theta, const Rep& l,
                                                 const CheckOptions& options) {
  pair.validate();
  return detail::check_bab_windows([&](int n) { return contract_pair(pair, n); },
                                   [&](int n) { return pair_norm_bound(pair, n); }, 1, pair.a.phys_dim(),
                                   pair.b.phys_dim(), r, theta, l, options, options.n_max);
}

RelationReport verify_relation_A(const MpsTensor& a, const Rep& theta, const std::vector<GroupElement>& elements,
                                 const std::vector<Matrix>& x, const std::vector<Matrix>& y) {
  require_dim(theta, a.phys_dim(), "Theta");
  RelationReport out;
  out.elements = elements;
  const double norm = std::max(a.norm(), 1e-300);
  for (size_t k = 0; k < elements.size(); ++k) {
    const MpsTensor lhs = a.physical_action(theta.at(elements[k]));
    const MpsTensor rhs = a.sandwiched(x[k].inverse(), y[k]);
    out.residuals.push_back(tensor_distance(lhs, rhs) / norm);
    out.max_residual = std::max(out.max_residual, out.residuals.back());
  }
  return out;
}

RelationReport verify_relation_A(const MpsTensor& a, const Rep& theta, const Rep& x, const Rep& y,
                                 const std::vector<GroupElement>& elements) {
  std::vector<Matrix> xs, ys;
  for (const auto& g : elements) {
    xs.push_back(x.at(g));
    ys.push_back(y.at(g));
  }
  return verify_relation_A(a, theta, elements, xs, ys);
}

RelationReport verify_relation_B(const MpsTensor& b, const Rep& r, const Rep& l, const std::vector<GroupElement>& elements,
                                 const std::vector<Matrix>& x, const std::vector<Matrix>& y) {
  require_dim(r, b.phys_dim(), "R");
  require_dim(l, b.phys_dim(), "L");
  RelationReport out;
  out.elements = elements;
  const double norm = std::max(b.norm(), 1e-300);
  const Matrix id_left = Matrix::Identity(b.left_dim(), b.left_dim());
  const Matrix id_right = Matrix::Identity(b.right_dim(), b.right_dim());
  for (size_t k = 0; k < elements.size(); ++k) {
    const double right = tensor_distance(b.physical_action(r.at(elements[k])), b.sandwiched(id_left, x[k]));
    const double left = tensor_distance(b.physical_action(l.at(elements[k])), b.sandwiched(y[k].inverse(), id_right));
    out.residuals.push_back(std::max(right, left) / norm);
    out.max_residual = std::max(out.max_residual, out.residuals.back());
  }
  return out;
}

RelationReport verify_relation_B(const MpsTensor& b, const Rep& r, const Rep& l, const Rep& x, const Rep& y,
                                 const std::vector<GroupElement>& elements) {
  std::vector<Matrix> xs, ys;
  for (const auto& g : elements) {
    xs.push_back(x.at(g));
    ys.push_back(y.at(g));
  }
  return verify_relation_B(b, r, l, elements, xs, ys);
}

EveryComponentReport check_every_component_invariant(const TensorPair& pair, const Rep& r, const Rep& theta,
                                                     const Rep& l, const CheckOptions& options) {
  EveryComponentReport out;
  out.full = check_local_symmetry_matter_gauge(pair, r, theta, l, options);
  const PairDecomposition dec = pair_decompose(pair, options.seed);
  out.blocking_factor = dec.blocking_factor;
  const double site = static_cast<double>(pair.a.phys_dim() * pair.b.phys_dim());
  int n_max = 0;
  while (n_max < options.n_max && std::pow(site, dec.blocking_factor * (n_max + 1)) <= static_cast<double>(size_limit()))
    ++n_max;
  for (const auto& c : dec.components) {
    ComponentReport cr;
    cr.weight = c.weight;
    cr.report = detail::check_bab_windows([&](int n) { return contract_pair(c.pair, n); },
                                          [&](int n) { return pair_norm_bound(c.pair, n); }, dec.blocking_factor,
                                          pair.a.phys_dim(), pair.b.phys_dim(), r, theta, l, options, std::max(n_max, 1));
    if (out.full.passed() && !cr.report.passed()) out.counterexample = true;
    out.components.push_back(std::move(cr));
  }
  return out;
}

CouplingVerdict check_coupling_implies_global(const MpsTensor& a, const MpsTensor& b, const Rep& theta, const Rep& r,
                                              const Rep& l, const CheckOptions& options) {
  CouplingVerdict out;
  if (b.left_dim() == b.right_dim()) {
    const Eigen::Index dim = b.left_dim();
    Matrix span(dim * dim, b.phys_dim());
    for (Eigen::Index i = 0; i < b.phys_dim(); ++i) span.col(i) = vec_rows(b[i]);
    const Vector target = vec_rows(Matrix::Identity(dim, dim));
    const Vector coeff = span.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(target);
    out.identity_residual = (span * coeff - target).norm() / target.norm();
  } else {
    out.identity_residual = 1.0;
  }
  out.identity_in_span = out.identity_residual <= options.tol;
  out.gauge_report = check_local_symmetry_gauge(b, r, l, options);
  out.bab_report = check_local_symmetry_matter_gauge({a, b}, r, theta, l, options);
  out.applies = out.identity_in_span && out.gauge_report.passed() && out.bab_report.passed();
  if (out.applies) out.global_report = check_global_symmetry(a, theta, options);
  return out;
}

}  // namespace gauge_mpv

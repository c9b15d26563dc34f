#pragma once

#include "gauge_mpv/canonical_form.hpp"
#include "gauge_mpv/representation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gauge_mpv {

enum class SettingKind { MatterLocal, MatterGlobal, GaugeLocal, MatterGaugeLocal };

std::string to_string(SettingKind kind);
// Accepts matter-local, matter-global (alias global), gauge-local, bab.
SettingKind parse_setting(const std::string& name);

struct CheckOptions {
  int n_max = 3;
  double tol = 1e-9;
  int samples = 100;
  std::uint64_t seed = 0;
};

struct SymmetryFailure {
  int n = 0;
  int element = 0;
  std::string element_name;
  int site = 0;
  double residual = 0.0;
};

struct SymmetryReport {
  std::string setting;
  std::vector<int> n_values;
  double tolerance = 0.0;
  double max_residual = 0.0;
  // Sorted by (n, element, site).
  std::vector<SymmetryFailure> failures;
  bool passed() const { return max_residual <= tolerance; }
};

// Operator applied to a product of sites: (site, matrix) pairs acting on a chain vector.
struct SiteOperator {
  int site = 0;
  Matrix op;
};

// Applies op to one tensor factor of v, where dims lists the local dimension of every site.
Vector apply_site_operator(const Vector& v, const std::vector<Eigen::Index>& dims, int site, const Matrix& op);

// Below this fraction of its norm bound a contracted vector counts as identically zero.
inline constexpr double kVanishingRatio = 1e-12;

// ||O psi - psi|| / ||psi||, zero when ||psi|| <= kVanishingRatio * scale.
double window_residual(const Vector& psi, const std::vector<Eigen::Index>& dims, const std::vector<SiteOperator>& ops,
                       double scale = 0.0);

// sqrt(D) ||A||^n, an upper bound on ||contract_mpv(A, n)||.
double mpv_norm_bound(const MpsTensor& t, int n);
double pair_norm_bound(const TensorPair& pair, int n);

// Theta(g) on the first site only; all_sites repeats the check on every site.
SymmetryReport check_local_symmetry_matter(const MpsTensor& a, const Rep& theta, const CheckOptions& options,
                                           bool all_sites = false);
SymmetryReport check_global_symmetry(const MpsTensor& a, const Rep& theta, const CheckOptions& options);
// R(g) at site K and L(g) at site K+1 for every K; for N = 1 both act on the single site as L R.
SymmetryReport check_local_symmetry_gauge(const MpsTensor& b, const Rep& r, const Rep& l, const CheckOptions& options);
// R(g) (x) Theta(g) (x) L(g) on every B-A-B window of the chain A B A B ..., with n_max pairs.
SymmetryReport check_local_symmetry_matter_gauge(const TensorPair& pair, const Rep& r, const Rep& theta, const Rep& l,
                                                 const CheckOptions& options);

struct RelationReport {
  std::vector<GroupElement> elements;
  std::vector<double> residuals;
  double max_residual = 0.0;
  bool passed(double tol) const { return max_residual <= tol; }
};

// ||Theta(g).A - X(g)^{-1} A Y(g)|| / ||A|| per element.
RelationReport verify_relation_A(const MpsTensor& a, const Rep& theta, const std::vector<GroupElement>& elements,
                                 const std::vector<Matrix>& x, const std::vector<Matrix>& y);
RelationReport verify_relation_A(const MpsTensor& a, const Rep& theta, const Rep& x, const Rep& y,
                                 const std::vector<GroupElement>& elements);
// max(||R(g).B - B X(g)||, ||L(g).B - Y(g)^{-1} B||) / ||B|| per element.
RelationReport verify_relation_B(const MpsTensor& b, const Rep& r, const Rep& l, const std::vector<GroupElement>& elements,
                                 const std::vector<Matrix>& x, const std::vector<Matrix>& y);
RelationReport verify_relation_B(const MpsTensor& b, const Rep& r, const Rep& l, const Rep& x, const Rep& y,
                                 const std::vector<GroupElement>& elements);

struct VirtualRep {
  std::vector<GroupElement> elements;
  std::vector<Matrix> x;
  std::vector<Matrix> y;
  // Global setting only: Theta(g).A = phase(g) X(g)^{-1} A X(g).
  std::vector<cplx> phases;
  // Finite groups only.
  std::optional<Multiplier> multiplier_x;
  std::optional<Multiplier> multiplier_y;
  double relation_a_residual = 0.0;
  double relation_b_residual = 0.0;
};

// Pair setting. NotNormal unless AB and BA are normal; ExtractionDegenerate when the mixed
// transfer map has no leading eigenvalue on the unit circle.
VirtualRep extract_virtual_rep(const TensorPair& pair, const Rep& r, const Rep& theta, const Rep& l,
                               const CheckOptions& options = {});
// Global setting for a normal tensor: X(g) normalized to det X(g) = 1, ties between the
// dim-th roots of unity broken by the largest real trace.
VirtualRep extract_global_virtual_rep(const MpsTensor& a, const Rep& theta, const CheckOptions& options = {});

struct SectorNorm {
  std::string label;
  int copy = 0;
  bool trivial = false;
  double norm = 0.0;
};

struct MatterLocalAnalysis {
  std::vector<SectorNorm> sectors;
  std::vector<std::string> flagged;
  double tensor_residual = 0.0;
  bool passed = false;
};

// NotInCF unless every diagonal block of A is normal.
MatterLocalAnalysis analyze_matter_local_symmetry(const MpsTensor& a, const Rep& theta, const Catalog& catalog,
                                                  double tol = 1e-9);

struct GaugeSector {
  std::string left;   // irrep l_k acted on by L
  std::string right;  // irrep r_k acted on by R
  int left_index = 0;
  int right_index = 0;
  int multiplicity = 0;
  bool kogut_susskind = false;
};

struct GaugeHilbertAnalysis {
  Matrix support;  // orthonormal basis of the physical support of B
  std::vector<GaugeSector> sectors;
  // Orthonormal basis of each sector copy, columns ordered (m, n) with n fastest.
  std::vector<Matrix> sector_bases;
  std::vector<int> sector_of_basis;
  bool kogut_susskind = false;
  double commutator_residual = 0.0;
};

// NotDecomposable if R and L fail to preserve or commute on the support.
GaugeHilbertAnalysis analyze_gauge_hilbert(const MpsTensor& b, const Rep& r, const Rep& l, const Catalog& catalog,
                                           double tol = 1e-9);

struct BBlockEntry {
  int sector = 0;  // index into sector_bases
  int y_copy = 0;
  int x_copy = 0;
  bool matched = false;
  double norm = 0.0;
  // Matched blocks: the constant c with block / c an isometry, and that isometry's defect.
  cplx constant = 0.0;
  double shape_residual = 0.0;
};

struct BStructureAnalysis {
  std::vector<BBlockEntry> blocks;
  double max_unmatched_norm = 0.0;
  bool condition1 = false;
  bool condition2 = false;
  bool condition3 = false;
  // Conditions 2 or 3 fail, so AB and BA cannot both be normal.
  bool normality_contradiction = false;
  std::optional<bool> pair_normal;
};

BStructureAnalysis analyze_b_structure(const MpsTensor& b, const Rep& r, const Rep& l, const Rep& x, const Rep& y,
                                       const Catalog& catalog, const MpsTensor* a = nullptr, double tol = 1e-9);

struct GaussOperators {
  std::vector<Matrix> r;
  std::vector<Matrix> q;
  std::vector<Matrix> l;
  // f[a][b][c] with [T_a, T_b] = i f_abc T_c.
  std::vector<std::vector<std::vector<double>>> structure_constants;

  static std::vector<std::vector<std::vector<double>>> su2_structure();
  static std::vector<std::vector<std::vector<double>>> abelian(int n);
  // BadAlgebra when the relations fail.
  void validate(double tol = 1e-10) const;
};

struct GaussEntry {
  int n = 0;
  int sample = 0;  // -1 for the unrotated generators
  int direction = 0;
  int site = 0;
  double residual = 0.0;
};

struct GaussReport {
  std::vector<GaussEntry> entries;
  double max_residual = 0.0;
  double algebra_residual = 0.0;
  bool passed(double tol) const { return max_residual <= tol; }
};

// ||G_a psi|| / ||psi|| at every matter site, G_a = R_a (left B) + Q_a (A) + L_a (right B).
// Samples rotate the generators by U = exp(i phi . G) for seeded phi.
GaussReport check_gauss_law(const TensorPair& pair, const GaussOperators& ops, const CheckOptions& options);

struct ComponentReport {
  cplx weight;
  SymmetryReport report;
};

struct EveryComponentReport {
  SymmetryReport full;
  int blocking_factor = 1;
  std::vector<ComponentReport> components;
  // Full MPV passes but some component fails.
  bool counterexample = false;
};

EveryComponentReport check_every_component_invariant(const TensorPair& pair, const Rep& r, const Rep& theta,
                                                     const Rep& l, const CheckOptions& options);

struct CouplingVerdict {
  double identity_residual = 0.0;
  bool identity_in_span = false;
  SymmetryReport gauge_report;
  SymmetryReport bab_report;
  bool applies = false;
  std::optional<SymmetryReport> global_report;
};

CouplingVerdict check_coupling_implies_global(const MpsTensor& a, const MpsTensor& b, const Rep& theta, const Rep& r,
                                              const Rep& l, const CheckOptions& options);

}  // namespace gauge_mpv

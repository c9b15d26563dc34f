#include "gauge_mpv/cli.hpp"

#include "gauge_mpv/catalogs.hpp"
#include "gauge_mpv/errors.hpp"
#include "gauge_mpv/serialization.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <sstream>

namespace gauge_mpv {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

Catalog load_catalog(const std::string& spec) {
  if (spec.empty()) throw Error(ErrorKind::SchemaError, "--group is required");
  if (std::filesystem::exists(spec)) return catalog_from_json(read_json_file(spec), spec + "#");
  return builtin_catalog(spec);
}

Bundle load_bundle(const std::string& path) {
  if (path.empty()) throw Error(ErrorKind::SchemaError, "--bundle is required");
  return bundle_from_json(read_json_file(path), path + "#");
}

Rep sum_of(const Catalog& catalog, const std::vector<std::string>& labels, const char* what) {
  if (labels.empty()) throw Error(ErrorKind::SchemaError, std::string(what) + " needs at least one irrep label");
  std::vector<Rep> parts;
  for (const auto& l : labels) parts.push_back(catalog.by_label(l));
  return direct_sum_rep(parts);
}

CheckOptions check_options(const RunConfig& c) {
  CheckOptions o;
  o.n_max = c.n_max;
  o.tol = c.tol;
  o.seed = c.seed;
  o.samples = c.samples;
  return o;
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) out << text;
  else write_text_file(c.out, text);
}

GaussOperators gauss_of(const Bundle& b) {
  if (b.gauss) return *b.gauss;
  if (b.group->is_finite()) throw Error(ErrorKind::SchemaError, "the gauss setting needs a Lie-group bundle");
  return {b.rep("R").generators(), b.rep("theta").generators(), b.rep("L").generators(),
          GaussOperators::su2_structure()};
}

std::string render_gauss(const GaussReport& r, double tol) {
  std::ostringstream s;
  s << "setting: gauss\n";
  s << "tolerance: " << sci(tol) << "\n";
  s << "max residual: " << sci(r.max_residual) << "\n";
  s << "algebra residual: " << sci(r.algebra_residual) << "\n";
  s << (r.passed(tol) ? "PASS" : "FAIL") << "\n";
  return s.str();
}

int verify(const RunConfig& c, std::ostream& out) {
  const Bundle b = load_bundle(c.bundle);
  const CheckOptions o = check_options(c);
  if (c.setting == "gauss") {
    const GaussOperators ops = gauss_of(b);
    ops.validate();
    const GaussReport r = check_gauss_law({b.tensor("A"), b.tensor("B")}, ops, o);
    emit(c, c.json ? dump_json(to_json(r)) : render_gauss(r, c.tol), out);
    return r.passed(c.tol) ? 0 : 1;
  }
  SymmetryReport report;
  switch (parse_setting(c.setting)) {
    case SettingKind::MatterLocal:
      report = check_local_symmetry_matter(b.tensor("A"), b.rep("theta"), o);
      break;
    case SettingKind::MatterGlobal:
      report = check_global_symmetry(b.tensor("A"), b.rep("theta"), o);
      break;
    case SettingKind::GaugeLocal:
      report = check_local_symmetry_gauge(b.tensor("B"), b.rep("R"), b.rep("L"), o);
      break;
    case SettingKind::MatterGaugeLocal:
      report = check_local_symmetry_matter_gauge({b.tensor("A"), b.tensor("B")}, b.rep("R"), b.rep("theta"),
                                                 b.rep("L"), o);
      break;
  }
  emit(c, c.json ? dump_json(to_json(report)) : report_render(report), out);
  return report.passed() ? 0 : 1;
}

int write_bundle(const RunConfig& c, const Bundle& b, std::ostream& out) {
  const std::string text = dump_json(bundle_to_json(b));
  emit(c, text, out);
  if (!c.out.empty()) out << "wrote " << b.name << " bundle to " << c.out << "\n";
  return 0;
}

Su2Options su2_options(const RunConfig& c) {
  Su2Options o;
  o.twice_r = c.twice_r;
  o.twice_l = c.twice_l;
  o.j_set = c.labels;
  o.duplicate = c.duplicate;
  return o;
}

Bundle su2_bundle(const RunConfig& c) {
  const Su2Example ex = build_su2_example(su2_options(c));
  Bundle b = bundle_from_construction(ex.construction);
  b.gauss = ex.gauss;
  return b;
}

int example(const RunConfig& c, std::ostream& out) {
  if (c.target == "d10") return write_bundle(c, bundle_from_construction(build_d10_example()), out);
  if (c.target == "su2") return write_bundle(c, su2_bundle(c), out);
  throw Error(ErrorKind::SchemaError, "unknown example '" + c.target + "' (expected d10 or su2)");
}

int construct(const RunConfig& c, std::ostream& out) {
  Bundle b;
  b.name = c.target;
  if (c.target == "elementary") {
    const Catalog cat = load_catalog(c.group);
    const ElementaryBlock blk = elementary_b_block(cat.by_label(c.irrep_l), cat.by_label(c.irrep_r));
    b.group = cat.group;
    b.tensors.emplace("B", blk.b);
    for (const auto& [k, r] : {std::pair{"R", blk.r}, {"L", blk.l}, {"X", blk.x}, {"Y", blk.y}}) b.reps.emplace(k, r);
  } else if (c.target == "wigner-eckart") {
    const Catalog cat = load_catalog(c.group);
    const Rep& j = cat.by_label(c.irrep_j);
    const Rep& l = cat.by_label(c.irrep_l);
    const WignerEckartTensor w = wigner_eckart_tensor(j, l, cat, c.labels);
    b.group = cat.group;
    b.tensors.emplace("A", w.a);
    for (const auto& [k, r] : {std::pair{"theta", w.theta}, {"X", j}, {"Y", l}}) b.reps.emplace(k, r);
    Json layout = Json::array();
    for (const auto& [label, copy] : w.layout) layout.push_back({{"label", label}, {"copy", copy}});
    b.parameters["layout"] = std::move(layout);
  } else if (c.target == "gauge") {
    const Bundle in = load_bundle(c.bundle);
    const bool explicit_xy = in.reps.count("X") && in.reps.count("Y");
    const GaugedSymmetry g = explicit_xy
                                 ? gauge_global_symmetry(in.tensor("A"), in.rep("theta"), in.rep("X"), in.rep("Y"), c.seed)
                                 : gauge_global_symmetry(in.tensor("A"), in.rep("theta"), c.seed);
    b.group = in.group;
    b.tensors.emplace("A", g.pair.a);
    b.tensors.emplace("B", g.pair.b);
    for (const auto& [k, r] : {std::pair{"theta", in.rep("theta")}, {"R", g.r}, {"L", g.l}, {"X", g.x}, {"Y", g.y}})
      b.reps.emplace(k, r);
  } else if (c.target == "couple") {
    const Catalog cat = load_catalog(c.group);
    const Rep x = sum_of(cat, c.x_labels, "--x");
    const Rep y = sum_of(cat, c.y_labels, "--y");
    const MatterCoupling m = couple_matter_to_gauge(x, y, cat);
    b.group = cat.group;
    b.tensors.emplace("A", m.a);
    for (const auto& [k, r] : {std::pair{"theta", m.theta}, {"X", x}, {"Y", y}}) b.reps.emplace(k, r);
    b.parameters["J"] = m.j_labels;
  } else if (c.target == "su2") {
    b = su2_bundle(c);
  } else {
    throw Error(ErrorKind::SchemaError,
                "unknown construction '" + c.target + "' (expected elementary, wigner-eckart, gauge, couple or su2)");
  }
  return write_bundle(c, b, out);
}

MpsTensor select_tensor(const Bundle& b, const std::string& key) {
  if (key == "AB") return product_tensor(b.tensor("A"), b.tensor("B"));
  if (key == "BA") return product_tensor(b.tensor("B"), b.tensor("A"));
  return b.tensor(key);
}

int canonical(const RunConfig& c, std::ostream& out) {
  const Bundle b = load_bundle(c.bundle);
  CanonicalFormOptions o;
  o.seed = c.seed;
  const CanonicalFormResult cf = canonical_form(select_tensor(b, c.tensor), o);
  if (c.json) {
    emit(c, dump_json(to_json(cf)), out);
    return 0;
  }
  std::ostringstream s;
  s << "blocks: " << cf.blocks.size() << "\n";
  s << "blocking factor: " << cf.blocking_factor << "\n";
  for (size_t k = 0; k < cf.blocks.size(); ++k)
    s << "block " << k << ": bond " << cf.blocks[k].tensor.left_dim() << ", copies " << cf.blocks[k].copies.size()
      << "\n";
  s << "reassembly error: " << sci(cf.reassembly_error) << "\n";
  emit(c, s.str(), out);
  return 0;
}

int decompose(const RunConfig& c, std::ostream& out) {
  const Catalog cat = load_catalog(c.group);
  const Bundle b = load_bundle(c.bundle);
  const RepDecomposition dec = decompose_rep(b.rep(c.rep), cat);
  if (c.json) {
    emit(c, dump_json(to_json(dec, cat)), out);
    return 0;
  }
  std::ostringstream s;
  for (const auto& blk : dec.blocks) s << blk.label << " x" << blk.multiplicity << " (dim " << blk.dim << ")\n";
  s << "off-block residual: " << sci(dec.off_block_residual) << "\n";
  emit(c, s.str(), out);
  return 0;
}

}  // namespace

std::string report_render(const SymmetryReport& report) {
  std::ostringstream s;
  s << "setting: " << report.setting << "\n";
  s << "N:";
  for (int n : report.n_values) s << " " << n;
  s << "\n";
  s << "tolerance: " << sci(report.tolerance) << "\n";
  s << "max residual: " << sci(report.max_residual) << "\n";
  if (report.failures.empty()) {
    s << "PASS\n";
    return s.str();
  }
  s << "FAIL: " << report.failures.size() << " failing checks\n";
  char line[128];
  std::snprintf(line, sizeof line, "%4s  %-12s  %4s  %s\n", "N", "element", "site", "residual");
  s << line;
  for (const auto& f : report.failures) {
    std::snprintf(line, sizeof line, "%4d  %-12s  %4d  %s\n", f.n, f.element_name.c_str(), f.site, sci(f.residual).c_str());
    s << line;
  }
  return s.str();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.n_max < 1) throw Error(ErrorKind::SchemaError, "--n-max must be at least 1");
    if (!(config.tol > 0.0)) throw Error(ErrorKind::SchemaError, "--tol must be positive");
    if (config.samples < 1) throw Error(ErrorKind::SchemaError, "--samples must be at least 1");
    if (config.command == "verify") return verify(config, out);
    if (config.command == "example") return example(config, out);
    if (config.command == "construct") return construct(config, out);
    if (config.command == "canonical-form") return canonical(config, out);
    if (config.command == "decompose-rep") return decompose(config, out);
    throw Error(ErrorKind::SchemaError, "unknown command '" + config.command + "'");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Construct and certify gauge-symmetric matrix product vectors"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--n-max", c.n_max, "Largest chain length in pairs or sites")->capture_default_str();
    sub->add_option("--tol", c.tol, "Residual tolerance")->capture_default_str();
    sub->add_option("--seed", c.seed, "Seed for every randomized routine")->capture_default_str();
    sub->add_option("--samples", c.samples, "Group samples for Lie groups")->capture_default_str();
    sub->add_flag("--json", c.json, "Emit JSON");
    sub->add_option("--out", c.out, "Write output to this file");
    sub->add_option("--group", c.group, "Built-in catalog name or catalog JSON path");
    sub->add_option("--bundle", c.bundle, "Bundle JSON path");
  };

  auto* verify_cmd = app.add_subcommand("verify", "Run a symmetry check on a bundle");
  common(verify_cmd);
  verify_cmd->add_option("--setting", c.setting, "matter-local, matter-global, gauge-local, bab or gauss")
      ->capture_default_str();

  auto* example_cmd = app.add_subcommand("example", "Write a worked example bundle");
  common(example_cmd);
  example_cmd->add_option("name", c.target, "d10 or su2")->required();

  auto* construct_cmd = app.add_subcommand("construct", "Build a tensor family");
  common(construct_cmd);
  construct_cmd->add_option("kind", c.target, "elementary, wigner-eckart, gauge, couple or su2")->required();
  construct_cmd->add_option("--l", c.irrep_l, "Irrep label l");
  construct_cmd->add_option("--r", c.irrep_r, "Irrep label r");
  construct_cmd->add_option("--j", c.irrep_j, "Irrep label j");
  construct_cmd->add_option("--labels", c.labels, "Selected irreps J")->delimiter(',');
  construct_cmd->add_option("--x", c.x_labels, "Irreps of X")->delimiter(',');
  construct_cmd->add_option("--y", c.y_labels, "Irreps of Y")->delimiter(',');
  construct_cmd->add_option("--twice-r", c.twice_r, "2r for the SU(2) example")->capture_default_str();
  construct_cmd->add_option("--twice-l", c.twice_l, "2l for the SU(2) example")->capture_default_str();
  construct_cmd->add_flag("--duplicate", c.duplicate, "Duplicate the SU(2) blocks");
  example_cmd->add_option("--twice-r", c.twice_r, "2r for the SU(2) example")->capture_default_str();
  example_cmd->add_option("--twice-l", c.twice_l, "2l for the SU(2) example")->capture_default_str();
  example_cmd->add_option("--labels", c.labels, "Selected spins J")->delimiter(',');
  example_cmd->add_flag("--duplicate", c.duplicate, "Duplicate the blocks");

  auto* cf_cmd = app.add_subcommand("canonical-form", "Canonical form of a bundle tensor");
  common(cf_cmd);
  cf_cmd->add_option("--tensor", c.tensor, "A, B, AB or BA")->capture_default_str();

  auto* dec_cmd = app.add_subcommand("decompose-rep", "Irrep decomposition of a bundle representation");
  common(dec_cmd);
  dec_cmd->add_option("--rep", c.rep, "Representation key in the bundle")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  c.command = app.get_subcommands().front()->get_name();
  return run(c, out, err);
}

}  // namespace gauge_mpv

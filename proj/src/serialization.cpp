#include "gauge_mpv/serialization.hpp"

#include "gauge_mpv/catalogs.hpp"
#include "gauge_mpv/errors.hpp"

#include <fstream>
#include <sstream>

namespace gauge_mpv {

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ParseError, where + ": " + what);
}

[[noreturn]] void schema_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::SchemaError, where + ": " + what);
}

// Re-raises a library error with the JSON location prepended.
[[noreturn]] void relocate(const Error& e, const std::string& where) {
  const std::string prefix = std::string(to_string(e.kind())) + ": ";
  std::string msg = e.what();
  if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
  throw Error(e.kind(), where + ": " + msg);
}

std::string child(const std::string& where, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return where + "/" + escaped;
}

std::string child(const std::string& where, size_t index) { return where + "/" + std::to_string(index); }

const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) parse_fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_fail(child(where, key), "missing field");
  return *it;
}

const Json& array_at(const Json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where, "expected an array");
  return j;
}

long long integer_at(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) parse_fail(where, "expected an integer");
  return j.get<long long>();
}

std::string string_at(const Json& j, const std::string& where) {
  if (!j.is_string()) parse_fail(where, "expected a string");
  return j.get<std::string>();
}

std::vector<Matrix> matrices_from_json(const Json& j, const std::string& where) {
  std::vector<Matrix> out;
  const Json& arr = array_at(j, where);
  for (size_t k = 0; k < arr.size(); ++k) out.push_back(matrix_from_json(arr[k], child(where, k)));
  return out;
}

Json matrices_to_json(const std::vector<Matrix>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(to_json(m));
  return out;
}

Json multiplier_to_json(const Multiplier& m) { return to_json(m.values); }

Json rep_json_body(const Rep& rep) {
  Json out;
  out["label"] = rep.label();
  out["dim"] = rep.dim();
  out[rep.is_lie() ? "generators" : "matrices"] = matrices_to_json(rep.matrices());
  return out;
}

Json gauss_to_json(const GaussOperators& g) {
  Json out;
  out["R"] = matrices_to_json(g.r);
  out["Q"] = matrices_to_json(g.q);
  out["L"] = matrices_to_json(g.l);
  out["structure_constants"] = g.structure_constants;
  return out;
}

GaussOperators gauss_from_json(const Json& j, const std::string& where) {
  GaussOperators g;
  g.r = matrices_from_json(field(j, "R", where), child(where, "R"));
  g.q = matrices_from_json(field(j, "Q", where), child(where, "Q"));
  g.l = matrices_from_json(field(j, "L", where), child(where, "L"));
  const std::string fw = child(where, "structure_constants");
  try {
    g.structure_constants = field(j, "structure_constants", where).get<std::vector<std::vector<std::vector<double>>>>();
  } catch (const Json::exception&) {
    parse_fail(fw, "expected a rank-3 array of numbers");
  }
  return g;
}

}  // namespace

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const MpsTensor& t) {
  Json out;
  out["phys_dim"] = t.phys_dim();
  out["left_dim"] = t.left_dim();
  out["right_dim"] = t.right_dim();
  out["entries"] = matrices_to_json(t.matrices());
  return out;
}

Json to_json(const Rep& rep) { return rep_json_body(rep); }

Json to_json(const SymmetryReport& report) {
  Json out;
  out["setting"] = report.setting;
  out["N_values"] = report.n_values;
  out["tolerance"] = report.tolerance;
  out["max_residual"] = report.max_residual;
  out["passed"] = report.passed();
  Json failures = Json::array();
  for (const auto& f : report.failures) {
    Json e;
    e["N"] = f.n;
    e["element"] = f.element_name;
    e["element_index"] = f.element;
    e["site"] = f.site;
    e["residual"] = f.residual;
    failures.push_back(std::move(e));
  }
  out["failures"] = std::move(failures);
  return out;
}

Json to_json(const CanonicalFormResult& cf) {
  Json out;
  out["blocking_factor"] = cf.blocking_factor;
  out["checked_lengths"] = cf.checked_lengths;
  out["reassembly_error"] = cf.reassembly_error;
  Json blocks = Json::array();
  for (const auto& b : cf.blocks) {
    Json jb;
    jb["tensor"] = to_json(b.tensor);
    jb["fixed_point"] = to_json(b.fixed_point);
    Json copies = Json::array();
    for (const auto& c : b.copies) {
      Json jc;
      jc["weight"] = to_json(c.weight);
      jc["similarity"] = to_json(c.similarity);
      copies.push_back(std::move(jc));
    }
    jb["copies"] = std::move(copies);
    blocks.push_back(std::move(jb));
  }
  out["blocks"] = std::move(blocks);
  return out;
}

Json to_json(const RepDecomposition& dec, const Catalog& catalog) {
  Json out;
  Json blocks = Json::array();
  for (const auto& b : dec.blocks) blocks.push_back({{"label", b.label}, {"dim", b.dim}, {"multiplicity", b.multiplicity}});
  out["blocks"] = std::move(blocks);
  Json copies = Json::array();
  for (const auto& c : dec.copies)
    copies.push_back({{"label", catalog.irreps.at(static_cast<size_t>(c.catalog_index)).label()},
                      {"copy", c.copy},
                      {"offset", c.offset},
                      {"dim", c.dim}});
  out["copies"] = std::move(copies);
  out["basis_change"] = to_json(dec.basis_change);
  out["off_block_residual"] = dec.off_block_residual;
  return out;
}

Json to_json(const GaussReport& report) {
  Json out;
  out["setting"] = "gauss";
  out["max_residual"] = report.max_residual;
  out["algebra_residual"] = report.algebra_residual;
  Json entries = Json::array();
  for (const auto& e : report.entries)
    entries.push_back({{"N", e.n}, {"sample", e.sample}, {"direction", e.direction}, {"site", e.site}, {"residual", e.residual}});
  out["entries"] = std::move(entries);
  return out;
}

cplx complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    parse_fail(where, "expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
  const Json& rows = array_at(j, where);
  if (rows.empty()) parse_fail(where, "expected a nonempty matrix");
  const size_t cols = array_at(rows[0], child(where, 0)).size();
  if (cols == 0) parse_fail(child(where, 0), "expected a nonempty row");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (size_t r = 0; r < rows.size(); ++r) {
    const std::string rw = child(where, r);
    const Json& row = array_at(rows[r], rw);
    if (row.size() != cols) parse_fail(rw, "ragged matrix row");
    for (size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(row[c], child(rw, c));
  }
  return m;
}

MpsTensor tensor_from_json(const Json& j, const std::string& where) {
  const long long d = integer_at(field(j, "phys_dim", where), child(where, "phys_dim"));
  const long long d1 = integer_at(field(j, "left_dim", where), child(where, "left_dim"));
  const long long d2 = integer_at(field(j, "right_dim", where), child(where, "right_dim"));
  const std::string ew = child(where, "entries");
  const std::vector<Matrix> mats = matrices_from_json(field(j, "entries", where), ew);
  if (static_cast<long long>(mats.size()) != d) schema_fail(ew, "entry count differs from phys_dim");
  for (size_t i = 0; i < mats.size(); ++i)
    if (mats[i].rows() != d1 || mats[i].cols() != d2)
      schema_fail(child(ew, i), "matrix shape differs from left_dim x right_dim");
  return MpsTensor(mats);
}

Rep rep_from_json(const Json& j, const GroupPtr& group, const std::string& where) {
  const std::string label = j.contains("label") ? string_at(j["label"], child(where, "label")) : "";
  const char* key = group->is_finite() ? "matrices" : "generators";
  const std::string mw = child(where, key);
  std::vector<Matrix> mats = matrices_from_json(field(j, key, where), mw);
  if (mats.empty()) parse_fail(mw, "expected at least one matrix");
  if (j.contains("dim") && integer_at(j["dim"], child(where, "dim")) != mats.front().rows())
    schema_fail(child(where, "dim"), "dim differs from the matrix size");
  try {
    return group->is_finite() ? Rep::finite(group, std::move(mats), label) : Rep::lie(group, std::move(mats), label);
  } catch (const Error& e) {
    relocate(e, where);
  }
}

Json group_to_json(const GroupPtr& group) {
  Json out;
  out["name"] = group->name();
  if (!group->is_finite()) return out;
  const FiniteGroup& g = group->finite();
  out["order"] = g.order();
  out["mult_table"] = g.table();
  out["element_names"] = g.element_names();
  return out;
}

GroupPtr group_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) parse_fail(where, "expected an object");
  const std::string name = j.contains("name") ? string_at(j["name"], child(where, "name")) : "custom";
  if (name == "SU2" && !j.contains("mult_table")) return builtin_group("SU2");

  const std::string tw = child(where, "mult_table");
  FiniteGroup::Table table;
  try {
    table = field(j, "mult_table", where).get<FiniteGroup::Table>();
  } catch (const Json::type_error&) {
    parse_fail(tw, "expected a square integer table");
  }
  if (j.contains("order") && integer_at(j["order"], child(where, "order")) != static_cast<long long>(table.size()))
    schema_fail(child(where, "order"), "order differs from the table size");
  std::vector<std::string> names;
  if (j.contains("element_names")) {
    try {
      names = j["element_names"].get<std::vector<std::string>>();
    } catch (const Json::type_error&) {
      parse_fail(child(where, "element_names"), "expected an array of strings");
    }
  }
  FiniteGroup fg;
  try {
    fg = FiniteGroup::validate(table, names);
  } catch (const Error& e) {
    relocate(e, tw);
  }
  try {
    const GroupPtr builtin = builtin_group(name);
    if (builtin->is_finite() && builtin->finite().table() == fg.table()) return builtin;
  } catch (const Error&) {
    // Not a built-in name.
  }
  return Group::finite(std::move(fg), name);
}

Json catalog_to_json(const Catalog& catalog) {
  Json out = group_to_json(catalog.group);
  if (catalog.group->is_finite() && !catalog.irreps.empty() && !catalog.irreps.front().multiplier().is_trivial())
    out["multiplier"] = multiplier_to_json(catalog.irreps.front().multiplier());
  Json irreps = Json::array();
  for (const auto& r : catalog.irreps) irreps.push_back(rep_json_body(r));
  out["irreps"] = std::move(irreps);
  return out;
}

Catalog catalog_from_json(const Json& j, const std::string& where) {
  Catalog cat;
  cat.group = group_from_json(j, where);
  const std::string iw = child(where, "irreps");
  const Json& irreps = array_at(field(j, "irreps", where), iw);
  std::optional<Multiplier> declared;
  if (j.contains("multiplier")) declared = Multiplier{matrix_from_json(j["multiplier"], child(where, "multiplier"))};
  for (size_t k = 0; k < irreps.size(); ++k) {
    cat.irreps.push_back(rep_from_json(irreps[k], cat.group, child(iw, k)));
    if (!cat.group->is_finite()) continue;
    const Multiplier expected = declared ? *declared : Multiplier::trivial(cat.group->finite().order());
    if (!cat.irreps.back().multiplier().approx_equal(expected))
      schema_fail(child(iw, k), "irrep multiplier differs from the declared multiplier");
  }
  return cat;
}

const MpsTensor& Bundle::tensor(const std::string& key) const {
  auto it = tensors.find(key);
  if (it == tensors.end()) throw Error(ErrorKind::SchemaError, "bundle '" + name + "' has no tensor " + key);
  return it->second;
}

const Rep& Bundle::rep(const std::string& key) const {
  auto it = reps.find(key);
  if (it == reps.end()) throw Error(ErrorKind::SchemaError, "bundle '" + name + "' has no representation " + key);
  return it->second;
}

Json bundle_to_json(const Bundle& bundle) {
  Json out;
  out["name"] = bundle.name;
  out["group"] = group_to_json(bundle.group);
  Json tensors = Json::object();
  for (const auto& [k, t] : bundle.tensors) tensors[k] = to_json(t);
  out["tensors"] = std::move(tensors);
  Json reps = Json::object();
  for (const auto& [k, r] : bundle.reps) reps[k] = to_json(r);
  out["reps"] = std::move(reps);
  if (bundle.gauss) out["gauss"] = gauss_to_json(*bundle.gauss);
  out["parameters"] = bundle.parameters;
  return out;
}

Bundle bundle_from_json(const Json& j, const std::string& where) {
  Bundle b;
  b.name = j.contains("name") ? string_at(j["name"], child(where, "name")) : "";
  b.group = group_from_json(field(j, "group", where), child(where, "group"));
  if (j.contains("tensors")) {
    const std::string tw = child(where, "tensors");
    if (!j["tensors"].is_object()) parse_fail(tw, "expected an object");
    for (const auto& [k, v] : j["tensors"].items()) b.tensors.emplace(k, tensor_from_json(v, child(tw, k)));
  }
  if (j.contains("reps")) {
    const std::string rw = child(where, "reps");
    if (!j["reps"].is_object()) parse_fail(rw, "expected an object");
    for (const auto& [k, v] : j["reps"].items()) b.reps.emplace(k, rep_from_json(v, b.group, child(rw, k)));
  }
  if (j.contains("gauss")) b.gauss = gauss_from_json(j["gauss"], child(where, "gauss"));
  if (j.contains("parameters")) b.parameters = j["parameters"];
  return b;
}

Bundle bundle_from_construction(const GaugeConstruction& c) {
  Bundle b;
  b.name = c.name;
  b.group = c.group;
  b.tensors.emplace("A", c.pair.a);
  b.tensors.emplace("B", c.pair.b);
  b.reps.emplace("theta", c.theta);
  b.reps.emplace("R", c.r);
  b.reps.emplace("L", c.l);
  b.reps.emplace("X", c.x);
  b.reps.emplace("Y", c.y);
  Json alpha = Json::object();
  for (const auto& [label, coeffs] : c.alpha) {
    Json list = Json::array();
    for (const auto z : coeffs) list.push_back(to_json(z));
    alpha[label] = std::move(list);
  }
  Json beta = Json::array();
  for (const auto z : c.beta) beta.push_back(to_json(z));
  b.parameters["alpha"] = std::move(alpha);
  b.parameters["beta"] = std::move(beta);
  return b;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path + "#: byte " + std::to_string(e.byte) + ": malformed JSON");
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::SchemaError, path + ": cannot open for writing");
  out << text;
  if (!out) throw Error(ErrorKind::SchemaError, path + ": write failed");
}

}  // namespace gauge_mpv

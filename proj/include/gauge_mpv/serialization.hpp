#pragma once

#include "gauge_mpv/constructors.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>

namespace gauge_mpv {

using Json = nlohmann::json;

// Readers take `where`, the "file#/json/pointer" location of the value, and raise ParseError
// naming it when the value has the wrong shape. Complex numbers are [re, im] pairs.
Json to_json(cplx z);
Json to_json(const Matrix& m);
Json to_json(const MpsTensor& t);
Json to_json(const Rep& rep);
Json to_json(const SymmetryReport& report);
Json to_json(const CanonicalFormResult& cf);
Json to_json(const RepDecomposition& dec, const Catalog& catalog);
Json to_json(const GaussReport& report);

cplx complex_from_json(const Json& j, const std::string& where);
Matrix matrix_from_json(const Json& j, const std::string& where);
MpsTensor tensor_from_json(const Json& j, const std::string& where);
Rep rep_from_json(const Json& j, const GroupPtr& group, const std::string& where);

// {name?, order, mult_table, element_names?, multiplier?, irreps?}, or {name: "SU2"}. Built-in names
// whose table matches resolve to the shared built-in group.
Json group_to_json(const GroupPtr& group);
GroupPtr group_from_json(const Json& j, const std::string& where);

Json catalog_to_json(const Catalog& catalog);
// SchemaError when an irrep carries a multiplier other than the declared one.
Catalog catalog_from_json(const Json& j, const std::string& where);

// Tensors, representations on one group, optional Gauss generators and a free parameter record.
struct Bundle {
  std::string name;
  GroupPtr group;
  std::map<std::string, MpsTensor> tensors;  // "A", "B"
  std::map<std::string, Rep> reps;           // "theta", "R", "L", "X", "Y"
  std::optional<GaussOperators> gauss;
  Json parameters = Json::object();

  const MpsTensor& tensor(const std::string& key) const;
  const Rep& rep(const std::string& key) const;
};

Json bundle_to_json(const Bundle& bundle);
Bundle bundle_from_json(const Json& j, const std::string& where);
Bundle bundle_from_construction(const GaugeConstruction& c);

// ParseError with the path on unreadable or malformed files.
Json read_json_file(const std::string& path);
// Two-space indented dump with a trailing newline.
std::string dump_json(const Json& j);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gauge_mpv

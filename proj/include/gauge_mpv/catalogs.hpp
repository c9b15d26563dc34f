#pragma once

#include "gauge_mpv/representation.hpp"

#include <string>
#include <vector>

namespace gauge_mpv {

// Built-in groups: "Z<n>" (n <= 12), "D<2n>" (n <= 6, elements s^a r^b at index a*n + b),
// "S3", "Q8", "Z2xZ2". Throws SchemaError for unknown names.
GroupPtr builtin_group(const std::string& name);
// Linear irreps of a built-in group, or "Z2xZ2-pauli" for its projective Pauli irrep.
Catalog builtin_catalog(const std::string& name);
std::vector<std::string> builtin_catalog_names();

// Spin j = twice_spin / 2 generators in the basis m = j, j-1, ..., -j.
std::vector<Matrix> spin_generators(int twice_spin);
Rep su2_irrep(int twice_spin);
// Irreps with 2j <= max_twice_spin, labeled "j=0", "j=1/2", "j=1", ...
Catalog su2_catalog(int max_twice_spin);
std::string spin_label(int twice_spin);

}  // namespace gauge_mpv

#pragma once

#include "gauge_mpv/symmetry.hpp"

#include <functional>

namespace gauge_mpv::detail {

std::string element_label(const Group& group, const GroupElement& g);

// B-A-B windows on a chain vector of `pairs` (A, B) sites; psi_of(n) returns the vector for n units
// of pairs_per_unit pairs each and scale_of(n) an upper bound on its norm.
SymmetryReport check_bab_windows(const std::function<Vector(int)>& psi_of, const std::function<double(int)>& scale_of,
                                 int pairs_per_unit, Eigen::Index da,
                                 Eigen::Index db, const Rep& r, const Rep& theta, const Rep& l,
                                 const CheckOptions& options, int n_max);

}  // namespace gauge_mpv::detail

#pragma once

#include "gauge_mpv/linalg.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace gauge_mpv {

class FiniteGroup {
 public:
  using Table = std::vector<std::vector<int>>;

  // Throws NonAssociative, NoIdentity or MissingInverse.
  static FiniteGroup validate(Table table, std::vector<std::string> element_names = {});

  int order() const { return static_cast<int>(table_.size()); }
  int multiply(int a, int b) const { return table_[a][b]; }
  int inverse(int g) const { return inverse_[g]; }
  int identity() const { return identity_; }
  const Table& table() const { return table_; }
  const std::vector<int>& inverse_table() const { return inverse_; }
  const std::vector<std::string>& element_names() const { return names_; }
  std::string element_name(int g) const;
  // Greedy generating set: smallest indices first.
  const std::vector<int>& generators() const { return generators_; }

 private:
  Table table_;
  std::vector<int> inverse_;
  int identity_ = 0;
  std::vector<std::string> names_;
  std::vector<int> generators_;
};

// gamma(g, h) for a finite group, stored as an order x order matrix.
struct Multiplier {
  Matrix values;

  static Multiplier trivial(int order);
  bool is_trivial(double tol = 1e-9) const;
  bool approx_equal(const Multiplier& other, double tol = 1e-9) const;
  Multiplier inverse() const;
  Multiplier times(const Multiplier& other) const;
};

// SU(2) element as exp(i sum_a phi_a tau_a).
using Su2Params = std::array<double, 3>;

Su2Params su2_compose(const Su2Params& g, const Su2Params& h);
Su2Params su2_inverse(const Su2Params& g);
Su2Params su2_sample(Rng& rng);

class Group {
 public:
  static std::shared_ptr<const Group> finite(FiniteGroup g, std::string name);
  static std::shared_ptr<const Group> su2();

  bool is_finite() const { return finite_ != nullptr; }
  const FiniteGroup& finite() const { return *finite_; }
  const std::string& name() const { return name_; }

 private:
  std::shared_ptr<const FiniteGroup> finite_;
  std::string name_;
};

using GroupPtr = std::shared_ptr<const Group>;

// A group element handle: an index for finite groups, parameters for SU(2).
struct GroupElement {
  int index = -1;
  Su2Params params{};
};

// Every element of a finite group, or `samples` seeded draws for SU(2).
std::vector<GroupElement> test_elements(const Group& group, int samples, std::uint64_t seed);

}  // namespace gauge_mpv

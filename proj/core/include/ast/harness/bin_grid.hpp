#pragma once

#include "ast/initial_condition.hpp"

#include <array>
#include <vector>

namespace ast::harness {

struct Bin {
  int index = 0;
  std::array<int, kInitialConditionDim> coords{};  // cell index along each dimension
  InitialConditionSupport support;
  InitialCondition center;
};

/// Equal-width split of each of the five support intervals into b cells,
/// giving b^5 bins. Bin index is row-major with the first coordinate
/// slowest.
class BinGrid {
 public:
  BinGrid(const InitialConditionSupport& support, int bins_per_dim);

  int bins_per_dim() const { return per_dim_; }
  int size() const { return static_cast<int>(bins_.size()); }
  const Bin& operator[](int i) const { return bins_.at(static_cast<std::size_t>(i)); }
  const std::vector<Bin>& bins() const { return bins_; }
  const InitialConditionSupport& support() const { return support_; }

  /// Bin containing s0 (upper edges belong to the last cell); -1 outside.
  int locate(const InitialCondition& s0) const;

 private:
  InitialConditionSupport support_;
  int per_dim_;
  std::vector<Bin> bins_;
};

}  // namespace ast::harness

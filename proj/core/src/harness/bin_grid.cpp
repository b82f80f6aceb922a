#include "ast/harness/bin_grid.hpp"

#include "ast/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ast::harness {

BinGrid::BinGrid(const InitialConditionSupport& support, int bins_per_dim) : support_(support), per_dim_(bins_per_dim) {
  support.validate();
  if (bins_per_dim < 1 || bins_per_dim > 16) throw InvalidInput("bin grid: bins per dimension must lie in [1, 16]");
  int total = 1;
  for (std::size_t d = 0; d < kInitialConditionDim; ++d) total *= bins_per_dim;
  bins_.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    Bin bin;
    bin.index = i;
    int rest = i;
    for (std::size_t d = kInitialConditionDim; d-- > 0;) {
      bin.coords[d] = rest % bins_per_dim;
      rest /= bins_per_dim;
    }
    Vector5 c;
    for (std::size_t d = 0; d < kInitialConditionDim; ++d) {
      const Interval& full = support.dims[d];
      const double w = full.width() / bins_per_dim;
      const double lo = full.lo + w * bin.coords[d];
      // Pin the last edge to the support so no floating gap opens up.
      const double hi = bin.coords[d] + 1 == bins_per_dim ? full.hi : lo + w;
      bin.support.dims[d] = {lo, hi};
      c[static_cast<Eigen::Index>(d)] = 0.5 * (lo + hi);
    }
    bin.center = InitialCondition::from_vector(c);
    bins_.push_back(bin);
  }
}

int BinGrid::locate(const InitialCondition& s0) const {
  if (!support_.contains(s0)) return -1;
  int index = 0;
  for (std::size_t d = 0; d < kInitialConditionDim; ++d) {
    const Interval& full = support_.dims[d];
    int cell = static_cast<int>(std::floor((s0[d] - full.lo) / full.width() * per_dim_));
    cell = std::clamp(cell, 0, per_dim_ - 1);
    index = index * per_dim_ + cell;
  }
  return index;
}

}  // namespace ast::harness

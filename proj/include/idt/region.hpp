#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace idt {

// Axis-aligned box inside [-A, A]^p. Membership is half-open
// (lower <= x < upper) except on the global upper face x_i = A, which is
// closed, so the leaves of any tree partition [-A, A]^p.
struct Region {
  std::vector<double> lower;
  std::vector<double> upper;

  static Region cube(std::size_t p, double bound);

  std::size_t dim() const { return lower.size(); }
  bool contains(std::span<const double> x, double bound) const;

  friend bool operator==(const Region&, const Region&) = default;
};

enum class SplitRule {
  // Cut at the midpoint of the region along the cycled dimension. The only
  // rule implemented; data-dependent separators would be added here.
  midpoint,
};

// Coordinate cut when splitting a node at the given depth: i = depth mod p.
inline std::size_t split_dimension(std::size_t depth, std::size_t p) { return depth % p; }

// Returns (lower child, upper child).
std::pair<Region, Region> split_region(const Region& region, std::size_t depth,
                                       SplitRule rule = SplitRule::midpoint);

// Component-wise clamp into [-bound, bound].
void clip_to_cube(std::span<double> x, double bound);

}  // namespace idt

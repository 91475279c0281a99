#include "idt/label.hpp"
#include "idt/region.hpp"

#include <algorithm>
#include <stdexcept>

namespace idt {

NodeLabel NodeLabel::parse(std::string_view bits) {
  if (bits == "-") return {};
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("node label must be a binary string, got '" +
                                  std::string(bits) + "'");
    }
  }
  return NodeLabel(std::string(bits));
}

NodeLabel NodeLabel::child(int letter) const {
  std::string b = bits_;
  b.push_back(letter ? '1' : '0');
  return NodeLabel(std::move(b));
}

NodeLabel NodeLabel::parent() const {
  if (bits_.empty()) throw std::logic_error("root has no parent");
  return NodeLabel(bits_.substr(0, bits_.size() - 1));
}

NodeLabel NodeLabel::prefix(std::size_t len) const {
  return NodeLabel(bits_.substr(0, std::min(len, bits_.size())));
}

NodeLabel NodeLabel::sibling() const {
  if (bits_.empty()) throw std::logic_error("root has no sibling");
  std::string b = bits_;
  b.back() = b.back() == '1' ? '0' : '1';
  return NodeLabel(std::move(b));
}

std::vector<NodeLabel> NodeLabel::prefixes() const {
  std::vector<NodeLabel> out;
  out.reserve(bits_.size() + 1);
  for (std::size_t i = 0; i <= bits_.size(); ++i) out.push_back(prefix(i));
  return out;
}

bool NodeLabel::is_prefix_of(const NodeLabel& other) const {
  return bits_.size() <= other.bits_.size() &&
         std::equal(bits_.begin(), bits_.end(), other.bits_.begin());
}

Region Region::cube(std::size_t p, double bound) {
  return Region{std::vector<double>(p, -bound), std::vector<double>(p, bound)};
}

bool Region::contains(std::span<const double> x, double bound) const {
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (x[i] < lower[i]) return false;
    if (x[i] >= upper[i] && !(upper[i] >= bound && x[i] <= bound)) return false;
  }
  return true;
}

std::pair<Region, Region> split_region(const Region& region, std::size_t depth, SplitRule rule) {
  switch (rule) {
    case SplitRule::midpoint:
      break;
  }
  const std::size_t i = split_dimension(depth, region.dim());
  const double c = 0.5 * (region.lower[i] + region.upper[i]);
  Region lo = region;
  Region hi = region;
  lo.upper[i] = c;
  hi.lower[i] = c;
  return {std::move(lo), std::move(hi)};
}

void clip_to_cube(std::span<double> x, double bound) {
  for (double& v : x) v = std::clamp(v, -bound, bound);
}

}  // namespace idt

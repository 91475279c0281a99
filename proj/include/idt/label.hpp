#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace idt {

// Binary string addressing a tree node. The root is the empty string;
// letter 0 is the lower child, letter 1 the upper child.
class NodeLabel {
 public:
  NodeLabel() = default;

  static NodeLabel root() { return {}; }
  static NodeLabel parse(std::string_view bits);

  std::size_t length() const { return bits_.size(); }
  bool is_root() const { return bits_.empty(); }
  int letter(std::size_t i) const { return bits_[i] == '1' ? 1 : 0; }

  NodeLabel child(int letter) const;
  NodeLabel parent() const;
  NodeLabel prefix(std::size_t len) const;
  NodeLabel sibling() const;

  // Pre(k): all prefixes from the root up to and including this label,
  // ordered by length.
  std::vector<NodeLabel> prefixes() const;
  bool is_prefix_of(const NodeLabel& other) const;

  // "0101"; the root is the empty string.
  const std::string& bits() const { return bits_; }
  // Text form used in files: "-" stands in for the root.
  std::string to_text() const { return bits_.empty() ? "-" : bits_; }

  friend bool operator==(const NodeLabel&, const NodeLabel&) = default;
  friend auto operator<=>(const NodeLabel& a, const NodeLabel& b) {
    if (a.length() != b.length()) return a.length() <=> b.length();
    return a.bits_ <=> b.bits_;
  }

 private:
  explicit NodeLabel(std::string bits) : bits_(std::move(bits)) {}
  std::string bits_;
};

}  // namespace idt

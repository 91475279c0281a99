#include "idt/tree_io.hpp"

#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "idt/datagen.hpp"
#include "idt/errors.hpp"

namespace idt {

namespace {

void put_vector(std::ostream& os, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ' ' << format_double(v[i]);
}

void put_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << ' ' << format_double(m(r, c));
  }
}

class Reader {
 public:
  explicit Reader(std::string line, std::size_t line_no) : in_(std::move(line)), line_no_(line_no) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) fail("unexpected end of line");
    return w;
  }
  double real() {
    const std::string w = word();
    char* end = nullptr;
    const double v = std::strtod(w.c_str(), &end);
    if (end != w.c_str() + w.size()) fail("bad number '" + w + "'");
    return v;
  }
  long long integer() {
    const std::string w = word();
    char* end = nullptr;
    const long long v = std::strtoll(w.c_str(), &end, 10);
    if (end != w.c_str() + w.size()) fail("bad integer '" + w + "'");
    return v;
  }
  void expect(const std::string& keyword) {
    const std::string w = word();
    if (w != keyword) fail("expected '" + keyword + "', got '" + w + "'");
  }
  void vector(Eigen::VectorXd& v, std::size_t n) {
    v.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = real();
  }
  void matrix(Eigen::MatrixXd& m, std::size_t n) {
    const auto k = static_cast<Eigen::Index>(n);
    m.resize(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      for (Eigen::Index c = 0; c < k; ++c) m(r, c) = real();
    }
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw DataError("checkpoint line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::istringstream in_;
  std::size_t line_no_;
};

}  // namespace

void save_checkpoint(std::ostream& os, const IdtRegressor& regressor) {
  const Tree& tree = regressor.tree();
  const TreeConfig& c = tree.config();
  os << "idt-tree 1\n";
  os << "config " << c.p << ' ' << format_double(c.bound) << ' ' << format_double(c.a) << ' '
     << format_double(c.delta) << ' ' << (c.depth_cap == DepthCap::ceil_log2 ? "ceil_log2" : "unlimited") << ' '
     << (c.clip_node_predictions ? 1 : 0) << ' ' << (tree.growth_enabled() ? 1 : 0) << '\n';
  os << "state " << regressor.name() << ' ' << regressor.steps() << ' '
     << (tree.pending_node() ? static_cast<long long>(*tree.pending_node()) : -1LL) << '\n';
  os << "nodes " << tree.size() << '\n';
  for (NodeId id = 0; id < tree.size(); ++id) {
    const TreeNode& n = tree.node(id);
    os << tree.label(id).to_text() << ' ' << (n.parent == kNoNode ? -1LL : static_cast<long long>(n.parent)) << ' '
       << n.alpha << ' ' << format_double(n.log_loss) << ' ' << format_double(n.log_weight);
    for (double v : n.region.lower) os << ' ' << format_double(v);
    for (double v : n.region.upper) os << ' ' << format_double(v);
    put_matrix(os, n.rls.r_reg);
    put_matrix(os, n.rls.r_inv);
    put_vector(os, n.rls.w);
    put_vector(os, n.rls.xd);
    os << ' ' << format_double(n.rls.dd) << ' ' << n.rls.updates << ' ' << n.buffer.size();
    for (const auto& b : n.buffer) {
      os << ' ' << b.t;
      for (double v : b.x) os << ' ' << format_double(v);
      os << ' ' << (b.d ? format_double(*b.d) : std::string("?"));
    }
    os << '\n';
  }
}

IdtRegressor load_checkpoint(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() {
    if (!std::getline(is, line)) throw DataError("checkpoint truncated after line " + std::to_string(line_no));
    ++line_no;
    return Reader(line, line_no);
  };

  {
    Reader r = next();
    r.expect("idt-tree");
    if (r.integer() != 1) r.fail("unsupported checkpoint version");
  }
  TreeConfig cfg;
  bool growth = true;
  {
    Reader r = next();
    r.expect("config");
    const long long p = r.integer();
    if (p <= 0) r.fail("dimension must be positive");
    cfg.p = static_cast<std::size_t>(p);
    cfg.bound = r.real();
    cfg.a = r.real();
    cfg.delta = r.real();
    const std::string cap = r.word();
    if (cap == "unlimited") {
      cfg.depth_cap = DepthCap::unlimited;
    } else if (cap == "ceil_log2") {
      cfg.depth_cap = DepthCap::ceil_log2;
    } else {
      r.fail("unknown depth cap '" + cap + "'");
    }
    cfg.clip_node_predictions = r.integer() != 0;
    growth = r.integer() != 0;
  }
  std::string name;
  std::uint64_t steps = 0;
  long long pending = -1;
  {
    Reader r = next();
    r.expect("state");
    name = r.word();
    steps = static_cast<std::uint64_t>(r.integer());
    pending = r.integer();
  }
  std::size_t count = 0;
  {
    Reader r = next();
    r.expect("nodes");
    const long long c = r.integer();
    if (c <= 0) r.fail("node count must be positive");
    count = static_cast<std::size_t>(c);
  }

  const std::size_t p = cfg.p;
  std::vector<TreeNode> nodes(count);
  for (std::size_t id = 0; id < count; ++id) {
    Reader r = next();
    TreeNode& n = nodes[id];
    NodeLabel label;
    try {
      label = NodeLabel::parse(r.word());
    } catch (const std::invalid_argument& e) {
      r.fail(e.what());
    }
    const long long parent = r.integer();
    if (label.is_root() != (parent < 0)) r.fail("only the root may lack a parent");
    if (parent >= static_cast<long long>(id)) r.fail("parent must precede its child");
    n.depth = label.length();
    if (parent >= 0) {
      n.parent = static_cast<NodeId>(parent);
      n.letter = label.letter(label.length() - 1);
      if (nodes[n.parent].depth + 1 != n.depth) r.fail("label length disagrees with the parent's depth");
      nodes[n.parent].children[n.letter] = static_cast<NodeId>(id);
    }
    n.alpha = static_cast<int>(r.integer());
    n.log_loss = r.real();
    n.log_weight = r.real();
    n.region.lower.resize(p);
    n.region.upper.resize(p);
    for (auto& v : n.region.lower) v = r.real();
    for (auto& v : n.region.upper) v = r.real();
    n.rls.delta = cfg.delta;
    r.matrix(n.rls.r_reg, p);
    r.matrix(n.rls.r_inv, p);
    r.vector(n.rls.w, p);
    r.vector(n.rls.xd, p);
    n.rls.dd = r.real();
    n.rls.updates = static_cast<std::uint64_t>(r.integer());
    const long long buffered = r.integer();
    for (long long b = 0; b < buffered; ++b) {
      BufferedSample s;
      s.t = static_cast<std::uint64_t>(r.integer());
      s.x.resize(p);
      for (auto& v : s.x) v = r.real();
      const std::string d = r.word();
      if (d != "?") {
        char* end = nullptr;
        s.d = std::strtod(d.c_str(), &end);
        if (end != d.c_str() + d.size()) r.fail("bad buffered target '" + d + "'");
      }
      n.buffer.push_back(std::move(s));
    }
  }
  for (const auto& n : nodes) {
    if ((n.children[0] == kNoNode) != (n.children[1] == kNoNode)) {
      throw DataError("checkpoint has an internal node with a single child");
    }
  }

  std::optional<NodeId> pend;
  if (pending >= 0) pend = static_cast<NodeId>(pending);
  return IdtRegressor(Tree::from_nodes(cfg, std::move(nodes), growth, pend), name, steps);
}

}  // namespace idt

#include "feller/rrp_tree.hpp"

#include <utility>

#include "feller/error.hpp"
#include "feller/format.hpp"
#include "feller/reconstructed.hpp"

namespace feller::rrp {

using detail::require;

namespace {

void require_tree_args(std::int64_t n_leaves, double s, double alpha) {
  require(n_leaves >= 1, "generate_rrp_tree: n_leaves must be >= 1");
  require(s > 0.0, "generate_rrp_tree: s must be > 0");
  require(alpha > 0.0, "generate_rrp_tree: alpha must be > 0");
}

}  // namespace

double CoalescentTree::node_time(std::int64_t id) const {
  require(id >= 0 && id < node_count(), "node_time: id out of range");
  if (id < leaf_count) return 0.0;
  return coalescence_times[static_cast<std::size_t>(id - leaf_count)];
}

std::vector<double> sample_rrp_times(std::int64_t n_leaves, double s,
                                     double alpha, SeededSource& source) {
  require_tree_args(n_leaves, s, alpha);
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(n_leaves - 1));
  double rho = 0.0;
  for (std::int64_t j = n_leaves; j >= 2; --j) {
    rho += source.exponential(static_cast<double>(j));
    times.push_back(tau_of_rho(rho, s, alpha));
  }
  return times;
}

CoalescentTree generate_rrp_tree(std::int64_t n_leaves, double s, double alpha,
                                 SeededSource& source) {
  require_tree_args(n_leaves, s, alpha);
  CoalescentTree tree;
  tree.leaf_count = n_leaves;
  tree.coalescence_times.reserve(static_cast<std::size_t>(n_leaves - 1));
  tree.merges.reserve(static_cast<std::size_t>(n_leaves - 1));

  std::vector<std::int64_t> active(static_cast<std::size_t>(n_leaves));
  for (std::int64_t i = 0; i < n_leaves; ++i) active[static_cast<std::size_t>(i)] = i;

  double rho = 0.0;
  std::int64_t next_id = n_leaves;
  for (std::int64_t j = n_leaves; j >= 2; --j) {
    rho += source.exponential(static_cast<double>(j));
    const auto a = static_cast<std::size_t>(source.uniform_int(0, j - 1));
    auto b = static_cast<std::size_t>(source.uniform_int(0, j - 2));
    if (b >= a) ++b;
    tree.merges.emplace_back(active[a], active[b]);
    tree.coalescence_times.push_back(tau_of_rho(rho, s, alpha));
    // The new node takes slot a; slot b is filled by the last active lineage.
    active[a] = next_id++;
    active[b] = active.back();
    active.pop_back();
  }
  return tree;
}

std::string to_newick(const CoalescentTree& tree) {
  require(tree.leaf_count >= 1, "to_newick: empty tree");
  if (tree.leaf_count == 1) return "1;";

  const std::int64_t root = tree.node_count() - 1;
  std::string out;
  // Iterative post-order walk; state 0 = open, 1 = between children, 2 = close.
  struct Frame {
    std::int64_t id;
    std::int64_t parent;
    int state;
  };
  std::vector<Frame> stack{{root, -1, 0}};
  auto branch = [&](std::int64_t id, std::int64_t parent) {
    if (parent < 0) return;
    out += ':';
    out += format_real(tree.node_time(parent) - tree.node_time(id));
  };
  while (!stack.empty()) {
    Frame& frame = stack.back();
    if (frame.id < tree.leaf_count) {
      out += std::to_string(frame.id + 1);
      branch(frame.id, frame.parent);
      stack.pop_back();
      continue;
    }
    const auto& children =
        tree.merges[static_cast<std::size_t>(frame.id - tree.leaf_count)];
    const std::int64_t id = frame.id;
    if (frame.state == 0) {
      out += '(';
      frame.state = 1;
      stack.push_back({children.first, id, 0});
    } else if (frame.state == 1) {
      out += ',';
      frame.state = 2;
      stack.push_back({children.second, id, 0});
    } else {
      out += ')';
      branch(id, frame.parent);
      stack.pop_back();
    }
  }
  out += ';';
  return out;
}

std::string to_times_csv(const CoalescentTree& tree) {
  std::string out = "event_index,j_before,tau\n";
  for (std::size_t i = 0; i < tree.coalescence_times.size(); ++i) {
    out += std::to_string(i + 1);
    out += ',';
    out += std::to_string(tree.leaf_count - static_cast<std::int64_t>(i));
    out += ',';
    out += format_real(tree.coalescence_times[i]);
    out += '\n';
  }
  return out;
}

}  // namespace feller::rrp

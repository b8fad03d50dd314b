#ifndef FELLER_RRP_TREE_HPP_
#define FELLER_RRP_TREE_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "feller/random.hpp"

namespace feller::rrp {

// A rooted binary coalescent tree with leaves at time 0.
//
// Node ids: leaves are 0..leaf_count-1 (printed as labels 1..leaf_count);
// the internal node created by merge i has id leaf_count + i and sits at
// coalescence_times[i]. The last merge is the root.
struct CoalescentTree {
  std::int64_t leaf_count = 0;
  std::vector<double> coalescence_times;  // increasing, back from present
  std::vector<std::pair<std::int64_t, std::int64_t>> merges;

  std::int64_t node_count() const { return 2 * leaf_count - 1; }
  double node_time(std::int64_t id) const;
};

// Draws the coalescence times of the RRP started from n lineages at tau = s:
// a rate-1 pure-death process in rho time (holding rate j with j lineages)
// mapped back through tau_of_rho. Returns n - 1 increasing times.
std::vector<double> sample_rrp_times(std::int64_t n_leaves, double s,
                                     double alpha, SeededSource& source);

// As sample_rrp_times, with each coalescence merging a uniformly chosen pair.
CoalescentTree generate_rrp_tree(std::int64_t n_leaves, double s, double alpha,
                                 SeededSource& source);

// Newick with branch lengths, terminated by ';'. A single leaf prints "1;".
std::string to_newick(const CoalescentTree& tree);

// CSV with header event_index,j_before,tau; one row per coalescence.
std::string to_times_csv(const CoalescentTree& tree);

}  // namespace feller::rrp

#endif  // FELLER_RRP_TREE_HPP_

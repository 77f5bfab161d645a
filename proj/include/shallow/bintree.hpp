#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace shallow {

// Heap-shaped balanced binary tree on vertices v_0 .. v_{n-1}; edge e_i
// joins v_i to its parent for i in [1, n-1].
struct BalancedTree {
  int n_vertices = 0;

  int parent(int i) const { return (i - 1) / 2; }
  int depth_of_vertex(int i) const;
  int depth() const;  // number of vertex layers
};

BalancedTree build_tree(int n_vertices);

// Edge indices on the path from the root to v_i, listed top-down.
std::vector<int> root_path(const BalancedTree& tree, int i);

// h(d)_i = XOR of d_j over the root-to-v_i path; d and the result are
// bitmasks with d_1 at the most significant of (n-1) bits.
std::uint64_t path_sums(const BalancedTree& tree, std::uint64_t d);
std::uint64_t path_sums_inverse(const BalancedTree& tree, std::uint64_t h);

struct SmallTree {
  int root_vertex = 0;
  std::vector<int> vertices;  // includes root_vertex
  std::vector<int> edges;     // root edge e_{root_vertex} plus internal edges
};

struct TreePartition {
  BalancedTree tree;
  int layer_count = 0;               // D, number of bottom layers
  std::vector<int> top_tree_vertices;  // T_0 (includes v_0)
  std::vector<SmallTree> small_trees;
};

// D = ceil(log2(2 d_locality)); requires the tree to keep at least one
// layer above the small trees.
TreePartition layer_partition(const BalancedTree& tree, int d_locality);

// Output-variable ids: edge d_i -> i-1, vertex x_i -> (n-1) + (i-1).
// Matches the (d, x) output string order bit by bit.
int edge_var(const BalancedTree& tree, int i);
int vertex_var(const BalancedTree& tree, int i);
int var_count(const BalancedTree& tree);

// Which tree of {T_0} ∪ smalls owns each variable: -1 for T_0, else the
// small-tree index.
std::vector<int> owning_tree_of_vars(const TreePartition& partition);

// Union of the complete variable sets of every tree touched by `vars`.
std::vector<int> tree_neighborhood(const TreePartition& partition,
                                   std::span<const int> vars);

struct ForestPartition {
  std::vector<std::vector<int>> forests;  // F_0 first, then F_1 .. F_s
  std::vector<int> controlling_inputs;    // w_i for F_i, i >= 1
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

ValidationReport validate_forest_partition(const ForestPartition& fp,
                                           const TreePartition& tp);

std::string tree_partition_to_json(const TreePartition& tp);
std::string forest_partition_to_json(const ForestPartition& fp);

}  // namespace shallow

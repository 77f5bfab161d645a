#include <algorithm>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "shallow/bintree.hpp"

using namespace shallow;

TEST_CASE("build_tree shapes") {
  CHECK_THROWS_AS(build_tree(1), std::invalid_argument);
  const BalancedTree t2 = build_tree(2);
  CHECK(t2.parent(1) == 0);
  const BalancedTree t4 = build_tree(4);
  CHECK(t4.parent(3) == 1);  // v_3 hangs off v_1
  const BalancedTree t7 = build_tree(7);
  CHECK(t7.depth() == 3);
  for (int v = 3; v <= 6; ++v) CHECK(t7.depth_of_vertex(v) == 2);
}

TEST_CASE("root_path spot values") {
  const BalancedTree t4 = build_tree(4);
  CHECK(root_path(t4, 3) == std::vector<int>{1, 3});
  CHECK(root_path(t4, 2) == std::vector<int>{2});
  const BalancedTree t7 = build_tree(7);
  CHECK(root_path(t7, 6) == std::vector<int>{2, 6});
  CHECK_THROWS_AS(root_path(t4, 0), std::out_of_range);
  CHECK_THROWS_AS(root_path(t4, 4), std::out_of_range);
}

TEST_CASE("path_sums hand trace and linearity") {
  const BalancedTree t4 = build_tree(4);
  CHECK(path_sums(t4, 0) == 0);
  // d = (1,0,1) -> h = (1,0,0): h_3 = d_3 xor d_1 = 0
  CHECK(path_sums(t4, 0b101) == 0b100);

  // linearity h(d xor d') = h(d) xor h(d'), exhaustive for n <= 6
  for (int n = 2; n <= 6; ++n) {
    const BalancedTree t = build_tree(n);
    const std::uint64_t lim = std::uint64_t{1} << (n - 1);
    for (std::uint64_t a = 0; a < lim; ++a)
      for (std::uint64_t b = 0; b < lim; ++b)
        CHECK(path_sums(t, a ^ b) == (path_sums(t, a) ^ path_sums(t, b)));
  }
}

TEST_CASE("path_sums is a bijection with the reconstruction inverse") {
  const BalancedTree t4 = build_tree(4);
  std::set<std::uint64_t> images;
  for (std::uint64_t d = 0; d < 8; ++d) {
    const std::uint64_t h = path_sums(t4, d);
    images.insert(h);
    CHECK(path_sums_inverse(t4, h) == d);
  }
  CHECK(images.size() == 8);
}

TEST_CASE("layer_partition shapes") {
  // n = 15, d = 2 (D = 2): top two layers, four small trees of 3 vertices
  const BalancedTree t15 = build_tree(15);
  const TreePartition tp = layer_partition(t15, 2);
  CHECK(tp.layer_count == 2);
  CHECK(tp.top_tree_vertices == std::vector<int>{0, 1, 2});
  REQUIRE(tp.small_trees.size() == 4);
  for (const SmallTree& st : tp.small_trees) {
    CHECK(st.vertices.size() == 3);
    CHECK(st.edges.size() == 3);  // two internal edges plus the root edge
  }

  // n = 7, d = 1 (D = 1): four singleton trees with their parent edges
  const TreePartition tp7 = layer_partition(build_tree(7), 1);
  CHECK(tp7.layer_count == 1);
  REQUIRE(tp7.small_trees.size() == 4);
  for (const SmallTree& st : tp7.small_trees) {
    CHECK(st.vertices.size() == 1);
    CHECK(st.edges == std::vector<int>{st.root_vertex});
  }

  // too shallow
  CHECK_THROWS_AS(layer_partition(build_tree(7), 4), std::invalid_argument);
}

TEST_CASE("every edge and vertex lands in exactly one tree") {
  for (int n : {7, 15, 31, 20, 25}) {
    const BalancedTree t = build_tree(n);
    int d_loc = 2;
    if (t.depth() <= 2) continue;
    const TreePartition tp = layer_partition(t, d_loc);
    std::vector<int> owner = owning_tree_of_vars(tp);
    std::set<int> covered;
    for (int v : tp.top_tree_vertices)
      if (v >= 1) {
        covered.insert(vertex_var(t, v));
        covered.insert(edge_var(t, v));
      }
    for (const SmallTree& st : tp.small_trees) {
      CHECK(static_cast<int>(st.vertices.size()) <= (1 << tp.layer_count) - 1);
      for (int v : st.vertices) CHECK(covered.insert(vertex_var(t, v)).second);
      for (int e : st.edges) CHECK(covered.insert(edge_var(t, e)).second);
    }
    CHECK(static_cast<int>(covered.size()) == var_count(t));
  }
}

TEST_CASE("tree_neighborhood is idempotent and expands whole trees") {
  const TreePartition tp = layer_partition(build_tree(15), 2);
  CHECK(tree_neighborhood(tp, std::vector<int>{}).empty());

  // one vertex variable of the small tree rooted at v_3 pulls in the whole tree
  const BalancedTree& t = tp.tree;
  const std::vector<int> nb = tree_neighborhood(tp, std::vector<int>{vertex_var(t, 7)});
  std::set<int> expect;
  for (int v : {3, 7, 8}) {
    expect.insert(vertex_var(t, v));
    expect.insert(edge_var(t, v));
  }
  CHECK(std::set<int>(nb.begin(), nb.end()) == expect);

  // idempotence over all singleton seeds
  for (int v = 0; v < var_count(t); ++v) {
    const std::vector<int> once = tree_neighborhood(tp, std::vector<int>{v});
    CHECK(tree_neighborhood(tp, once) == once);
  }
}

TEST_CASE("validate_forest_partition accepts F_0-everything and flags splits") {
  const TreePartition tp = layer_partition(build_tree(15), 2);
  ForestPartition all;
  all.forests.emplace_back();
  for (int v = 0; v < var_count(tp.tree); ++v) all.forests[0].push_back(v);
  CHECK(validate_forest_partition(all, tp).ok);

  // split one small tree across two forests
  ForestPartition split = all;
  const SmallTree& st = tp.small_trees[1];
  const int moved = vertex_var(tp.tree, st.vertices[0]);
  split.forests[0].erase(
      std::find(split.forests[0].begin(), split.forests[0].end(), moved));
  split.forests.push_back({moved});
  split.controlling_inputs.push_back(0);
  const ValidationReport rep = validate_forest_partition(split, tp);
  CHECK_FALSE(rep.ok);
  bool names_tree = false;
  for (const std::string& v : rep.violations)
    if (v.find("T_2") != std::string::npos) names_tree = true;
  CHECK(names_tree);
}

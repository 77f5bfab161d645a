#include "shallow/bintree.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace shallow {

int BalancedTree::depth_of_vertex(int i) const {
  int d = 0;
  while (i > 0) {
    i = parent(i);
    ++d;
  }
  return d;
}

int BalancedTree::depth() const { return depth_of_vertex(n_vertices - 1) + 1; }

BalancedTree build_tree(int n_vertices) {
  if (n_vertices < 2) throw std::invalid_argument("build_tree: need at least 2 vertices");
  return BalancedTree{n_vertices};
}

std::vector<int> root_path(const BalancedTree& tree, int i) {
  if (i < 1 || i >= tree.n_vertices) throw std::out_of_range("root_path: vertex out of range");
  std::vector<int> edges;
  for (int v = i; v > 0; v = tree.parent(v)) edges.push_back(v);
  std::reverse(edges.begin(), edges.end());
  return edges;
}

std::uint64_t path_sums(const BalancedTree& tree, std::uint64_t d) {
  const int n = tree.n_vertices;
  const int bits = n - 1;
  if (bits < 64 && (d >> bits) != 0) throw std::invalid_argument("path_sums: d too wide");
  std::uint64_t h = 0;
  for (int i = 1; i < n; ++i) {
    const int p = tree.parent(i);
    const std::uint64_t di = d >> (bits - i) & 1;
    const std::uint64_t hp = p >= 1 ? (h >> (bits - p) & 1) : 0;
    h |= (di ^ hp) << (bits - i);
  }
  return h;
}

std::uint64_t path_sums_inverse(const BalancedTree& tree, std::uint64_t h) {
  const int n = tree.n_vertices;
  const int bits = n - 1;
  std::uint64_t d = 0;
  for (int i = 1; i < n; ++i) {
    const int p = tree.parent(i);
    const std::uint64_t hi = h >> (bits - i) & 1;
    const std::uint64_t hp = p >= 1 ? (h >> (bits - p) & 1) : 0;
    d |= (hi ^ hp) << (bits - i);
  }
  return d;
}

TreePartition layer_partition(const BalancedTree& tree, int d_locality) {
  if (d_locality < 1) throw std::invalid_argument("layer_partition: locality must be >= 1");
  int layers_needed = 1;  // D = ceil(log2(2d))
  while ((1 << layers_needed) < 2 * d_locality) ++layers_needed;
  const int total_layers = tree.depth();
  if (total_layers <= layers_needed)
    throw std::invalid_argument("layer_partition: tree too shallow for this locality");

  TreePartition tp;
  tp.tree = tree;
  tp.layer_count = layers_needed;
  const int cut = total_layers - layers_needed;  // depths < cut are in T_0
  for (int v = 0; v < tree.n_vertices; ++v)
    if (tree.depth_of_vertex(v) < cut) tp.top_tree_vertices.push_back(v);

  for (int r = 0; r < tree.n_vertices; ++r) {
    if (tree.depth_of_vertex(r) != cut) continue;
    SmallTree st;
    st.root_vertex = r;
    // collect the whole subtree below r
    std::vector<int> stack = {r};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      st.vertices.push_back(v);
      st.edges.push_back(v);  // edge to v's parent; for r this is the root edge
      for (int c : {2 * v + 1, 2 * v + 2})
        if (c < tree.n_vertices) stack.push_back(c);
    }
    std::sort(st.vertices.begin(), st.vertices.end());
    std::sort(st.edges.begin(), st.edges.end());
    tp.small_trees.push_back(std::move(st));
  }
  return tp;
}

int edge_var(const BalancedTree& tree, int i) {
  if (i < 1 || i >= tree.n_vertices) throw std::out_of_range("edge_var");
  return i - 1;
}

int vertex_var(const BalancedTree& tree, int i) {
  if (i < 1 || i >= tree.n_vertices) throw std::out_of_range("vertex_var");
  return tree.n_vertices - 1 + (i - 1);
}

int var_count(const BalancedTree& tree) { return 2 * (tree.n_vertices - 1); }

std::vector<int> owning_tree_of_vars(const TreePartition& partition) {
  const BalancedTree& tree = partition.tree;
  std::vector<int> owner(static_cast<std::size_t>(var_count(tree)), -1);
  for (std::size_t t = 0; t < partition.small_trees.size(); ++t) {
    const SmallTree& st = partition.small_trees[t];
    for (int v : st.vertices) owner[static_cast<std::size_t>(vertex_var(tree, v))] = static_cast<int>(t);
    for (int e : st.edges) owner[static_cast<std::size_t>(edge_var(tree, e))] = static_cast<int>(t);
  }
  return owner;
}

std::vector<int> tree_neighborhood(const TreePartition& partition,
                                   std::span<const int> vars) {
  const std::vector<int> owner = owning_tree_of_vars(partition);
  std::set<int> trees;
  for (int v : vars) {
    if (v < 0 || v >= static_cast<int>(owner.size()))
      throw std::out_of_range("tree_neighborhood: variable id out of range");
    trees.insert(owner[static_cast<std::size_t>(v)]);
  }
  std::set<int> out;
  const BalancedTree& tree = partition.tree;
  for (int t : trees) {
    if (t == -1) {
      // T_0 owns the non-root top vertices and the edges to their parents
      for (int v : partition.top_tree_vertices) {
        if (v < 1) continue;
        out.insert(vertex_var(tree, v));
        out.insert(edge_var(tree, v));
      }
    } else {
      const SmallTree& st = partition.small_trees[static_cast<std::size_t>(t)];
      for (int v : st.vertices) out.insert(vertex_var(tree, v));
      for (int e : st.edges) out.insert(edge_var(tree, e));
    }
  }
  return {out.begin(), out.end()};
}

ValidationReport validate_forest_partition(const ForestPartition& fp,
                                           const TreePartition& tp) {
  ValidationReport rep;
  const int nvars = var_count(tp.tree);
  std::vector<int> seen(static_cast<std::size_t>(nvars), -2);
  for (std::size_t f = 0; f < fp.forests.size(); ++f) {
    for (int v : fp.forests[f]) {
      if (v < 0 || v >= nvars) {
        rep.ok = false;
        rep.violations.push_back("variable id out of range: " + std::to_string(v));
        continue;
      }
      if (seen[static_cast<std::size_t>(v)] != -2) {
        rep.ok = false;
        rep.violations.push_back("variable " + std::to_string(v) + " appears in F_" +
                                 std::to_string(seen[static_cast<std::size_t>(v)]) + " and F_" +
                                 std::to_string(f));
      }
      seen[static_cast<std::size_t>(v)] = static_cast<int>(f);
    }
  }
  for (int v = 0; v < nvars; ++v)
    if (seen[static_cast<std::size_t>(v)] == -2) {
      rep.ok = false;
      rep.violations.push_back("variable " + std::to_string(v) + " not covered");
    }

  // each F_i, i >= 1, must be a union of whole trees
  for (std::size_t f = 1; f < fp.forests.size(); ++f) {
    std::vector<int> nb = tree_neighborhood(tp, fp.forests[f]);
    std::vector<int> sorted = fp.forests[f];
    std::sort(sorted.begin(), sorted.end());
    if (nb != sorted) {
      const std::vector<int> owner = owning_tree_of_vars(tp);
      std::set<int> trees;
      for (int v : fp.forests[f]) trees.insert(owner[static_cast<std::size_t>(v)]);
      std::string names;
      for (int t : trees) names += (t == -1 ? std::string(" T_0") : " T_" + std::to_string(t + 1));
      rep.ok = false;
      rep.violations.push_back("F_" + std::to_string(f) +
                               " is not a union of whole trees (touches" + names + ")");
    }
  }

  // T_0's variables must sit in F_0
  if (!fp.forests.empty()) {
    std::set<int> f0(fp.forests[0].begin(), fp.forests[0].end());
    for (int v : tp.top_tree_vertices) {
      if (v < 1) continue;
      for (int var : {vertex_var(tp.tree, v), edge_var(tp.tree, v)})
        if (!f0.count(var)) {
          rep.ok = false;
          rep.violations.push_back("top-tree variable " + std::to_string(var) +
                                   " missing from F_0");
        }
    }
  } else {
    rep.ok = false;
    rep.violations.push_back("no forests given");
  }
  return rep;
}

std::string tree_partition_to_json(const TreePartition& tp) {
  nlohmann::json j;
  j["n_vertices"] = tp.tree.n_vertices;
  j["layer_count"] = tp.layer_count;
  j["top_tree_vertices"] = tp.top_tree_vertices;
  nlohmann::json smalls = nlohmann::json::array();
  for (const SmallTree& st : tp.small_trees)
    smalls.push_back({{"root", st.root_vertex}, {"vertices", st.vertices}, {"edges", st.edges}});
  j["small_trees"] = smalls;
  return j.dump();
}

std::string forest_partition_to_json(const ForestPartition& fp) {
  nlohmann::json j;
  j["forests"] = fp.forests;
  j["controlling_inputs"] = fp.controlling_inputs;
  return j.dump();
}

}  // namespace shallow

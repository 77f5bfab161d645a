#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "shallow/bintree.hpp"
#include "shallow/pmf.hpp"

namespace shallow {

// One output bit of a local function: which inputs it reads and its truth
// table (2^|deps| bits, first dep = most significant table index bit).
struct OutputSpec {
  std::vector<int> deps;
  std::vector<std::uint8_t> table;
};

// f : {0,1}^l -> {0,1}^m with every output reading at most `locality` inputs.
struct LocalFunction {
  int n_inputs = 0;
  int locality = 0;
  std::vector<OutputSpec> outputs;

  int n_outputs() const { return static_cast<int>(outputs.size()); }
  std::string to_json() const;
  static LocalFunction from_json(const std::string& text);
};

void validate_local_function(const LocalFunction& f);

// Inputs and outputs are bitmasks, first bit most significant.
std::uint64_t evaluate(const LocalFunction& f, std::uint64_t input);

// Exact output distribution under i.i.d. inputs with Pr[1] = 1/2 - bias.
Pmf output_pmf(const LocalFunction& f, double bias = 0.0);

struct DependencyGraph {
  std::vector<std::vector<int>> outputs_of_input;
  std::vector<std::vector<int>> inputs_of_output;
};

DependencyGraph dependency_graph(const LocalFunction& f);

struct Block {
  int controlling_input = -1;
  std::vector<int> outputs;
};

// f(x, y) split into blocks g_i(x_i, y), a residual h(y) and the final
// bit, which is always routed into the residual.
struct BlockDecomposition {
  std::vector<int> chosen_inputs;      // x-part, block i owns chosen_inputs[i]
  std::vector<Block> blocks;
  std::vector<int> residual_outputs;   // h(y), final bit included
  int final_bit_index = -1;
};

// Greedy single-input blocks: pick the lowest-index usable input, claim
// every output it feeds, then retire all inputs feeding those outputs.
// Inputs feeding the final bit are retired up front so the final bit stays
// a function of y.
BlockDecomposition viola_block_decomposition(const LocalFunction& f);

// Tree-aware variant: blocks claim whole small trees; outputs in the top
// tree (and the final bit) are forced into the residual.
std::pair<BlockDecomposition, ForestPartition> tree_forest_decomposition(
    const LocalFunction& f, const BalancedTree& tree, const TreePartition& partition);

// g_i(0, y) == g_i(1, y)? `y` is a full-width input word; chosen-input bits
// in it are ignored.
bool block_is_y_fixed(const LocalFunction& f, const BlockDecomposition& decomp, int i,
                      std::uint64_t y);

// Signed vertex sum of forest i under assignment z (a (d, x) bitmask).
long long forest_block_sum(std::uint64_t z, const ForestPartition& fp,
                           const TreePartition& tp, int i);

// Does block i attain the minimum over all reassignments of its own
// variables? Evaluated both by brute minimum and by the closed-form unique
// minimizer; throws if they ever disagree.
bool block_is_minimal(std::uint64_t z, const ForestPartition& fp, const TreePartition& tp,
                      int i);
bool block_is_minimal_brute(std::uint64_t z, const ForestPartition& fp,
                            const TreePartition& tp, int i);
bool block_is_minimal_closed_form(std::uint64_t z, const ForestPartition& fp,
                                  const TreePartition& tp, int i);

enum TestLabel : unsigned {
  kTestZeros = 1u << 0,    // T0
  kTestFixed = 1u << 1,    // TF
  kTestMinimal = 1u << 2,  // TM
  kTestWrongBit = 1u << 3, // TS
};

enum class TestVariant { MAJMOD, TREE };

struct StatTestConfig {
  TestVariant variant = TestVariant::MAJMOD;
  long long n0 = 0;
  long long nf = 0;
  long long nm = 0;  // TREE only
  int p = 3;
  double input_bias = 0.0;  // weights the TF preimage mass
};

long long threshold_from_alpha(int n, double alpha, double factor);

// A prepared statistical test: the decomposition plus cached structures
// (notably the exhaustive TF image set).
class StatTest {
 public:
  StatTest(StatTestConfig cfg, LocalFunction f);                       // MAJMOD
  StatTest(StatTestConfig cfg, LocalFunction f, BalancedTree tree,
           TreePartition partition);                                    // TREE

  unsigned membership(std::uint64_t z) const;
  double pass_probability_of_function(double bias = 0.0) const;
  double pass_probability_of_pmf(const Pmf& target) const;

  const BlockDecomposition& decomposition() const { return decomp_; }
  const ForestPartition& forest() const { return forest_; }
  const StatTestConfig& config() const { return cfg_; }
  int output_bits() const;

 private:
  void build_fixed_image_set();
  int target_bit(std::uint64_t z) const;

  StatTestConfig cfg_;
  LocalFunction f_;
  BalancedTree tree_;
  TreePartition partition_;
  BlockDecomposition decomp_;
  ForestPartition forest_;
  std::unordered_set<std::uint64_t> fixed_images_;
};

struct SearchResult {
  double min_tvd = 1.0;
  LocalFunction witness;
  std::uint64_t space_size = 0;
  double wall_seconds = 0.0;
};

// Global minimum of TVD(f(source), target) over all functions whose every
// output reads exactly d inputs (canonical lexicographic enumeration,
// ties resolved by enumeration order). Throws if the space exceeds 1e9.
SearchResult brute_force_min_tvd(int n_out, int d, int l, const Pmf& target,
                                 double bias = 0.0, int threads = 1);

std::vector<std::uint8_t> biased_input_stream(double bias, int count, std::uint64_t seed);

}  // namespace shallow

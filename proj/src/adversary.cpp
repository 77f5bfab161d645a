#include "shallow/adversary.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "shallow/targets.hpp"

namespace shallow {

void validate_local_function(const LocalFunction& f) {
  if (f.n_inputs < 0 || f.n_inputs > 24)
    throw std::invalid_argument("local function: input count outside [0, 24]");
  for (const OutputSpec& o : f.outputs) {
    if (static_cast<int>(o.deps.size()) > f.locality)
      throw std::invalid_argument("local function: dependency set exceeds declared locality");
    for (int d : o.deps)
      if (d < 0 || d >= f.n_inputs)
        throw std::invalid_argument("local function: dependency index out of range");
    if (o.table.size() != (std::size_t{1} << o.deps.size()))
      throw std::invalid_argument("local function: truth table size mismatch");
  }
}

std::uint64_t evaluate(const LocalFunction& f, std::uint64_t input) {
  const int l = f.n_inputs;
  std::uint64_t out = 0;
  for (const OutputSpec& o : f.outputs) {
    std::size_t idx = 0;
    for (int d : o.deps) idx = (idx << 1) | (input >> (l - 1 - d) & 1);
    out = (out << 1) | (o.table[idx] & 1);
  }
  return out;
}

Pmf output_pmf(const LocalFunction& f, double bias) {
  if (f.n_inputs > 24) throw std::invalid_argument("output_pmf: too many inputs");
  if (std::abs(bias) > 0.5) throw std::invalid_argument("output_pmf: |bias| > 1/2");
  const double p1 = 0.5 - bias;
  const double p0 = 0.5 + bias;
  Pmf pmf(f.n_outputs());
  const std::uint64_t total = std::uint64_t{1} << f.n_inputs;
  for (std::uint64_t u = 0; u < total; ++u) {
    const int ones = std::popcount(u);
    const double w = std::pow(p1, ones) * std::pow(p0, f.n_inputs - ones);
    if (w > 0.0) pmf.add(evaluate(f, u), w);
  }
  return pmf;
}

DependencyGraph dependency_graph(const LocalFunction& f) {
  DependencyGraph g;
  g.outputs_of_input.resize(static_cast<std::size_t>(f.n_inputs));
  g.inputs_of_output.resize(static_cast<std::size_t>(f.n_outputs()));
  for (int o = 0; o < f.n_outputs(); ++o) {
    for (int d : f.outputs[static_cast<std::size_t>(o)].deps) {
      g.outputs_of_input[static_cast<std::size_t>(d)].push_back(o);
      g.inputs_of_output[static_cast<std::size_t>(o)].push_back(d);
    }
  }
  return g;
}

BlockDecomposition viola_block_decomposition(const LocalFunction& f) {
  validate_local_function(f);
  const DependencyGraph g = dependency_graph(f);
  const int n_out = f.n_outputs();
  const int final_bit = n_out - 1;

  std::vector<bool> input_retired(static_cast<std::size_t>(f.n_inputs), false);
  for (int d : g.inputs_of_output[static_cast<std::size_t>(final_bit)])
    input_retired[static_cast<std::size_t>(d)] = true;

  BlockDecomposition dec;
  dec.final_bit_index = final_bit;
  std::vector<bool> output_claimed(static_cast<std::size_t>(n_out), false);
  output_claimed[static_cast<std::size_t>(final_bit)] = true;

  for (int u = 0; u < f.n_inputs; ++u) {
    if (input_retired[static_cast<std::size_t>(u)]) continue;
    std::vector<int> outs;
    for (int o : g.outputs_of_input[static_cast<std::size_t>(u)])
      if (!output_claimed[static_cast<std::size_t>(o)]) outs.push_back(o);
    if (outs.empty()) continue;
    for (int o : outs) {
      output_claimed[static_cast<std::size_t>(o)] = true;
      for (int d : g.inputs_of_output[static_cast<std::size_t>(o)])
        input_retired[static_cast<std::size_t>(d)] = true;
    }
    dec.chosen_inputs.push_back(u);
    dec.blocks.push_back({u, std::move(outs)});
  }
  for (int o = 0; o < n_out; ++o)
    if (!output_claimed[static_cast<std::size_t>(o)] || o == final_bit)
      dec.residual_outputs.push_back(o);
  return dec;
}

std::pair<BlockDecomposition, ForestPartition> tree_forest_decomposition(
    const LocalFunction& f, const BalancedTree& tree, const TreePartition& partition) {
  validate_local_function(f);
  const int nvars = var_count(tree);
  if (f.n_outputs() != nvars + 1)
    throw std::invalid_argument("tree_forest_decomposition: output count must be 2n-1");
  const DependencyGraph g = dependency_graph(f);
  const int final_bit = nvars;

  // fix every input feeding the top tree or the final bit
  std::vector<bool> fixed(static_cast<std::size_t>(f.n_inputs), false);
  auto fix_inputs_of_output = [&](int o) {
    for (int d : g.inputs_of_output[static_cast<std::size_t>(o)])
      fixed[static_cast<std::size_t>(d)] = true;
  };
  fix_inputs_of_output(final_bit);
  for (int v : partition.top_tree_vertices) {
    if (v < 1) continue;
    fix_inputs_of_output(vertex_var(tree, v));
    fix_inputs_of_output(edge_var(tree, v));
  }

  // degree cap from the counting argument
  const int degree_cap = 4 * std::max(1, f.locality);
  std::vector<bool> usable(static_cast<std::size_t>(f.n_inputs), false);
  for (int u = 0; u < f.n_inputs; ++u)
    usable[static_cast<std::size_t>(u)] =
        !fixed[static_cast<std::size_t>(u)] &&
        static_cast<int>(g.outputs_of_input[static_cast<std::size_t>(u)].size()) <= degree_cap;

  const std::vector<int> owner = owning_tree_of_vars(partition);
  BlockDecomposition dec;
  dec.final_bit_index = final_bit;
  ForestPartition fp;
  fp.forests.emplace_back();  // F_0 placeholder
  std::vector<bool> var_claimed(static_cast<std::size_t>(nvars), false);

  for (int u = 0; u < f.n_inputs; ++u) {
    if (!usable[static_cast<std::size_t>(u)]) continue;
    // the forest this input controls: whole trees touched by its outputs
    std::vector<int> touched;
    for (int o : g.outputs_of_input[static_cast<std::size_t>(u)])
      if (o != final_bit) touched.push_back(o);
    std::vector<int> forest = tree_neighborhood(partition, touched);
    if (forest.empty()) continue;
    bool clash = false;
    for (int v : forest)
      if (var_claimed[static_cast<std::size_t>(v)]) { clash = true; break; }
    if (clash) continue;

    for (int v : forest) var_claimed[static_cast<std::size_t>(v)] = true;
    // retire every input adjacent to the claimed forest
    for (int v : forest)
      for (int d : g.inputs_of_output[static_cast<std::size_t>(v)])
        usable[static_cast<std::size_t>(d)] = false;
    usable[static_cast<std::size_t>(u)] = false;

    dec.chosen_inputs.push_back(u);
    dec.blocks.push_back({u, forest});
    fp.forests.push_back(forest);
    fp.controlling_inputs.push_back(u);
  }

  for (int v = 0; v < nvars; ++v)
    if (!var_claimed[static_cast<std::size_t>(v)]) fp.forests[0].push_back(v);
  dec.residual_outputs = fp.forests[0];
  dec.residual_outputs.push_back(final_bit);
  return {dec, fp};
}

bool block_is_y_fixed(const LocalFunction& f, const BlockDecomposition& decomp, int i,
                      std::uint64_t y) {
  if (i < 0 || i >= static_cast<int>(decomp.blocks.size()))
    throw std::out_of_range("block_is_y_fixed: bad block index");
  const Block& blk = decomp.blocks[static_cast<std::size_t>(i)];
  const int l = f.n_inputs;
  const std::uint64_t bit = std::uint64_t{1} << (l - 1 - blk.controlling_input);
  const std::uint64_t u0 = y & ~bit;
  const std::uint64_t u1 = y | bit;
  const std::uint64_t z0 = evaluate(f, u0);
  const std::uint64_t z1 = evaluate(f, u1);
  const int n_out = f.n_outputs();
  for (int o : blk.outputs)
    if (((z0 >> (n_out - 1 - o)) & 1) != ((z1 >> (n_out - 1 - o)) & 1)) return false;
  return true;
}

namespace {

int var_bit(std::uint64_t z, int nvars, int v) { return z >> (nvars - 1 - v) & 1; }

}  // namespace

long long forest_block_sum(std::uint64_t z, const ForestPartition& fp,
                           const TreePartition& tp, int i) {
  if (i < 1 || i >= static_cast<int>(fp.forests.size()))
    throw std::out_of_range("forest_block_sum: block index must be >= 1");
  const BalancedTree& tree = tp.tree;
  const int n = tree.n_vertices;
  const int nvars = var_count(tree);
  // h(d) needs the full edge assignment (path runs through T_0)
  std::uint64_t d = 0;
  for (int e = 1; e < n; ++e)
    d |= static_cast<std::uint64_t>(var_bit(z, nvars, edge_var(tree, e))) << (n - 1 - e);
  const std::uint64_t h = path_sums(tree, d);
  long long sum = 0;
  for (int v : fp.forests[static_cast<std::size_t>(i)]) {
    if (v < n - 1) continue;  // edge variable
    const int vertex = v - (n - 1) + 1;
    if (var_bit(z, nvars, v)) sum += (h >> (n - 1 - vertex) & 1) ? -1 : 1;
  }
  return sum;
}

bool block_is_minimal_brute(std::uint64_t z, const ForestPartition& fp,
                            const TreePartition& tp, int i) {
  const std::vector<int>& vars = fp.forests[static_cast<std::size_t>(i)];
  if (vars.size() > 20) throw std::invalid_argument("block_is_minimal_brute: block too large");
  const int nvars = var_count(tp.tree);
  const long long own = forest_block_sum(z, fp, tp, i);
  long long best = own;
  for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << vars.size()); ++pat) {
    std::uint64_t zz = z;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      const std::uint64_t bit = std::uint64_t{1} << (nvars - 1 - vars[j]);
      if (pat >> j & 1)
        zz |= bit;
      else
        zz &= ~bit;
    }
    best = std::min(best, forest_block_sum(zz, fp, tp, i));
  }
  return own == best;
}

bool block_is_minimal_closed_form(std::uint64_t z, const ForestPartition& fp,
                                  const TreePartition& tp, int i) {
  const BalancedTree& tree = tp.tree;
  const int n = tree.n_vertices;
  const int nvars = var_count(tree);
  const std::vector<int> owner = owning_tree_of_vars(tp);
  std::set<int> trees;
  for (int v : fp.forests[static_cast<std::size_t>(i)]) trees.insert(owner[static_cast<std::size_t>(v)]);

  std::uint64_t d = 0;
  for (int e = 1; e < n; ++e)
    d |= static_cast<std::uint64_t>(var_bit(z, nvars, edge_var(tree, e))) << (n - 1 - e);
  const std::uint64_t h = path_sums(tree, d);

  // per small tree: root path sign must be -1, every vertex 1, interior
  // edges 0
  for (int t : trees) {
    if (t < 0) return false;  // forests never own T_0; treat as non-minimal
    const SmallTree& st = tp.small_trees[static_cast<std::size_t>(t)];
    if ((h >> (n - 1 - st.root_vertex) & 1) != 1) return false;
    for (int v : st.vertices)
      if (var_bit(z, nvars, vertex_var(tree, v)) != 1) return false;
    for (int e : st.edges) {
      if (e == st.root_vertex) continue;  // the root edge is free via h
      if (var_bit(z, nvars, edge_var(tree, e)) != 0) return false;
    }
  }
  return true;
}

bool block_is_minimal(std::uint64_t z, const ForestPartition& fp, const TreePartition& tp,
                      int i) {
  const bool brute = block_is_minimal_brute(z, fp, tp, i);
  const bool closed = block_is_minimal_closed_form(z, fp, tp, i);
  if (brute != closed)
    throw std::logic_error("block_is_minimal: brute and closed-form routes disagree");
  return brute;
}

long long threshold_from_alpha(int n, double alpha, double factor) {
  return static_cast<long long>(std::ceil(factor * std::pow(static_cast<double>(n), 3.0 * alpha)));
}

StatTest::StatTest(StatTestConfig cfg, LocalFunction f)
    : cfg_(cfg), f_(std::move(f)) {
  if (cfg_.variant != TestVariant::MAJMOD)
    throw std::invalid_argument("StatTest: TREE variant needs a tree");
  validate_local_function(f_);
  decomp_ = viola_block_decomposition(f_);
  build_fixed_image_set();
}

StatTest::StatTest(StatTestConfig cfg, LocalFunction f, BalancedTree tree,
                   TreePartition partition)
    : cfg_(cfg), f_(std::move(f)), tree_(tree), partition_(std::move(partition)) {
  if (cfg_.variant != TestVariant::TREE)
    throw std::invalid_argument("StatTest: tree constructor is for the TREE variant");
  validate_local_function(f_);
  auto [dec, fp] = tree_forest_decomposition(f_, tree_, partition_);
  decomp_ = std::move(dec);
  forest_ = std::move(fp);
  build_fixed_image_set();
}

int StatTest::output_bits() const { return f_.n_outputs(); }

void StatTest::build_fixed_image_set() {
  if (f_.n_inputs > 24) throw std::invalid_argument("StatTest: input space too large for TF");
  const std::uint64_t total = std::uint64_t{1} << f_.n_inputs;
  for (std::uint64_t u = 0; u < total; ++u) {
    long long fixed_count = 0;
    for (std::size_t i = 0; i < decomp_.blocks.size(); ++i)
      if (block_is_y_fixed(f_, decomp_, static_cast<int>(i), u)) ++fixed_count;
    if (fixed_count >= cfg_.nf) fixed_images_.insert(evaluate(f_, u));
  }
}

int StatTest::target_bit(std::uint64_t z) const {
  const int bits = f_.n_outputs();
  const std::uint64_t payload = z >> 1;
  if (cfg_.variant == TestVariant::MAJMOD)
    return majmod_xor_parity(cfg_.p, payload, bits - 1);
  const int n = tree_.n_vertices;
  const std::uint64_t x = payload & ((std::uint64_t{1} << (n - 1)) - 1);
  const std::uint64_t d = payload >> (n - 1);
  return pmmajmod(cfg_.p, tree_, x, d);
}

unsigned StatTest::membership(std::uint64_t z) const {
  unsigned labels = 0;
  const int bits = f_.n_outputs();

  if (static_cast<int>(z & 1) != target_bit(z)) labels |= kTestWrongBit;
  if (fixed_images_.count(z)) labels |= kTestFixed;

  long long zero_blocks = 0, minimal_blocks = 0;
  for (std::size_t i = 0; i < decomp_.blocks.size(); ++i) {
    bool all_zero = true;
    for (int o : decomp_.blocks[i].outputs)
      if (z >> (bits - 1 - o) & 1) { all_zero = false; break; }
    if (all_zero) ++zero_blocks;
    if (cfg_.variant == TestVariant::TREE &&
        block_is_minimal(z >> 1, forest_, partition_, static_cast<int>(i) + 1))
      ++minimal_blocks;
  }
  if (zero_blocks <= cfg_.n0) labels |= kTestZeros;
  if (cfg_.variant == TestVariant::TREE && minimal_blocks <= cfg_.nm) labels |= kTestMinimal;
  return labels;
}

double StatTest::pass_probability_of_function(double bias) const {
  const double p1 = 0.5 - bias, p0 = 0.5 + bias;
  const std::uint64_t total = std::uint64_t{1} << f_.n_inputs;
  double pass = 0.0;
  for (std::uint64_t u = 0; u < total; ++u) {
    const int ones = std::popcount(u);
    const double w = std::pow(p1, ones) * std::pow(p0, f_.n_inputs - ones);
    if (membership(evaluate(f_, u)) != 0) pass += w;
  }
  return pass;
}

double StatTest::pass_probability_of_pmf(const Pmf& target) const {
  if (target.bit_length() != f_.n_outputs())
    throw std::invalid_argument("pass_probability: width mismatch");
  double pass = 0.0;
  for (const auto& [z, p] : target)
    if (membership(z) != 0) pass += p;
  return pass;
}

namespace {

std::vector<std::vector<int>> subsets_of_size(int l, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(idx);
    int i = d - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == l - d + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < d; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace

SearchResult brute_force_min_tvd(int n_out, int d, int l, const Pmf& target, double bias,
                                 int threads) {
  if (n_out < 1 || d < 1 || l < 1 || d > l)
    throw std::invalid_argument("brute_force_min_tvd: bad parameters");
  if (target.bit_length() != n_out)
    throw std::invalid_argument("brute_force_min_tvd: target width mismatch");
  const auto t0 = std::chrono::steady_clock::now();

  const std::vector<std::vector<int>> deps = subsets_of_size(l, d);
  const std::uint64_t tables = std::uint64_t{1} << (std::uint64_t{1} << d);
  const std::uint64_t per_output = deps.size() * tables;
  double space_d = 1.0;
  for (int i = 0; i < n_out; ++i) space_d *= static_cast<double>(per_output);
  if (space_d > 1e9) throw std::invalid_argument("brute_force_min_tvd: search space above 1e9");
  const std::uint64_t space = static_cast<std::uint64_t>(space_d);

  // dense target over n_out bits
  std::vector<double> tgt(std::size_t{1} << n_out, 0.0);
  for (const auto& [k, v] : target) tgt[static_cast<std::size_t>(k)] = v;

  // per-input weights
  const std::uint64_t inputs = std::uint64_t{1} << l;
  std::vector<double> weight(static_cast<std::size_t>(inputs));
  for (std::uint64_t u = 0; u < inputs; ++u)
    weight[static_cast<std::size_t>(u)] =
        std::pow(0.5 - bias, std::popcount(u)) * std::pow(0.5 + bias, l - std::popcount(u));

  // per-output-option bit rows: option -> packed outputs over all inputs
  std::vector<std::vector<std::uint64_t>> option_bits;
  option_bits.reserve(per_output);
  for (const auto& dep : deps) {
    for (std::uint64_t tb = 0; tb < tables; ++tb) {
      std::vector<std::uint64_t> row((inputs + 63) / 64, 0);
      for (std::uint64_t u = 0; u < inputs; ++u) {
        std::size_t idx = 0;
        for (int dd : dep) idx = (idx << 1) | (u >> (l - 1 - dd) & 1);
        if (tb >> idx & 1) row[u / 64] |= std::uint64_t{1} << (u % 64);
      }
      option_bits.push_back(std::move(row));
    }
  }

  auto evaluate_candidate = [&](std::uint64_t code) {
    std::vector<const std::vector<std::uint64_t>*> rows(static_cast<std::size_t>(n_out));
    std::uint64_t c = code;
    for (int o = n_out - 1; o >= 0; --o) {
      rows[static_cast<std::size_t>(o)] = &option_bits[c % per_output];
      c /= per_output;
    }
    std::vector<double> pr(std::size_t{1} << n_out, 0.0);
    for (std::uint64_t u = 0; u < inputs; ++u) {
      std::uint64_t z = 0;
      for (int o = 0; o < n_out; ++o)
        z = (z << 1) | ((*rows[static_cast<std::size_t>(o)])[u / 64] >> (u % 64) & 1);
      pr[static_cast<std::size_t>(z)] += weight[static_cast<std::size_t>(u)];
    }
    double s = 0.0;
    for (std::size_t z = 0; z < pr.size(); ++z) s += std::abs(pr[z] - tgt[z]);
    return 0.5 * s;
  };

  // deterministic reduce: lexicographic (tvd, code) minimum
  std::vector<std::pair<double, std::uint64_t>> best_per_thread;
  const int nt = std::max(1, threads);
  best_per_thread.assign(static_cast<std::size_t>(nt), {2.0, 0});
  auto worker = [&](int t) {
    std::pair<double, std::uint64_t> best{2.0, 0};
    for (std::uint64_t code = static_cast<std::uint64_t>(t); code < space;
         code += static_cast<std::uint64_t>(nt)) {
      const double tv = evaluate_candidate(code);
      if (tv < best.first || (tv == best.first && code < best.second)) best = {tv, code};
    }
    best_per_thread[static_cast<std::size_t>(t)] = best;
  };
  if (nt == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  std::pair<double, std::uint64_t> best{2.0, 0};
  for (const auto& b : best_per_thread)
    if (b.first < best.first || (b.first == best.first && b.second < best.second)) best = b;

  // materialize the witness
  LocalFunction witness;
  witness.n_inputs = l;
  witness.locality = d;
  std::uint64_t c = best.second;
  std::vector<std::uint64_t> opts(static_cast<std::size_t>(n_out));
  for (int o = n_out - 1; o >= 0; --o) {
    opts[static_cast<std::size_t>(o)] = c % per_output;
    c /= per_output;
  }
  for (int o = 0; o < n_out; ++o) {
    const std::uint64_t opt = opts[static_cast<std::size_t>(o)];
    OutputSpec spec;
    spec.deps = deps[static_cast<std::size_t>(opt / tables)];
    const std::uint64_t tb = opt % tables;
    spec.table.resize(std::size_t{1} << d);
    for (std::size_t i = 0; i < spec.table.size(); ++i) spec.table[i] = tb >> i & 1;
    witness.outputs.push_back(std::move(spec));
  }

  SearchResult res;
  res.min_tvd = best.first;
  res.witness = std::move(witness);
  res.space_size = space;
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::vector<std::uint8_t> biased_input_stream(double bias, int count, std::uint64_t seed) {
  if (std::abs(bias) > 0.5) throw std::invalid_argument("biased_input_stream: |bias| > 1/2");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5 - bias);
  std::vector<std::uint8_t> out(static_cast<std::size_t>(count));
  for (auto& b : out) b = coin(rng) ? 1 : 0;
  return out;
}

std::string LocalFunction::to_json() const {
  nlohmann::json j;
  j["l"] = n_inputs;
  j["d"] = locality;
  nlohmann::json outs = nlohmann::json::array();
  for (const OutputSpec& o : outputs) {
    std::string bits;
    for (std::uint8_t b : o.table) bits += b ? '1' : '0';
    outs.push_back({{"deps", o.deps}, {"table", bits}});
  }
  j["outputs"] = outs;
  return j.dump();
}

LocalFunction LocalFunction::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  LocalFunction f;
  f.n_inputs = j.at("l").get<int>();
  f.locality = j.at("d").get<int>();
  for (const auto& jo : j.at("outputs")) {
    OutputSpec o;
    o.deps = jo.at("deps").get<std::vector<int>>();
    for (char ch : jo.at("table").get<std::string>()) o.table.push_back(ch == '1' ? 1 : 0);
    f.outputs.push_back(std::move(o));
  }
  validate_local_function(f);
  return f;
}

}  // namespace shallow
